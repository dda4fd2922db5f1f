""" Tests the uncertainty bounds and the numerical minimiser behind them. """
import numpy as np
import pytest
import scipy.optimize

import qcrypt.matcore as mc
import qcrypt.mubclifford as mub
import qcrypt.uncertainty as unc
from qcrypt.errors import ValidationError

RESTARTS = 8

def test_maassen_uffink():
    """ Computational against Hadamard gives half a bit on average, a basis with itself none. """
    assert unc.maassen_uffink_bound(mc.I2, mc.HADAMARD) == pytest.approx(0.5)
    assert unc.maassen_uffink_bound(mc.I2, mc.I2) == 0
    assert unc.pairwise_bound(mub.build_family("pauli:5")) == pytest.approx(np.log2(5) / 2)
    assert unc.pairwise_bound(mub.standard_bases(1).subset([0])) == 0

def test_full_collision_bound():
    """ The complete qubit set gives log(3/2). """
    assert unc.full_mub_collision_bound(mub.standard_bases(1)) == pytest.approx(np.log2(1.5))

@pytest.mark.parametrize("kind", [unc.SHANNON, unc.COLLISION])
def test_gradient(kind, rng):
    """ The analytic gradient matches finite differences. """
    measurements = unc.basis_measurements(mub.build_family("pauli:3"))
    minimizer = unc.EntropyMinimizer(measurements, kind, restarts=1)
    w = rng.standard_normal(6)
    error = scipy.optimize.check_grad(lambda x: minimizer.objective(x)[0],
                                      lambda x: minimizer.objective(x)[1], w)
    assert error < 1e-5

def test_minimizer_rejects_unknown_kind():
    """ Only Shannon and collision entropies are minimised. """
    with pytest.raises(ValidationError):
        unc.EntropyMinimizer(unc.basis_measurements(mub.standard_bases(1)), "tsallis")

def test_two_bases_tight():
    """ Two qubit bases reach the half-bit bound at a basis vector. """
    result = unc.min_avg_shannon(mub.standard_bases(1).subset([0, 1]), RESTARTS)
    assert result.bound == pytest.approx(0.5)
    assert result.achieved == pytest.approx(0.5, abs=1e-6)
    assert result.tight

def test_three_bases_loose():
    """ With three qubit bases the pairwise bound ½ stays below the true minimum ⅔. """
    result = unc.min_avg_shannon(mub.standard_bases(1), RESTARTS)
    assert result.achieved == pytest.approx(2 / 3, abs=1e-5)
    assert not result.tight
    doc = result.to_dict()
    assert doc["d"] == 2 and doc["m_or_K"] == 3
    assert np.linalg.norm(np.array(doc["minimizer"]["re"]) + 1j * np.array(doc["minimizer"]["im"])) == pytest.approx(1)

def test_latin_tight():
    """ The four Latin-square bases in dimension 9 attain (log 9)/2. """
    result = unc.min_avg_shannon(mub.build_family("latin:3"), RESTARTS)
    assert result.bound == pytest.approx(np.log2(3))
    assert result.tight

def test_full_set_collision_tight():
    """ All three qubit bases attain the collision bound log(3/2). """
    result = unc.min_avg_collision(mub.standard_bases(1), RESTARTS)
    assert result.achieved == pytest.approx(np.log2(1.5), abs=1e-5)
    assert result.tight

def test_dimension_cap():
    """ Families beyond dimension 16 are refused. """
    with pytest.raises(ValidationError):
        unc.min_avg_shannon(mub.build_family("pauli:17"), RESTARTS)

@pytest.mark.parametrize("n, k", [(1, 2), (1, 3), (2, 4), (2, 5)])
def test_clifford_shannon(n, k):
    """ K anti-commuting observables attain 1 − 1/K. """
    result = unc.clifford_shannon_relation(n, k, RESTARTS)
    assert result.bound == pytest.approx(1 - 1 / k)
    assert result.tight
    assert result.dim == 2 ** n

def test_clifford_collision():
    """ Three Pauli observables attain 1 − log(4/3). """
    result = unc.clifford_collision_relation(1, 3, RESTARTS)
    assert result.bound == pytest.approx(1 - np.log2(4 / 3))
    assert result.tight

def test_clifford_count_range():
    """ K is limited to 2n + 1. """
    with pytest.raises(ValidationError):
        unc.clifford_shannon_relation(1, 4, RESTARTS)
    with pytest.raises(ValidationError):
        unc.clifford_collision_relation(2, 0, RESTARTS)

def test_meta_uncertainty(rng):
    """ Σ_j Tr(ρΓ_j)² is at most one, with equality for qubit pure states. """
    g1 = mub.clifford_generators(1)
    assert unc.meta_uncertainty_check(mc.projector(mc.random_pure(2, rng)), g1) == pytest.approx(1)
    g2 = mub.clifford_generators(2)
    for _ in range(5):
        assert unc.meta_uncertainty_check(mc.random_density(4, rng), g2) <= 1 + 1e-9

def test_restarts_are_seeded():
    """ The same seed gives the same minimiser. """
    family = mub.standard_bases(1)
    a = unc.min_avg_shannon(family, 4, seed=7)
    b = unc.min_avg_shannon(family, 4, seed=7)
    assert a.achieved == b.achieved
    assert np.array_equal(a.minimizer, b.minimizer)
