""" Tests the classical and measured entropies and the cq-state helpers. """
import numpy as np
import pytest

import qcrypt.entropy as ent
import qcrypt.matcore as mc
from qcrypt.errors import ValidationError

import tests.conftest as helpers

def test_check_dist():
    """ Negative entries, empty vectors and bad normalisation are rejected. """
    with pytest.raises(ValidationError):
        ent.check_dist([])
    with pytest.raises(ValidationError):
        ent.check_dist([1.5, -0.5])
    with pytest.raises(ValidationError):
        ent.check_dist([0.3, 0.3])
    assert ent.check_dist([[0.25, 0.25], [0.5, 0]]).shape == (4,)

def test_shannon():
    """ Uniform distributions have log d bits, point masses none. """
    assert ent.shannon([0.25] * 4) == pytest.approx(2)
    assert ent.shannon([1, 0, 0]) == 0
    assert ent.binary_entropy(0.5) == pytest.approx(1)
    assert ent.binary_entropy(0.11) == pytest.approx(0.4999159, abs=1e-5)
    with pytest.raises(ValidationError):
        ent.binary_entropy(1.1)

def test_renyi_ordering(rng):
    """ H_min ≤ H₂ ≤ H ≤ H_½ on a random distribution, all equal on a uniform one. """
    p = rng.random(6)
    p /= p.sum()
    h_min = ent.renyi(p, ent.INF)
    h2 = ent.renyi(p, 2)
    h_half = ent.renyi(p, 0.5)
    assert h_min <= h2 <= ent.shannon(p) <= h_half
    for alpha in (0.5, 2, 3, ent.INF):
        assert ent.renyi([1 / 8] * 8, alpha) == pytest.approx(3)
    with pytest.raises(ValidationError):
        ent.renyi(p, 1)
    with pytest.raises(ValidationError):
        ent.renyi(p, 0)

def test_measurement_entropy():
    """ |0⟩ measured in the Hadamard basis gives one bit; in its own basis none. """
    zero = mc.ket(0, 2)
    assert ent.measurement_entropy(mc.HADAMARD, zero) == pytest.approx(1)
    assert ent.measurement_entropy(mc.I2, zero) == pytest.approx(0)
    assert ent.measurement_collision(mc.HADAMARD, zero) == pytest.approx(1)
    with pytest.raises(ValidationError):
        ent.outcome_distribution(np.eye(4), zero)

def test_measurement_entropy_invariances(rng):
    """ A global phase on ψ or a reordering of the basis vectors changes nothing. """
    for dim in (2, 3, 5):
        basis = mc.random_unitary(dim, rng)
        psi = mc.random_pure(dim, rng)
        value = ent.measurement_entropy(basis, psi)
        phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
        assert ent.measurement_entropy(basis, phase * psi) == pytest.approx(value, abs=1e-12)
        assert ent.measurement_entropy(basis[:, rng.permutation(dim)], psi) == pytest.approx(value, abs=1e-12)
        assert ent.measurement_collision(basis[:, rng.permutation(dim)], psi) == pytest.approx(
            ent.measurement_collision(basis, psi), abs=1e-12)

def test_mutual_information():
    """ Perfect correlation gives H(X), independence gives 0. """
    assert ent.mutual_information(np.eye(4) / 4) == pytest.approx(2)
    assert ent.mutual_information(np.full((2, 3), 1 / 6)) == pytest.approx(0)
    with pytest.raises(ValidationError):
        ent.mutual_information([0.5, 0.5])

def test_cq_state_validation():
    """ Mismatched lengths and mixed dimensions are rejected. """
    with pytest.raises(ValidationError):
        ent.CqState([0, 1], [1.0], [np.eye(2) / 2])
    with pytest.raises(ValidationError):
        ent.CqState([0, 1], [0.5, 0.5], [np.eye(2) / 2, np.eye(3) / 3])

def test_cq_average():
    """ The average of the computational basis ensemble is maximally mixed. """
    cq = helpers.orthogonal_cq(2)
    assert np.allclose(cq.average(), np.eye(4) / 4)
    assert cq.dim == 4
    assert len(cq.to_dict()["conditionals"]) == 4

def test_guessing_collision_identity(rng):
    """
    The square-root measurement succeeds with probability 2^{−H₂(X|ρ)} on any cq-state.
    """
    for _ in range(100):
        dim = int(rng.integers(2, 5))
        count = int(rng.integers(2, 5))
        rank = int(rng.integers(1, dim + 1))
        cq = helpers.random_cq(rng, dim, count, rank)
        assert ent.srm_success(cq) == pytest.approx(2 ** -ent.quantum_collision_cond(cq), abs=1e-9)

def test_srm_extremes():
    """ Orthogonal states are guessed perfectly, identical states at the prior maximum. """
    cq = helpers.orthogonal_cq(2)
    assert ent.srm_success(cq) == pytest.approx(1)
    assert ent.quantum_collision_cond(cq) == pytest.approx(0, abs=1e-9)
    same = helpers.identical_cq(1, np.eye(2) / 2)
    assert ent.srm_success(same) == pytest.approx(0.5)

def test_square_root_measurement_is_povm(rng):
    """ The square-root measurement is complete even for rank-deficient averages. """
    cq = ent.CqState([0, 1], [0.5, 0.5], [mc.projector(mc.ket(0, 3)), mc.projector(mc.ket(1, 3))])
    mc.check_povm(ent.square_root_measurement(cq))
    mc.check_povm(ent.square_root_measurement(helpers.random_cq(rng, 3, 5, 1)))

def test_holevo_quantity(rng):
    """ χ is H(X) for orthogonal pure states and bounded by log d in general. """
    assert ent.holevo_quantity(helpers.orthogonal_cq(2)) == pytest.approx(2)
    assert 0 <= ent.holevo_quantity(helpers.random_cq(rng, 2, 6)) <= 1 + 1e-9
