""" Tests the dense matrix helpers, validation and channels. """
import numpy as np
import pytest

import qcrypt.matcore as mc
from qcrypt.errors import ValidationError

import tests.conftest as helpers

def test_validation():
    """ Non-square, non-Hermitian, non-PSD and unnormalised inputs are all rejected. """
    with pytest.raises(ValidationError):
        mc.as_matrix(np.zeros((2, 3)))
    with pytest.raises(ValidationError):
        mc.check_hermitian([[0, 1], [0, 0]])
    with pytest.raises(ValidationError):
        mc.check_density(np.diag([1.5, -0.5]))
    with pytest.raises(ValidationError):
        mc.check_density(np.eye(2))
    with pytest.raises(ValidationError):
        mc.check_pure([1, 1])
    with pytest.raises(ValidationError):
        mc.check_povm([np.eye(2) / 2])
    # ValidationError is still a ValueError for callers that do not know our types
    with pytest.raises(ValueError):
        mc.as_matrix([[np.nan]])

def test_eig_hermitian_phase(rng):
    """ Eigenvectors come back orthonormal with their first nonzero amplitude real positive. """
    m = mc.random_density(4, rng)
    evals, evecs = mc.eig_hermitian(m)
    assert np.all(np.diff(evals) >= 0)
    assert np.allclose(evecs.conj().T @ evecs, np.eye(4))
    assert np.allclose(evecs @ np.diag(evals) @ evecs.conj().T, m)
    for k in range(4):
        first = evecs[np.flatnonzero(np.abs(evecs[:, k]) > 1e-10)[0], k]
        assert abs(first.imag) < 1e-12 and first.real > 0

def test_trace_distance():
    """ Orthogonal states are at distance 1, |0⟩ and |+⟩ at 1/√2, a state from itself 0. """
    zero = mc.projector(mc.ket(0, 2))
    one = mc.projector(mc.ket(1, 2))
    plus = mc.projector(mc.HADAMARD @ mc.ket(0, 2))
    assert mc.trace_distance(zero, one) == pytest.approx(1)
    assert mc.trace_distance(zero, plus) == pytest.approx(1 / np.sqrt(2))
    assert mc.trace_distance(zero, zero) == pytest.approx(0)
    with pytest.raises(ValidationError):
        mc.trace_distance(zero, np.eye(4) / 4)

def test_fidelity(rng):
    """ Fidelity is 1 on equal states, |⟨ψ|φ⟩| on pure ones and symmetric in general. """
    a, b = helpers.random_states(rng, 3, 2)
    assert mc.fidelity(a, a) == pytest.approx(1, abs=1e-7)
    assert mc.fidelity(a, b) == pytest.approx(mc.fidelity(b, a), abs=1e-9)
    psi, phi = mc.random_pure(3, rng), mc.random_pure(3, rng)
    assert mc.fidelity(mc.projector(psi), mc.projector(phi)) == pytest.approx(abs(np.vdot(psi, phi)), abs=1e-6)
    # Fuchs-van de Graaf
    assert 1 - mc.fidelity(a, b) <= mc.trace_distance(a, b) + 1e-9

def test_partial_trace(rng):
    """ Tracing out either side of a product state leaves the other factor. """
    a, b = mc.random_density(2, rng), mc.random_density(3, rng)
    ab = np.kron(a, b)
    assert np.allclose(mc.partial_trace(ab, (2, 3), keep=0), a)
    assert np.allclose(mc.partial_trace(ab, (2, 3), keep=1), b)
    with pytest.raises(ValidationError):
        mc.partial_trace(ab, (2, 2))
    with pytest.raises(ValidationError):
        mc.partial_trace(ab, (2, 3), keep=2)

def test_bloch():
    """ Bloch vectors of the Pauli eigenstates and the round trip through from_bloch. """
    plus = mc.projector(mc.HADAMARD @ mc.ket(0, 2))
    assert mc.bloch_vector(plus) == pytest.approx((1, 0, 0))
    assert mc.bloch_vector(np.eye(2) / 2) == pytest.approx((0, 0, 0))
    assert np.allclose(mc.from_bloch((0, 0, -1)), mc.projector(mc.ket(1, 2)))
    with pytest.raises(ValidationError):
        mc.bloch_vector(np.eye(4) / 4)

def test_kron_all():
    """ Tensor products work for vectors and matrices alike. """
    v = mc.kron_all(mc.ket(1, 2), mc.ket(0, 2))
    assert np.allclose(v, mc.ket(2, 4))
    assert mc.kron_all(mc.X, mc.X, mc.X).shape == (8, 8)

def test_von_neumann():
    """ Pure states have zero entropy, the maximally mixed qubit one bit. """
    assert mc.von_neumann(mc.projector(mc.ket(0, 2))) == pytest.approx(0)
    assert mc.von_neumann(np.eye(4) / 4) == pytest.approx(2)

def test_depolarizing_channel():
    """ r = 1 is the identity, r = 0 maps everything to I/2, and Bloch vectors shrink by r. """
    plus = mc.projector(mc.HADAMARD @ mc.ket(0, 2))
    assert np.allclose(mc.depolarizing_channel(1).apply(plus), plus)
    assert np.allclose(mc.depolarizing_channel(0).apply(plus), np.eye(2) / 2)
    out = mc.apply_channel(mc.depolarizing_channel(0.4), plus)
    assert mc.bloch_vector(out) == pytest.approx((0.4, 0, 0))
    assert mc.depolarizing_channel(0.4).unital
    with pytest.raises(ValidationError):
        mc.depolarizing_channel(1.2)

def test_kraus_validation():
    """ Kraus operators that are not trace preserving are rejected. """
    with pytest.raises(ValidationError):
        mc.KrausChannel([np.eye(2) / 2])
    with pytest.raises(ValidationError):
        mc.KrausChannel([])
    with pytest.raises(ValidationError):
        mc.identity_channel(2).apply(np.eye(3) / 3)

def test_measure_channel():
    """ Measuring |+⟩ in the Hadamard basis records outcome 0 with certainty. """
    plus = mc.projector(mc.HADAMARD @ mc.ket(0, 2))
    out = mc.measure_channel(mc.HADAMARD).apply(plus)
    assert np.allclose(out, np.diag([1, 0]))

def test_compose_and_flagged(rng):
    """ Composition applies channels in order; a flagged instrument records the branch. """
    u = mc.random_unitary(2, rng)
    rho = mc.random_density(2, rng)
    composed = mc.unitary_channel(u).compose(mc.depolarizing_channel(0.5))
    expected = mc.depolarizing_channel(0.5).apply(u @ rho @ u.conj().T)
    assert np.allclose(composed.apply(rho), expected)

    branches = [[mc.projector(mc.ket(0, 2))], [mc.projector(mc.ket(1, 2))]]
    flagged = mc.KrausChannel.flagged(branches)
    assert flagged.out_dim == 4 and flagged.in_dim == 2
    out = flagged.apply(rho)
    assert np.trace(out).real == pytest.approx(1)
    # the flag register alone carries the measurement statistics
    assert np.allclose(np.diag(mc.partial_trace(out, (2, 2), keep=0)).real, np.diag(rho).real)

def test_random_generators(rng):
    """ Random states are valid and random unitaries unitary. """
    mc.check_density(mc.random_density(5, rng, rank=2))
    assert np.linalg.matrix_rank(mc.random_density(5, rng, rank=2), tol=1e-9) == 2
    mc.check_pure(mc.random_pure(4, rng))
    u = mc.random_unitary(4, rng)
    assert np.allclose(u.conj().T @ u, np.eye(4))

def test_json(rng):
    """ Matrices survive to_json/from_json and malformed documents are rejected. """
    m = mc.random_density(3, rng)
    assert np.allclose(mc.from_json(mc.to_json(m)), m)
    with pytest.raises(ValidationError):
        mc.from_json({"dim": 2, "re": [1, 0, 0]})
    with pytest.raises(ValidationError):
        mc.from_json({"re": [1]})
