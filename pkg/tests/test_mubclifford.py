""" Tests the basis families, Latin squares and the Clifford generators. """
import numpy as np
import pytest

import qcrypt.matcore as mc
import qcrypt.mubclifford as mub
from qcrypt.errors import ValidationError

@pytest.mark.parametrize("name, dim, count", [
    ("standard:1", 2, 3),
    ("standard:3", 8, 3),
    ("pauli:3", 3, 4),
    ("pauli:5", 5, 6),
    ("latin:3", 9, 4),
    ("product:1", 4, 3),
])
def test_families_are_unbiased(name, dim, count):
    """ Every named construction yields mutually unbiased orthonormal bases. """
    family = mub.build_family(name)
    assert family.dim == dim
    assert len(family) == count
    passed, report = mub.check_mutually_unbiased(family)
    assert passed
    assert report["worst_deviation"] <= mub.MUB_TOL

def test_biased_pair_reported():
    """ A basis paired with itself is far from unbiased and the pair is named. """
    passed, report = mub.check_mutually_unbiased(mub.MubSet([np.eye(2), np.eye(2)]))
    assert not passed
    assert report["worst_pair"] == [0, 1]
    assert report["worst_deviation"] == pytest.approx(0.5)

def test_family_errors():
    """ Unknown names, missing parameters and composite Pauli dimensions are rejected. """
    with pytest.raises(ValidationError):
        mub.build_family("cube:2")
    with pytest.raises(ValidationError):
        mub.build_family("standard")
    with pytest.raises(ValidationError):
        mub.build_family("pauli:4")
    with pytest.raises(ValidationError):
        mub.MubSet([np.ones((2, 2))])
    with pytest.raises(ValidationError):
        mub.MubSet([])

def test_subset_and_document():
    """ Subsets keep the family label; documents list d vectors per basis. """
    family = mub.build_family("standard:2").subset([0, 2])
    assert len(family) == 2 and family.family == "standard:2"
    doc = family.to_dict()
    assert len(doc["bases"]) == 2 and len(doc["bases"][0]) == 4

def test_clock_and_shift():
    """ Z X = ω X Z for the generalised Paulis. """
    d = 5
    x, z = mub.shift_operator(d), mub.clock_operator(d)
    assert np.allclose(z @ x, np.exp(2j * np.pi / d) * x @ z)
    assert np.allclose(x @ mc.ket(4, d), mc.ket(0, d))

def test_latin_squares():
    """ Parsing, orthogonality of cyclic squares and rejection of non-Latin grids. """
    sq = mub.parse_latin_square("1 2 3\n2 3 1\n3 1 2\n")
    assert sq.s == 3
    assert sq.positions(1) == [(0, 0), (1, 2), (2, 1)]
    a, b = mub.cyclic_latin_squares(3)
    assert a.orthogonal_to(b)
    assert not a.orthogonal_to(a)
    with pytest.raises(ValidationError):
        mub.parse_latin_square("1 2\n1 2")
    with pytest.raises(ValidationError):
        mub.parse_latin_square("1 x\n2 1")
    with pytest.raises(ValidationError):
        mub.cyclic_latin_squares(4)
    with pytest.raises(ValidationError):
        mub.latin_square_mub([a, a], 3)

def test_clifford_anticommutation():
    """ Γ_0..Γ_2n are Hermitian, square to I and pairwise anti-commute. """
    for n in (1, 2, 3):
        g = mub.clifford_generators(n)
        gammas = g.all()
        assert len(gammas) == 2 * n + 1
        for i, a in enumerate(gammas):
            assert np.allclose(a, a.conj().T)
            assert np.allclose(a @ a, np.eye(g.dim))
            for b in gammas[i + 1:]:
                assert np.allclose(a @ b + b @ a, 0)
    with pytest.raises(ValidationError):
        mub.clifford_generators(6)

def test_single_qubit_generators_are_paulis():
    """ On one qubit the generators are X, Z and Y. """
    g = mub.clifford_generators(1)
    assert np.allclose(g.gammas[0], mc.X)
    assert np.allclose(g.gammas[1], mc.Z)
    assert np.allclose(g.gamma0, mc.Y)
    assert len(g.observables(3)) == 3
    with pytest.raises(ValidationError):
        g.observables(4)

def test_vector_part(rng):
    """ The vector part keeps the Γ components and drops the rest. """
    g = mub.clifford_generators(2)
    rho = mc.random_density(4, rng)
    projected = mub.project_vector_part(rho, g)
    assert np.allclose(mub.vector_components(projected, g), mub.vector_components(rho, g))
    assert np.allclose(mub.vector_components(np.eye(4) / 4, g), 0)
    with pytest.raises(ValidationError):
        mub.vector_components(np.eye(2) / 2, g)

def test_observables_from_vectors(rng):
    """ ⟨Ψ|X_s ⊗ Y_t|Ψ⟩ equals x_s·y_t on the maximally entangled state. """
    xs = rng.standard_normal((2, 3))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    ys = rng.standard_normal((2, 3))
    ys /= np.linalg.norm(ys, axis=1, keepdims=True)
    alice, psi = mub.observables_from_vectors(xs)
    bob, _ = mub.observables_from_vectors(ys, transpose=True)
    for s in range(2):
        assert np.allclose(alice[s] @ alice[s], np.eye(alice[s].shape[0]))
        for t in range(2):
            value = np.vdot(psi, np.kron(alice[s], bob[t]) @ psi).real
            assert value == pytest.approx(xs[s] @ ys[t])
    with pytest.raises(ValidationError):
        mub.observables_from_vectors([[2.0, 0.0]])

@pytest.mark.parametrize("d", [2, 3])
def test_pauli_bases_are_covariant(d):
    """ Every X^a Z^b maps each Pauli basis onto itself up to order and phases. """
    family = mub.pauli_mub(d)
    shift, clock = mub.shift_operator(d), mub.clock_operator(d)
    for a in range(d):
        for b in range(d):
            g = np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
            for u in family.bases:
                overlaps = np.abs(u.conj().T @ g @ u)
                assert np.allclose(np.round(overlaps), overlaps, atol=1e-8)
                assert np.allclose(overlaps.sum(axis=0), 1) and np.allclose(overlaps.sum(axis=1), 1)

@pytest.mark.parametrize("n", [1, 2, 3])
def test_clifford_rotation_keeps_vector_norm(n, rng):
    """ Conjugating by Γ₁·(m̂·Γ) rotates the Γ components without changing their length. """
    g = mub.clifford_generators(n)
    m = rng.standard_normal(2 * n + 1)
    m /= np.linalg.norm(m)
    r = g.gammas[0] @ sum(c * gamma for c, gamma in zip(m, g.all()))
    assert np.allclose(r @ r.conj().T, np.eye(g.dim))
    rho = mc.random_density(g.dim, rng)
    before = mub.vector_components(rho, g)
    after = mub.vector_components(r @ rho @ r.conj().T, g)
    assert np.linalg.norm(after) == pytest.approx(np.linalg.norm(before), abs=1e-8)
