""" Pytest fixtures and small ensembles shared by the tests. """
import numpy as np
import pytest

import qcrypt.entropy as ent
import qcrypt.matcore as mc

SEED = 1234

@pytest.fixture(scope='function')
def rng():
    """
    A freshly seeded generator, so every test sees the same random draws regardless of
    the order tests run in.

    :returns: numpy Generator
    """
    return np.random.default_rng(SEED)

def random_states(rng, dim, count, rank=None):
    """ A list of random density matrices. """
    return [mc.random_density(dim, rng, rank) for _ in range(count)]

def random_cq(rng, dim, count, rank=None):
    """ A cq-state with random prior and random conditionals. """
    weights = rng.random(count) + 0.1
    return ent.CqState(range(count), weights / weights.sum(), random_states(rng, dim, count, rank))

def orthogonal_cq(n):
    """ Uniform ensemble of the computational basis on n qubits. """
    d = 2 ** n
    return ent.CqState(range(d), np.full(d, 1 / d), [mc.projector(mc.ket(x, d)) for x in range(d)])

def identical_cq(n, rho):
    """ Uniform ensemble of 2ⁿ labels that all carry the same state. """
    d = 2 ** n
    return ent.CqState(range(d), np.full(d, 1 / d), [rho] * d)

def bit_states(bases):
    """ ½ Σ_b over the first bases of |0⟩ and |1⟩ rotated by I, H and K. """
    gates = [mc.I2, mc.HADAMARD, (mc.I2 + 1j * mc.X) / np.sqrt(2)][:bases]
    rho0 = sum(mc.projector(g @ mc.ket(0, 2)) for g in gates) / bases
    rho1 = sum(mc.projector(g @ mc.ket(1, 2)) for g in gates) / bases
    return rho0, rho1

def is_projector(p, tol=1e-8):
    return np.max(np.abs(p @ p - p)) <= tol and np.max(np.abs(p - p.conj().T)) <= tol
