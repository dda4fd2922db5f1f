"""
Entropic uncertainty relations: analytic lower bounds and a numerical minimiser that
checks how tight they are.
"""
import logging

import numpy as np
import scipy.optimize

import qcrypt.matcore as mc
import qcrypt.mubclifford as mub
from qcrypt.errors import ConvergenceError, ValidationError

DEFAULT_RESTARTS = 64
DEFAULT_SEED = 1234
MAX_ITER = 2000
TIGHT_TOL = 1e-3
MAX_DIM = 16
PROB_FLOOR = 1e-16
LN2 = np.log(2)

SHANNON = "shannon"
COLLISION = "collision"

logger = logging.getLogger("UNCERTAINTY")

class UncertaintyResult:
    """ Analytic bound next to the numerical minimum over pure states. """
    def __init__(self, relation, dim, count, bound, achieved, minimizer, tol=TIGHT_TOL):
        self.relation = relation
        self.dim = dim
        self.count = count
        self.bound = float(bound)
        self.achieved = float(achieved)
        self.minimizer = minimizer
        self.tight = abs(self.achieved - self.bound) <= tol
        if self.achieved < self.bound - 1e-6:
            logger.warning(f"{relation}: numerical minimum {self.achieved:.8f} "
                           f"is below the bound {self.bound:.8f}")

    def to_dict(self):
        return {
            "relation": self.relation,
            "d": self.dim,
            "m_or_K": self.count,
            "bound": self.bound,
            "achieved": self.achieved,
            "tight": self.tight,
            "minimizer": {"re": self.minimizer.real.tolist(),
                          "im": self.minimizer.imag.tolist()},
        }

class EntropyMinimizer:
    """
    Minimise the average Shannon or collision entropy of several measurements over
    pure states, by multi-start L-BFGS-B on unnormalised amplitude vectors.
    """
    def __init__(self, measurements, kind=SHANNON, restarts=DEFAULT_RESTARTS,
                 seed=DEFAULT_SEED, max_iter=MAX_ITER):
        """
        :param measurements: list of projective measurements, each a list of projectors
        :param kind: SHANNON or COLLISION
        :param restarts: number of random starting points
        :param seed: root seed for the restarts
        :param max_iter: iteration cap for each restart
        """
        if kind not in (SHANNON, COLLISION):
            raise ValidationError(f"unknown entropy kind {kind!r}")
        self.sizes = [len(m) for m in measurements]
        self.projectors = np.array([p for m in measurements for p in m], dtype=complex)
        self.count = len(measurements)
        self.dim = self.projectors.shape[1]
        self.kind = kind
        self.restarts = restarts
        self.seed = seed
        self.max_iter = max_iter
        self.logger = logging.getLogger("UNCERTAINTY")

    def _probabilities(self, v):
        pv = self.projectors @ v
        norm = np.vdot(v, v).real
        return np.einsum('i,ki->k', v.conj(), pv).real / norm, pv, norm

    def _split(self, values):
        start = 0
        for size in self.sizes:
            yield slice(start, start + size), values[start:start + size]
            start += size

    def _coefficients(self, probs):
        """ Objective value and ∂f/∂p_k. """
        value = 0.0
        coeff = np.zeros_like(probs)
        for span, p in self._split(probs):
            p = np.clip(p, PROB_FLOOR, None)
            if self.kind == SHANNON:
                value -= np.sum(p * np.log2(p))
                coeff[span] = -(np.log2(p) + 1 / LN2)
            else:
                total = np.sum(p ** 2)
                value -= np.log2(total)
                coeff[span] = -2 * p / (LN2 * total)
        return value / self.count, coeff / self.count

    def objective(self, w):
        """ Average entropy and its gradient with respect to w = [Re v, Im v]. """
        v = w[:self.dim] + 1j * w[self.dim:]
        probs, pv, norm = self._probabilities(v)
        value, coeff = self._coefficients(probs)
        grad = 2 * (np.einsum('k,ki->i', coeff, pv) - np.dot(coeff, probs) * v) / norm
        return value, np.concatenate([grad.real, grad.imag])

    def evaluate(self, psi):
        psi = np.asarray(psi, dtype=complex)
        return self.objective(np.concatenate([psi.real, psi.imag]))[0]

    def minimize(self, candidates=()):
        """
        Run every restart, polishing the candidates first.

        :param candidates: extra starting vectors
        :returns: (minimum value, normalised minimiser)
        """
        starts = [np.asarray(c, dtype=complex) for c in candidates]
        for child in np.random.SeedSequence(self.seed).spawn(self.restarts):
            starts.append(mc.random_pure(self.dim, np.random.default_rng(child)))

        best_value, best = np.inf, None
        capped = 0
        for v in starts:
            value = self.evaluate(v)
            if value < best_value:
                best_value, best = value, v
            result = scipy.optimize.minimize(
                self.objective, np.concatenate([v.real, v.imag]), jac=True,
                method='L-BFGS-B', options={'maxiter': self.max_iter, 'gtol': 1e-12})
            if result.status == 1:
                capped += 1
            if result.fun < best_value:
                best_value = float(result.fun)
                best = result.x[:self.dim] + 1j * result.x[self.dim:]

        if capped == len(starts):
            raise ConvergenceError(f"all {len(starts)} starts hit the iteration cap")
        best = best / np.linalg.norm(best)
        best = mc.fix_phase(best.reshape(-1, 1)).ravel()
        self.logger.info(f"{self.kind} minimum over {len(starts)} starts: {best_value:.8f}")
        return float(best_value), best

def basis_measurements(mubs):
    """ Rank-one projectors of every basis in the set. """
    return [[mc.projector(u[:, k]) for k in range(mubs.dim)] for u in mubs.bases]

def observable_measurements(observables):
    """ Two-outcome projectors (I ± Γ)/2 of each ±1-valued observable. """
    eye = np.eye(observables[0].shape[0])
    return [[(eye + g) / 2, (eye - g) / 2] for g in observables]

def maassen_uffink_bound(b1, b2):
    """ −log₂ max_{k,l} |⟨b1_k|b2_l⟩| for bases given as unitaries. """
    b1 = mc.as_matrix(b1, "basis")
    b2 = mc.as_matrix(b2, "basis")
    mc.same_dim(b1, b2)
    return float(max(0.0, -np.log2(np.max(np.abs(b1.conj().T @ b2)))))

def pairwise_bound(mubs):
    """ Average of the pairwise Maassen-Uffink bounds; (log d)/2 for MUBs, 0 for one basis. """
    pairs = [(t, u) for t in range(len(mubs)) for u in range(t + 1, len(mubs))]
    if not pairs:
        return 0.0
    return float(np.mean([maassen_uffink_bound(mubs.bases[t], mubs.bases[u])
                          for t, u in pairs]))

def full_mub_collision_bound(mubs):
    """ −log((N + d − 1)/(dN)) for N mutually unbiased bases in dimension d. """
    n, d = len(mubs), mubs.dim
    return float(-np.log2((n + d - 1) / (d * n)))

def _basis_candidates(mubs):
    candidates = [u[:, k] for u in mubs.bases for k in range(mubs.dim)]
    candidates.extend(mc.ket(k, mubs.dim) for k in range(mubs.dim))
    side = int(round(np.sqrt(mubs.dim)))
    if side * side == mubs.dim:
        candidates.append(np.eye(side, dtype=complex).ravel() / np.sqrt(side))
    return candidates

def _check_size(mubs):
    if mubs.dim > MAX_DIM:
        raise ValidationError(f"dimension {mubs.dim} exceeds {MAX_DIM}")

def min_avg_shannon(mubs, restarts=DEFAULT_RESTARTS, seed=DEFAULT_SEED, tol=TIGHT_TOL):
    """ min over ψ of (1/m) Σ_t H(B_t|ψ) next to its analytic bound. """
    _check_size(mubs)
    minimizer = EntropyMinimizer(basis_measurements(mubs), SHANNON, restarts, seed)
    achieved, psi = minimizer.minimize(_basis_candidates(mubs))
    return UncertaintyResult("mub-shannon", mubs.dim, len(mubs), pairwise_bound(mubs),
                             achieved, psi, tol)

def min_avg_collision(mubs, restarts=DEFAULT_RESTARTS, seed=DEFAULT_SEED, tol=TIGHT_TOL):
    """ min over ψ of (1/N) Σ_t H₂(B_t|ψ) next to the full-set collision bound. """
    _check_size(mubs)
    minimizer = EntropyMinimizer(basis_measurements(mubs), COLLISION, restarts, seed)
    achieved, psi = minimizer.minimize(_basis_candidates(mubs))
    return UncertaintyResult("mub-collision", mubs.dim, len(mubs),
                             full_mub_collision_bound(mubs), achieved, psi, tol)

def _clifford_candidates(observables):
    candidates = []
    for g in observables + [sum(observables) / np.sqrt(len(observables))]:
        _, vecs = np.linalg.eigh(g)
        candidates.extend(vecs[:, k] for k in range(vecs.shape[1]))
    return candidates

def _check_count(n, k):
    if not 1 <= k <= 2 * n + 1:
        raise ValidationError(f"K must lie in 1..{2 * n + 1}, got {k}")

def _clifford_relation(n, k, kind, bound, restarts, seed, tol):
    observables = mub.clifford_generators(n).observables(k)
    minimizer = EntropyMinimizer(observable_measurements(observables), kind, restarts, seed)
    achieved, psi = minimizer.minimize(_clifford_candidates(observables))
    return UncertaintyResult(f"clifford-{kind}", 2 ** n, k, bound, achieved, psi, tol)

def clifford_shannon_relation(n, k, restarts=DEFAULT_RESTARTS, seed=DEFAULT_SEED, tol=TIGHT_TOL):
    """ (1/K) Σ H(Γ_j|ρ) ≥ 1 − 1/K for K anti-commuting generators. """
    _check_count(n, k)
    return _clifford_relation(n, k, SHANNON, 1 - 1 / k, restarts, seed, tol)

def clifford_collision_relation(n, k, restarts=DEFAULT_RESTARTS, seed=DEFAULT_SEED, tol=TIGHT_TOL):
    """ (1/K) Σ H₂(Γ_j|ρ) ≥ 1 − log(1 + 1/K). """
    _check_count(n, k)
    return _clifford_relation(n, k, COLLISION, 1 - np.log2(1 + 1 / k), restarts, seed, tol)

def meta_uncertainty_check(rho, g):
    """ Σ_{j=0}^{2n} Tr(ρΓ_j)², at most 1 for every state. """
    return float(np.sum(mub.vector_components(rho, g) ** 2))
