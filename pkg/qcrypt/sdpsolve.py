"""
Small dense semidefinite programs in standard form.

    primal: maximise Tr(CX) subject to Tr(A_i X) = b_i, X ⪰ 0
    dual:   minimise b·y subject to Z = Σ y_i A_i − C ⪰ 0

Solved by an infeasible primal-dual path-following method with the HKM search
direction, over real symmetric matrices only.
"""
import logging

import numpy as np
import scipy.linalg

import qcrypt.matcore as mc
from qcrypt.errors import ConvergenceError, InfeasibleError, ValidationError

DEFAULT_TOL = 1e-8
MAX_ITER = 200
SIGMA = 0.3
STEP_FRACTION = 0.95
STALL_START = 50
STALL_WINDOW = 30
BLOWUP = 1e12

logger = logging.getLogger("SDP")

def _real_symmetric(m, name):
    m = mc.as_matrix(m, name)
    if np.max(np.abs(m.imag), initial=0) > mc.HERMITIAN_TOL:
        raise ValidationError(f"{name} is complex; only real symmetric data is supported")
    m = m.real
    if np.max(np.abs(m - m.T), initial=0) > mc.HERMITIAN_TOL:
        raise ValidationError(f"{name} is not symmetric")
    return (m + m.T) / 2

def realify(m):
    """
    Real symmetric embedding [[Re, −Im], [Im, Re]] of a complex Hermitian matrix.
    Traces double under the embedding.
    """
    m = mc.as_matrix(m)
    return np.block([[m.real, -m.imag], [m.imag, m.real]])

def unrealify(n):
    """ Recover the complex matrix from a (possibly unsymmetrised) real embedding. """
    d = n.shape[0] // 2
    re = (n[:d, :d] + n[d:, d:]) / 2
    im = (n[d:, :d] - n[:d, d:]) / 2
    return re + 1j * im

class SdpProblem:
    """ Objective matrix C plus a list of equality constraints (A_i, b_i). """
    def __init__(self, c, constraints, name="sdp"):
        self.c = _real_symmetric(c, "objective")
        self.dim = self.c.shape[0]
        self.name = name
        mats = []
        rhs = []
        for i, (a, b) in enumerate(constraints):
            a = _real_symmetric(a, f"constraint {i}")
            if a.shape[0] != self.dim:
                raise ValidationError(f"constraint {i} has dim {a.shape[0]}, expected {self.dim}")
            mats.append(a)
            rhs.append(float(b))
        self.a = np.array(mats).reshape(len(mats), self.dim, self.dim)
        self.b = np.array(rhs, dtype=float)
        self.diagonal_index = self._diagonal_index()

    def _diagonal_index(self):
        """ Indices k when every constraint is Tr(e_k e_kᵀ X) = b, else None. """
        index = []
        for a in self.a:
            nonzero = np.argwhere(np.abs(a) > 0)
            if len(nonzero) != 1 or nonzero[0][0] != nonzero[0][1] or a[tuple(nonzero[0])] != 1:
                return None
            index.append(int(nonzero[0][0]))
        if len(set(index)) != len(index):
            return None
        return np.array(index, dtype=int)

    @property
    def size(self):
        return len(self.b)

    def apply(self, x):
        """ 𝒜(X) = (Tr(A_i X))_i. """
        return np.einsum('ikl,kl->i', self.a, x)

    def adjoint(self, y):
        """ Σ y_i A_i. """
        return np.einsum('i,ikl->kl', y, self.a)

    def to_dict(self):
        return {
            "C": mc.to_json(self.c),
            "constraints": [{"A": mc.to_json(a), "b": float(b)}
                            for a, b in zip(self.a, self.b)],
        }

    @classmethod
    def from_dict(cls, doc):
        try:
            c = mc.from_json(doc["C"])
            constraints = [(mc.from_json(item["A"]), item["b"])
                           for item in doc.get("constraints", [])]
        except (KeyError, TypeError) as e:
            raise ValidationError(f"malformed SDP document: {e}")
        return cls(c, constraints)

class SdpSolution:
    """ Primal/dual pair returned by solve(). """
    def __init__(self, primal, dual, primal_value, dual_value, iterations):
        self.primal = primal
        self.dual = dual
        self.primal_value = float(primal_value)
        self.dual_value = float(dual_value)
        self.gap = self.dual_value - self.primal_value
        self.iterations = iterations

    @property
    def value(self):
        return (self.primal_value + self.dual_value) / 2

    def to_dict(self):
        return {
            "primal_value": self.primal_value,
            "dual_value": self.dual_value,
            "gap": self.gap,
            "iterations": self.iterations,
            "dual": self.dual.tolist(),
            "primal": mc.to_json(self.primal),
        }

class CertificateReport:
    """ Feasibility residuals and gap of a claimed primal/dual pair. """
    def __init__(self, residual, min_eig_primal, min_eig_dual, primal_value, dual_value, tol):
        self.residual = float(residual)
        self.min_eig_primal = float(min_eig_primal)
        self.min_eig_dual = float(min_eig_dual)
        self.primal_value = float(primal_value)
        self.dual_value = float(dual_value)
        self.gap = self.dual_value - self.primal_value
        self.feasible_primal = self.residual <= tol and self.min_eig_primal >= -tol
        self.feasible_dual = self.min_eig_dual >= -tol
        self.optimal = self.feasible_primal and self.feasible_dual and abs(self.gap) <= tol

    @property
    def status(self):
        return "optimal" if self.optimal else "not-optimal"

    def to_dict(self):
        return {
            "status": self.status,
            "feasible_primal": self.feasible_primal,
            "feasible_dual": self.feasible_dual,
            "residual": self.residual,
            "min_eig_primal": self.min_eig_primal,
            "min_eig_dual": self.min_eig_dual,
            "primal_value": self.primal_value,
            "dual_value": self.dual_value,
            "gap": self.gap,
        }

def _max_step(x, dx):
    """ Largest α ≤ 1 with X + αΔX ⪰ 0, damped by STEP_FRACTION. """
    try:
        chol = np.linalg.cholesky(x)
    except np.linalg.LinAlgError:
        raise ConvergenceError("iterate lost positive definiteness")
    inv = scipy.linalg.solve_triangular(chol, np.eye(len(x)), lower=True)
    scaled = inv @ dx @ inv.T
    lowest = np.linalg.eigvalsh((scaled + scaled.T) / 2)[0]
    if lowest >= 0:
        return 1.0
    return min(1.0, STEP_FRACTION * (-1 / lowest))

def _schur(problem, x, z_inv):
    """ M_ij = Tr(A_i X A_j Z⁻¹). """
    if problem.diagonal_index is not None:
        idx = problem.diagonal_index
        return (x * z_inv.T)[np.ix_(idx, idx)]
    size, n = problem.size, problem.dim
    left = x @ problem.a @ z_inv
    m = problem.a.reshape(size, n * n) @ left.transpose(0, 2, 1).reshape(size, n * n).T
    return (m + m.T) / 2

def _solve_newton(m, rhs):
    try:
        factor = scipy.linalg.cho_factor(m)
        return scipy.linalg.cho_solve(factor, rhs)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(m, rhs, rcond=None)[0]

def _unconstrained(problem, tol):
    top = np.linalg.eigvalsh(problem.c)[-1]
    if top > tol:
        raise InfeasibleError(f"{problem.name}: no constraints and C has eigenvalue {top:.3g} > 0, "
                              "so the objective is unbounded")
    return SdpSolution(np.zeros_like(problem.c), np.zeros(0), 0.0, 0.0, 0)

def solve(problem, tol=DEFAULT_TOL, max_iter=MAX_ITER):
    """
    Solve a strictly feasible SDP.

    :param problem: SdpProblem
    :param tol: bound on relative residuals and the relative duality gap
    :param max_iter: iteration cap
    :returns: SdpSolution
    """
    if problem.size == 0:
        return _unconstrained(problem, tol)

    n = problem.dim
    c, b = problem.c, problem.b
    norm_a = np.sqrt(np.einsum('ikl,ikl->i', problem.a, problem.a))
    x = max(1.0, np.sqrt(n) * np.max((1 + np.abs(b)) / (1 + norm_a))) * np.eye(n)
    z = max(1.0, np.sqrt(n), np.linalg.norm(c), np.max(norm_a)) * np.eye(n)
    y = np.zeros(problem.size)

    logger.info(f"Solving {problem.name}: dim {n}, {problem.size} constraints")
    history = []
    for iteration in range(1, max_iter + 1):
        rp = b - problem.apply(x)
        rd = problem.adjoint(y) - c - z
        primal_value = float(np.sum(c * x))
        dual_value = float(b @ y)
        rel_p = np.linalg.norm(rp) / (1 + np.linalg.norm(b))
        rel_d = np.linalg.norm(rd) / (1 + np.linalg.norm(c))
        rel_gap = abs(dual_value - primal_value) / (1 + abs(primal_value) + abs(dual_value))
        mu = np.sum(x * z) / n
        logger.debug(f"{problem.name} iter {iteration}: primal {primal_value:.10g} "
                     f"dual {dual_value:.10g} rp {rel_p:.2e} rd {rel_d:.2e} mu {mu:.2e}")

        if rel_p <= tol and rel_d <= tol and rel_gap <= tol and mu / (1 + abs(primal_value)) <= tol:
            solution = SdpSolution(x, y, primal_value, dual_value, iteration)
            logger.info(f"{problem.name} converged in {iteration} iterations, "
                        f"value {solution.value:.10g}")
            return solution

        if max(np.max(np.abs(x)), np.max(np.abs(y), initial=0)) > BLOWUP:
            raise InfeasibleError(f"{problem.name}: iterates diverged, problem looks infeasible")
        history.append(max(rel_p, rel_d))
        if iteration > STALL_START and max(rel_p, rel_d) > tol:
            if min(history[-STALL_WINDOW:]) > 0.99 * min(history[:-STALL_WINDOW]):
                raise InfeasibleError(f"{problem.name}: residuals stalled at "
                                      f"{max(rel_p, rel_d):.3g}, problem looks infeasible")

        z_inv = np.linalg.inv(z)
        z_inv = (z_inv + z_inv.T) / 2
        target = SIGMA * mu * z_inv
        rhs = problem.apply(target - x) - problem.apply(x @ rd @ z_inv) - rp
        dy = _solve_newton(_schur(problem, x, z_inv), rhs)
        dz = problem.adjoint(dy) + rd
        shift = x @ dz @ z_inv
        dx = target - x - (shift + shift.T) / 2

        alpha = _max_step(x, dx)
        beta = _max_step(z, dz)
        x = x + alpha * dx
        x = (x + x.T) / 2
        y = y + beta * dy
        z = z + beta * dz
        z = (z + z.T) / 2

    raise ConvergenceError(f"{problem.name}: no convergence within {max_iter} iterations")

def verify_certificate(problem, primal, dual, tol=1e-7):
    """
    Check a claimed primal/dual pair.

    :param problem: SdpProblem
    :param primal: candidate X
    :param dual: candidate y
    :param tol: feasibility and gap tolerance
    :returns: CertificateReport
    """
    x = _real_symmetric(primal, "primal certificate")
    y = np.asarray(dual, dtype=float).ravel()
    if x.shape[0] != problem.dim or y.shape[0] != problem.size:
        raise ValidationError("certificate shapes do not match the problem")
    residual = np.max(np.abs(problem.apply(x) - problem.b), initial=0)
    z = problem.adjoint(y) - problem.c
    return CertificateReport(
        residual,
        np.linalg.eigvalsh(x)[0],
        np.linalg.eigvalsh((z + z.T) / 2)[0],
        np.sum(problem.c * x),
        problem.b @ y,
        tol,
    )

def gram_factorize(g, tol=1e-9):
    """
    Write G = BᵀB and return the columns of B as vectors.

    :param g: real symmetric PSD matrix
    :param tol: eigenvalues at or below tol are dropped
    :returns: array whose row i is the vector x_i, with x_i·x_j = G_ij
    """
    g = _real_symmetric(g, "Gram matrix")
    evals, evecs = np.linalg.eigh(g)
    if evals[0] < -tol:
        raise ValidationError(f"Gram matrix is not PSD (min eigenvalue {evals[0]:.3g})")
    keep = evals > tol
    if not np.any(keep):
        return np.zeros((g.shape[0], 1))
    return evecs[:, keep] * np.sqrt(evals[keep])

def gram_problem(c, name="gram"):
    """ max Tr(CG) over Gram matrices of unit vectors: G ⪰ 0, G_ii = 1. """
    c = np.asarray(c, dtype=float)
    dim = c.shape[0]
    constraints = []
    for k in range(dim):
        a = np.zeros((dim, dim))
        a[k, k] = 1
        constraints.append((a, 1.0))
    return SdpProblem(c, constraints, name)

def discrimination_problem(weighted_states, name="discrimination"):
    """
    Minimum-error discrimination of weighted states σ_i = p_i ρ_i as one SDP.

    The POVM elements are the diagonal blocks of a single PSD matrix; Σ_i M_i = I is
    imposed entrywise. Complex states go through the real embedding, with the objective
    halved so the optimum is the success probability.

    :param weighted_states: list of p_i ρ_i
    :returns: SdpProblem
    """
    states = [mc.check_hermitian(s) for s in weighted_states]
    if not states:
        raise ValidationError("nothing to discriminate")
    complex_states = any(np.max(np.abs(s.imag)) > mc.HERMITIAN_TOL for s in states)
    if complex_states:
        blocks = [realify(s) / 2 for s in states]
    else:
        blocks = [s.real for s in states]
    k = len(blocks)
    d = blocks[0].shape[0]
    c = scipy.linalg.block_diag(*blocks)
    constraints = []
    for r in range(d):
        for s in range(r, d):
            a = np.zeros((k * d, k * d))
            for i in range(k):
                a[i * d + r, i * d + s] += 1
                a[i * d + s, i * d + r] += 1
            if r == s:
                constraints.append((a / 2, 1.0))
            else:
                constraints.append((a, 0.0))
    problem = SdpProblem(c, constraints, name)
    problem.blocks = k
    problem.block_dim = d
    problem.embedded = complex_states
    return problem

def povm_from_solution(problem, solution):
    """ Read the POVM elements back out of a discrimination_problem solution. """
    d = problem.block_dim
    povm = []
    for i in range(problem.blocks):
        block = solution.primal[i * d:(i + 1) * d, i * d:(i + 1) * d]
        povm.append(unrealify(block) if problem.embedded else block.astype(complex))
    return povm
