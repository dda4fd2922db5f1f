"""
State discrimination with post-measurement information.

A hidden function f: {0,1}ⁿ → Y is encoded as U_b|x⟩ for a secret basis b. STAR asks for
f(x) without ever learning b; PI-STAR announces b after the measurement (or after the
quantum memory has been bounded). Optimal values come from Helstrom's formula, from SDPs
over POVMs, and from a block decomposition of the algebra generated by the support
projectors, which also yields the quantum storage a PI-STAR strategy needs.
"""
import itertools
import json
import logging
import os

import numpy as np
import scipy.linalg

import qcrypt.entropy as ent
import qcrypt.matcore as mc
import qcrypt.mubclifford as mub
import qcrypt.sdpsolve as sdp
from qcrypt.errors import ConvergenceError, ValidationError

PROJECTOR_TOL = 1e-8
COMMUTE_TOL = 1e-7
CLUSTER_TOL = 1e-8
MAX_STORAGE_DIM = 16
REFINE_ROUNDS = 3
DEFAULT_SEED = 1234

UNIFORM = "uniform"
SKEWED_AND = "skewed-and"

logger = logging.getLogger("PISTAR")

def function_table(name, n):
    """
    Output table of a named function on n bits: and, xor, bit:<i>, or a JSON file
    {"n": ..., "table": [...]}.
    """
    if n < 1:
        raise ValidationError("functions need at least one input bit")
    xs = np.arange(2 ** n)
    bits = (xs[:, None] >> np.arange(n)[::-1]) & 1
    if name == "and":
        return [int(b) for b in bits.all(axis=1)]
    if name == "xor":
        return [int(b) for b in bits.sum(axis=1) % 2]
    kind, _, arg = name.partition(":")
    if kind == "bit" and arg.isdigit() and int(arg) < n:
        return [int(b) for b in bits[:, int(arg)]]
    if os.path.exists(name):
        with open(name) as f:
            doc = json.load(f)
        if doc.get("n") != n or len(doc.get("table", [])) != 2 ** n:
            raise ValidationError(f"function file {name} does not describe {n} bits")
        return [int(y) for y in doc["table"]]
    raise ValidationError(f"unknown function {name!r}")

def skewed_and_prior(n):
    """ P(1…1) = ½, every other string 1/(2(2ⁿ − 1)). """
    prior = np.full(2 ** n, 1 / (2 * (2 ** n - 1)))
    prior[-1] = 0.5
    return prior

class HiddenFunctionEnsemble:
    """ States ρ_yb = Σ_{x ∈ f⁻¹(y)} P_X(x) U_b|x⟩⟨x|U_b†. """
    def __init__(self, n, table, bases, prior_x=None, prior_b=None, name="f"):
        """
        :param n: input length
        :param table: f as a list of 2ⁿ outputs in 0..|Y|−1
        :param bases: MubSet in dimension 2ⁿ
        :param prior_x: distribution over inputs, uniform by default
        :param prior_b: distribution over bases, uniform by default
        """
        self.n = n
        self.dim = 2 ** n
        self.table = [int(y) for y in table]
        if len(self.table) != self.dim or min(self.table) < 0:
            raise ValidationError(f"function table must list {self.dim} non-negative outputs")
        if bases.dim != self.dim:
            raise ValidationError(f"bases of dim {bases.dim} for {n} input bits")
        self.bases = bases
        self.outputs = max(self.table) + 1
        self.prior_x = ent.check_dist(np.full(self.dim, 1 / self.dim) if prior_x is None
                                      else prior_x, "input prior")
        if len(self.prior_x) != self.dim:
            raise ValidationError("input prior has the wrong length")
        self.prior_b = ent.check_dist(np.full(len(bases), 1 / len(bases)) if prior_b is None
                                      else prior_b, "basis prior")
        if len(self.prior_b) != len(bases):
            raise ValidationError("basis prior has the wrong length")
        self.name = name
        self.states = []
        self.projectors = []
        for u in bases.bases:
            states = [np.zeros((self.dim, self.dim), dtype=complex) for _ in range(self.outputs)]
            projs = [np.zeros((self.dim, self.dim), dtype=complex) for _ in range(self.outputs)]
            for x, y in enumerate(self.table):
                p = mc.projector(u[:, x])
                states[y] += self.prior_x[x] * p
                projs[y] += p
            self.states.append(states)
            self.projectors.append(projs)

    @property
    def basis_count(self):
        return len(self.bases)

    @property
    def balanced(self):
        counts = np.bincount(self.table, minlength=self.outputs)
        return bool(np.all(counts == counts[0]))

    def joint_states(self):
        """ σ_y = Σ_b P_B(b) ρ_yb, the states STAR has to tell apart. """
        return [sum(pb * self.states[b][y] for b, pb in enumerate(self.prior_b))
                for y in range(self.outputs)]

def build_ensemble(function, n, n_bases=2, prior=UNIFORM):
    """ Ensemble over the first n_bases of the computational, Hadamard and K bases. """
    if not 1 <= n_bases <= 3:
        raise ValidationError("between one and three standard bases are available")
    if prior == UNIFORM:
        prior_x = None
    elif prior == SKEWED_AND:
        prior_x = skewed_and_prior(n)
    else:
        raise ValidationError(f"unknown prior {prior!r}")
    bases = mub.standard_bases(n).subset(range(n_bases))
    return HiddenFunctionEnsemble(n, function_table(function, n), bases, prior_x, None,
                                  f"{function}:{n}")

def _helstrom_operators(a, b):
    """ Success ½(Tr a + Tr b + ‖a − b‖₁) of telling weighted states apart, and M₀. """
    diff = a - b
    evals, evecs = np.linalg.eigh((diff + diff.conj().T) / 2)
    positive = evecs[:, evals > 0]
    m0 = positive @ positive.conj().T
    value = (np.trace(a).real + np.trace(b).real + np.sum(np.abs(evals))) / 2
    return float(value), m0

def helstrom(rho0, rho1, q=0.5):
    """
    Optimal probability of telling ρ0 (prior q) from ρ1 apart.

    :returns: (½[1 + ‖qρ0 − (1−q)ρ1‖₁], [M0, M1]) with M0 the positive eigenspace projector
    """
    rho0 = mc.check_density(rho0, "rho0")
    rho1 = mc.check_density(rho1, "rho1")
    mc.same_dim(rho0, rho1)
    if not 0 <= q <= 1:
        raise ValidationError(f"prior must lie in [0, 1], got {q}")
    value, m0 = _helstrom_operators(q * rho0, (1 - q) * rho1)
    return value, [m0, np.eye(len(m0)) - m0]

def guess_basis_baseline(n_bases, n_outputs):
    """ Guess the basis, measure in it: 1/|B| + (1 − 1/|B|)/|Y|. """
    if n_bases < 1 or n_outputs < 1:
        raise ValidationError("counts must be positive")
    return 1 / n_bases + (1 - 1 / n_bases) / n_outputs

def star_boolean_upper(n, n_bases):
    """ ½ + 1/(2√|B|) for balanced Boolean functions. """
    if n < 1 or n_bases < 1:
        raise ValidationError("counts must be positive")
    return 0.5 + 1 / (2 * np.sqrt(n_bases))

def optimal_discrimination(weighted_states, tol=sdp.DEFAULT_TOL):
    """
    Best success probability for weighted states σ_i = p_i ρ_i: Helstrom for two,
    an SDP otherwise.

    :returns: (value, povm)
    """
    if len(weighted_states) == 1:
        dim = weighted_states[0].shape[0]
        return float(np.trace(weighted_states[0]).real), [np.eye(dim, dtype=complex)]
    if len(weighted_states) == 2:
        value, m0 = _helstrom_operators(*weighted_states)
        return value, [m0, np.eye(len(m0)) - m0]
    problem = sdp.discrimination_problem(weighted_states)
    solution = sdp.solve(problem, tol)
    return solution.value, sdp.povm_from_solution(problem, solution)

def star_success(e, tol=sdp.DEFAULT_TOL):
    """ Optimal STAR value: discriminate the σ_y without learning the basis. """
    value, _ = optimal_discrimination(e.joint_states(), tol)
    return value

def outcome_strings(e):
    """ Every tuple (o_1, ..., o_m) of one answer per basis. """
    return list(itertools.product(range(e.outputs), repeat=e.basis_count))

def pistar_success(e, tol=sdp.DEFAULT_TOL):
    """
    Optimal PI₀-STAR value: one POVM element per answer string o, and after the basis b is
    announced the answer is o_b. The POVM is found by the discrimination SDP over the
    operators Σ_b P_B(b) ρ_{o_b b}.

    :returns: (value, povm indexed like outcome_strings)
    """
    strings = outcome_strings(e)
    weighted = [sum(e.prior_b[b] * e.states[b][o[b]] for b in range(e.basis_count))
                for o in strings]
    value, povm = optimal_discrimination(weighted, tol)
    logger.info(f"{e.name}: PI-STAR value {value:.8f} over {len(strings)} outcomes")
    return value, povm

def postmeasurement_success(povm, e):
    """
    Success of a given POVM when the basis is announced afterwards and the answer is
    chosen optimally from (outcome, basis): Σ_b P_B Σ_k max_y Tr(M_k ρ_yb).
    """
    povm = mc.check_povm(povm)
    if povm[0].shape[0] != e.dim:
        raise ValidationError("POVM dimension does not match the ensemble")
    total = 0.0
    for b, pb in enumerate(e.prior_b):
        for m in povm:
            total += pb * max(np.trace(m @ rho).real for rho in e.states[b])
    return float(total)

def bell_povm():
    """ Projectors onto the four Bell states. """
    r = 1 / np.sqrt(2)
    vectors = [[r, 0, 0, r], [r, 0, 0, -r], [0, r, r, 0], [0, r, -r, 0]]
    return [mc.projector(v) for v in vectors]

def bell_pair_povm(n):
    """ Bell measurements on qubit pairs (1,2), (3,4), ... for even n. """
    if n % 2:
        raise ValidationError("Bell pairs need an even number of qubits")
    povm = [np.ones((1, 1), dtype=complex)]
    for _ in range(n // 2):
        povm = [np.kron(a, b) for a in povm for b in bell_povm()]
    return povm

def srm_success(e, balanced_only=True):
    """
    Success of the square-root type PI-STAR measurement
    M_o = S^{−½}(Σ_b P_{o_b b})³S^{−½} with S = Σ_o (Σ_b P_{o_b b})³.

    :param balanced_only: reject functions whose outputs have unequal preimages
    """
    if balanced_only and not e.balanced:
        raise ValidationError(f"{e.name} is not balanced")
    strings = outcome_strings(e)
    cubes = []
    for o in strings:
        total = sum(e.projectors[b][o[b]] for b in range(e.basis_count))
        cubes.append(total @ total @ total)
    inv, _ = ent.inverse_sqrt_on_support(sum(cubes))
    value = 0.0
    for o, cube in zip(strings, cubes):
        m = inv @ cube @ inv
        for b, pb in enumerate(e.prior_b):
            value += pb * np.trace(m @ e.states[b][o[b]]).real
    return float(value)

def srm_lower_bound(n_bases, n_outputs):
    """
    Closed-form guarantee of the square-root measurement for balanced functions and
    mutually unbiased bases; from four bases on only the guessing baseline is claimed.
    """
    base = guess_basis_baseline(n_bases, n_outputs)
    y = n_outputs
    if n_bases == 2:
        return base + (y - 1) / (y * (y + 3))
    if n_bases == 3:
        return base + 4 * (y ** 2 - 1) / (3 * y * (2 + y * (y + 6)))
    return base

def pistar_and_value(n):
    """ ½[2 + 1/(2ⁿ + 2^{n/2} − 2) − 1/(2ⁿ − 1)] for AND under the skewed prior. """
    if n < 1:
        raise ValidationError("n must be positive")
    return 0.5 * (2 + 1 / (2 ** n + 2 ** (n / 2) - 2) - 1 / (2 ** n - 1))

def star_and_value(n):
    """ STAR optimum for AND under the skewed prior. """
    if n < 1:
        raise ValidationError("n must be positive")
    if n == 1:
        return 0.5 + 1 / (2 * np.sqrt(2))
    return 1 - 1 / (2 * (2 ** n - 1))

def xor_star_value(n, n_bases):
    if n_bases not in (2, 3):
        raise ValidationError("XOR values are known for two or three bases")
    if n % 2 == 0:
        return 0.75
    return 0.5 + 1 / (2 * np.sqrt(n_bases))

def pistar_xor_value(n, n_bases, check=True):
    """
    STAR and PI-STAR values of XOR on n bits. Even n: ¾ and 1 (Bell measurements);
    odd n: both ½ + 1/(2√|B|). For n ≤ 3 the STAR value is recomputed from the states.
    """
    if n < 1:
        raise ValidationError("n must be positive")
    star = xor_star_value(n, n_bases)
    result = {"n": n, "bases": n_bases, "star": star, "pistar": 1.0 if n % 2 == 0 else star}
    if check and n <= 3:
        e = build_ensemble("xor", n, n_bases)
        result["star_check"] = star_success(e)
        if n % 2 == 0:
            result["pistar_check"] = postmeasurement_success(bell_pair_povm(n), e)
    return result

class BlockDecomposition:
    """ Orthogonal projectors Π_j onto invariant subspaces of a set of projectors. """
    def __init__(self, blocks):
        self.blocks = blocks
        self.dims = [int(round(np.trace(p).real)) for p in blocks]

    @property
    def max_dim(self):
        return max(self.dims)

    def residuals(self, projectors):
        """ Largest deviations from orthogonality, completeness, block form and commutation. """
        dim = self.blocks[0].shape[0]
        ortho = max([np.max(np.abs(a @ b)) for i, a in enumerate(self.blocks)
                     for b in self.blocks[i + 1:]], default=0.0)
        complete = np.max(np.abs(sum(self.blocks) - np.eye(dim)))
        block_form = max(np.max(np.abs(p - sum(q @ p @ q for q in self.blocks)))
                         for p in projectors)
        commute = max(np.max(np.abs(q @ p - p @ q)) for q in self.blocks for p in projectors)
        return {"orthogonality": float(ortho), "completeness": float(complete),
                "block_form": float(block_form), "commutation": float(commute)}

    def to_dict(self):
        return {"dims": self.dims, "blocks": [mc.to_json(p) for p in self.blocks]}

def _flatten(projectors):
    return [p for group in projectors for p in group]

def check_support_projectors(projectors):
    """ Every element a projector; projectors of one basis mutually orthogonal. """
    dim = None
    for b, group in enumerate(projectors):
        for y, p in enumerate(group):
            p = mc.check_hermitian(p, f"projector ({y},{b})")
            dim = p.shape[0] if dim is None else dim
            if p.shape[0] != dim:
                raise ValidationError("projectors differ in dimension")
            if np.max(np.abs(p @ p - p)) > PROJECTOR_TOL:
                raise ValidationError(f"matrix ({y},{b}) is not a projector")
        for y, p in enumerate(group):
            for z in range(y + 1, len(group)):
                if np.max(np.abs(p @ group[z])) > PROJECTOR_TOL:
                    raise ValidationError(f"projectors {y} and {z} of basis {b} overlap")
    if dim is None:
        raise ValidationError("no projectors given")
    if dim > MAX_STORAGE_DIM:
        raise ValidationError(f"dimension {dim} exceeds {MAX_STORAGE_DIM}")
    return dim

def commutant_basis(mats):
    """ Basis (as matrices) of {X : XP = PX for every P}. """
    dim = mats[0].shape[0]
    eye = np.eye(dim)
    system = np.vstack([np.kron(eye, p.T) - np.kron(p, eye) for p in mats])
    null = scipy.linalg.null_space(system, rcond=1e-10)
    return [null[:, k].reshape(dim, dim) for k in range(null.shape[1])]

def _random_element(basis, rng):
    coeffs = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
    x = sum(c * m for c, m in zip(coeffs, basis))
    return (x + x.conj().T) / 2

def _split(space, x):
    """ Split the columns' span by the eigenvalue clusters of x compressed onto it. """
    compressed = space.conj().T @ x @ space
    evals, evecs = np.linalg.eigh((compressed + compressed.conj().T) / 2)
    scale = max(1.0, np.max(np.abs(evals)))
    pieces, start = [], 0
    for k in range(1, len(evals) + 1):
        if k == len(evals) or evals[k] - evals[k - 1] > CLUSTER_TOL * 1e2 * scale:
            pieces.append(space @ evecs[:, start:k])
            start = k
    return pieces

def min_storage(projectors, seed=DEFAULT_SEED):
    """
    Finest block decomposition H = ⊕_j J_j ⊗ K_j of the algebra generated by the support
    projectors, found from random Hermitian elements of its commutant.

    :param projectors: nested list projectors[b][y]
    :returns: (q = ⌈log₂ max_j dim J_j⌉, BlockDecomposition)
    """
    dim = check_support_projectors(projectors)
    flat = _flatten(projectors)
    basis = commutant_basis(flat)
    rng = np.random.default_rng(seed)
    spaces = [np.eye(dim, dtype=complex)]
    for _ in range(REFINE_ROUNDS):
        x = _random_element(basis, rng)
        spaces = [piece for space in spaces for piece in _split(space, x)]
    blocks = BlockDecomposition([s @ s.conj().T for s in spaces])
    residual = blocks.residuals(flat)
    if residual["commutation"] > COMMUTE_TOL:
        raise ConvergenceError(f"block decomposition fails to commute ({residual['commutation']:.3g})")
    q = int(np.ceil(np.log2(blocks.max_dim))) if blocks.max_dim > 1 else 0
    logger.info(f"commutant of dim {len(basis)}, {len(spaces)} blocks, q = {q}")
    return q, blocks

def two_basis_decomposition(p00, p01):
    """
    Split the space into pieces of dimension at most two that both projectors leave
    invariant, using the SVD of the off-diagonal block of p01 relative to p00.
    """
    check_support_projectors([[p00], [p01]])
    dim = p00.shape[0]
    evals, evecs = np.linalg.eigh(p00)
    v0, v1 = evecs[:, evals > 0.5], evecs[:, evals <= 0.5]
    a00 = v0.conj().T @ p01 @ v0
    a01 = v0.conj().T @ p01 @ v1
    a11 = v1.conj().T @ p01 @ v1

    blocks, used0, used1 = [], [], []
    if v0.shape[1] and v1.shape[1]:
        u, sigma, _ = np.linalg.svd(a01)
        keep = sigma > CLUSTER_TOL * 1e2
        start = 0
        while start < int(np.sum(keep)):
            stop = start + 1
            while stop < int(np.sum(keep)) and abs(sigma[stop] - sigma[start]) <= CLUSTER_TOL * 1e2:
                stop += 1
            cluster = u[:, start:stop]
            _, rot = np.linalg.eigh(cluster.conj().T @ a00 @ cluster)
            for left in (cluster @ rot).T:
                w = a01.conj().T @ left
                w = w / np.linalg.norm(w)
                plane = np.stack([v0 @ left, v1 @ w], axis=1)
                blocks.append(plane @ plane.conj().T)
                used0.append(left)
                used1.append(w)
            start = stop

    for v, a, used in ((v0, a00, used0), (v1, a11, used1)):
        if not v.shape[1]:
            continue
        rest = scipy.linalg.null_space(np.array(used).conj()) if used else np.eye(v.shape[1])
        if not rest.shape[1]:
            continue
        _, rot = np.linalg.eigh(rest.conj().T @ a @ rest)
        for vec in (rest @ rot).T:
            line = v @ vec
            blocks.append(np.outer(line, line.conj()))
    decomposition = BlockDecomposition(blocks)
    if sum(decomposition.dims) != dim:
        raise ConvergenceError("two-basis decomposition does not cover the space")
    return decomposition

def three_basis_projectors(n):
    """
    Support projectors of f = first bit under three bases whose generated algebra is
    irreducible, so storing the full state is required.

    U1 rotates each plane {|0x̂⟩, |1x̂⟩} by a distinct angle; U2 does the same on the
    planes {|0⟩H|x̂⟩, |1⟩H|x̂⟩}.
    """
    if n < 2:
        raise ValidationError("the three-basis construction needs n >= 2")
    half = 2 ** (n - 1)
    u1 = np.zeros((2 * half, 2 * half), dtype=complex)
    for k in range(half):
        angle = np.pi / 2 * (k + 1) / (half + 1)
        rot = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
        u1 += np.kron(rot, mc.projector(mc.ket(k, half)))
    hadamards = np.kron(mc.I2, mc.kron_all(*[mc.HADAMARD] * (n - 1)))
    u2 = hadamards @ u1 @ hadamards
    rest = np.eye(half)
    base = [np.kron(mc.projector(mc.ket(y, 2)), rest) for y in range(2)]
    return [[u @ p @ u.conj().T for p in base] for u in (np.eye(2 * half), u1, u2)]

def ensemble_report(e, tol=sdp.DEFAULT_TOL):
    """ Every value computable for an ensemble, as one document. """
    star = star_success(e, tol)
    pistar, _ = pistar_success(e, tol)
    q, blocks = min_storage(e.projectors)
    report = {
        "ensemble": e.name,
        "bases": e.basis_count,
        "outputs": e.outputs,
        "guess_baseline": guess_basis_baseline(e.basis_count, e.outputs),
        "star": star,
        "pistar": pistar,
        "min_storage_qubits": q,
        "block_dims": blocks.dims,
    }
    if e.balanced:
        report["srm"] = srm_success(e)
        report["srm_bound"] = srm_lower_bound(e.basis_count, e.outputs)
        if e.outputs == 2:
            report["star_upper"] = star_boolean_upper(e.n, e.basis_count)
    return report
