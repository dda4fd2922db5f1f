"""
Two-player XOR games: classical and quantum values, analytic certificates and the
random access code dimension bound.

A game wins with predicate V(c|s,t) on the parity c = a ⊕ b. With bias matrix
A = π∘(V0 − V1) and offset ½Σπ(V0 + V1), a strategy with correlations E_st wins with
probability offset + ½ Σ A_st E_st. Quantum correlations are inner products of unit
vectors, so the quantum value is a Gram SDP.
"""
import json
import logging
import os

import numpy as np

import qcrypt.entropy as ent
import qcrypt.sdpsolve as sdp
from qcrypt.errors import ValidationError

MAX_QUESTIONS = 16
MAX_SDP_QUESTIONS = 64
MAX_COMPOSITION = 6
MAX_SOLVED_COMPOSITION = 3
CHUNK = 4096
CHSH_CORRELATIONS = np.array([[1.0, 1.0], [1.0, -1.0]])

logger = logging.getLogger("GAMES")

class XorGame:
    """ Question distribution π and a 0/1 predicate table per parity. """
    def __init__(self, pi, v0, v1, name="game"):
        """
        :param pi: nS x nT question distribution
        :param v0: nS x nT table, 1 where parity 0 wins
        :param v1: nS x nT table, 1 where parity 1 wins
        """
        self.pi = np.asarray(pi, dtype=float)
        self.v0 = np.asarray(v0, dtype=int)
        self.v1 = np.asarray(v1, dtype=int)
        if self.pi.ndim != 2 or self.v0.shape != self.pi.shape or self.v1.shape != self.pi.shape:
            raise ValidationError("pi and predicate tables must share one nS x nT shape")
        ent.check_dist(self.pi, "question distribution")
        for table in (self.v0, self.v1):
            if not np.isin(table, (0, 1)).all():
                raise ValidationError("predicate entries must be 0 or 1")
        self.name = name
        self.n_s, self.n_t = self.pi.shape

    @property
    def bias(self):
        return self.pi * (self.v0 - self.v1)

    @property
    def offset(self):
        return float(np.sum(self.pi * (self.v0 + self.v1)) / 2)

    def evaluate(self, xs, ys):
        """ Winning probability of the strategy whose correlations are x_s·y_t. """
        return self.offset + float(np.sum(self.bias * (xs @ ys.T))) / 2

    def gram_objective(self):
        """ C = ½[[0, A], [Aᵀ, 0]], so that Tr(CG) = Σ A_st x_s·y_t. """
        a = self.bias
        return np.block([[np.zeros((self.n_s, self.n_s)), a],
                         [a.T, np.zeros((self.n_t, self.n_t))]]) / 2

    def to_dict(self):
        return {
            "name": self.name,
            "nS": self.n_s,
            "nT": self.n_t,
            "pi": self.pi.tolist(),
            "V": {"c0": self.v0.tolist(), "c1": self.v1.tolist()},
        }

    @classmethod
    def from_dict(cls, doc, name="game"):
        try:
            game = cls(doc["pi"], doc["V"]["c0"], doc["V"]["c1"], doc.get("name", name))
        except (KeyError, TypeError) as e:
            raise ValidationError(f"malformed game document: {e}")
        if (game.n_s, game.n_t) != (doc.get("nS", game.n_s), doc.get("nT", game.n_t)):
            raise ValidationError("nS/nT do not match the tables")
        return game

def game_from_correlations(signs, pi, name):
    """ Game whose parity must be 0 where signs is +1 and 1 where it is −1. """
    signs = np.asarray(signs)
    pi = np.asarray(pi, dtype=float)
    return XorGame(pi, (signs > 0) & (pi > 0), (signs < 0) & (pi > 0), name)

def chsh_game():
    return game_from_correlations(CHSH_CORRELATIONS, np.full((2, 2), 0.25), "chsh")

def chained_correlations(n):
    """ ±1 pattern of the chained inequality: x_k·y_k, x_{k+1}·y_k and −x_1·y_n. """
    if n < 2:
        raise ValidationError("chained games need n >= 2")
    a = np.zeros((n, n))
    for k in range(n):
        a[k, k] = 1
        if k + 1 < n:
            a[k + 1, k] = 1
    a[0, n - 1] = -1
    return a

def chained_game(n):
    a = chained_correlations(n)
    return game_from_correlations(a, np.abs(a) / (2 * n), f"chained:{n}")

def gisin_game(n):
    """ +1 where s + t < n (0-indexed), −1 elsewhere, uniform questions. """
    if n < 2:
        raise ValidationError("Gisin games need n >= 2")
    s, t = np.indices((n, n))
    signs = np.where(s + t < n, 1, -1)
    return game_from_correlations(signs, np.full((n, n), 1 / n ** 2), f"gisin:{n}")

def load_game(name):
    """ Built-ins chsh, chained:<n>, gisin:<n>, or a path to a JSON game file. """
    if name == "chsh":
        return chsh_game()
    kind, _, arg = name.partition(":")
    if kind in ("chained", "gisin") and arg:
        try:
            size = int(arg)
        except ValueError:
            raise ValidationError(f"game {name!r} needs an integer size")
        return chained_game(size) if kind == "chained" else gisin_game(size)
    if not os.path.exists(name):
        raise ValidationError(f"unknown game {name!r}")
    with open(name) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise ValidationError(f"game file {name} is not JSON: {e}")
    return XorGame.from_dict(doc, os.path.basename(name))

class GameValue:
    """ Classical and quantum values of a game with the strategies attaining them. """
    def __init__(self, game, classical, classical_strategy, quantum, quantum_vectors):
        self.game = game
        self.classical = classical
        self.classical_strategy = classical_strategy
        self.quantum = quantum
        self.quantum_vectors = quantum_vectors

    def to_dict(self):
        alice, bob = self.classical_strategy
        xs, ys = self.quantum_vectors
        return {
            "game": self.game.name,
            "classical": self.classical,
            "quantum": self.quantum,
            "classical_strategy": {"alice": list(alice), "bob": list(bob)},
            "quantum_vectors": {"alice": xs.tolist(), "bob": ys.tolist()},
        }

def classical_value(game):
    """
    Exact classical value. Every answer table of Alice is enumerated and Bob
    best-responds per question, preferring answer 0 on ties, so the returned strategy
    is the lexicographically smallest optimum.

    :returns: (value, (alice answers, bob answers))
    """
    if game.n_s > MAX_QUESTIONS or game.n_t > MAX_QUESTIONS:
        raise ValidationError(f"classical value is limited to {MAX_QUESTIONS} questions per player")
    w0 = game.pi * game.v0
    w1 = game.pi * game.v1
    bits = np.arange(game.n_s)[::-1]
    best_value, best = -1.0, None
    for start in range(0, 2 ** game.n_s, CHUNK):
        index = np.arange(start, min(start + CHUNK, 2 ** game.n_s))
        answers = (index[:, None] >> bits) & 1
        keep = 1 - answers
        win0 = keep @ w0 + answers @ w1
        win1 = keep @ w1 + answers @ w0
        values = np.maximum(win0, win1).sum(axis=1)
        top = int(np.argmax(values))
        if values[top] > best_value + 1e-12:
            best_value = float(values[top])
            bob = (win1[top] > win0[top] + 1e-12).astype(int)
            best = (tuple(int(a) for a in answers[top]), tuple(int(b) for b in bob))
    return best_value, best

def quantum_value(game, tol=sdp.DEFAULT_TOL):
    """
    Quantum value from the Gram SDP, with unit vectors recovered from the optimum.

    :returns: (value, (alice vectors, bob vectors)), vectors of length nS + nT
    """
    size = game.n_s + game.n_t
    if size > MAX_SDP_QUESTIONS:
        raise ValidationError(f"quantum value is limited to {MAX_SDP_QUESTIONS} questions")
    solution = sdp.solve(sdp.gram_problem(game.gram_objective(), game.name), tol)
    value = game.offset + solution.value / 2
    vectors = sdp.gram_factorize(solution.primal, tol=1e-9)
    vectors = vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
    padded = np.zeros((size, size))
    padded[:, :vectors.shape[1]] = vectors[:, :size]
    xs, ys = padded[:game.n_s], padded[game.n_s:]
    replay = game.evaluate(xs, ys)
    if abs(replay - value) > 1e-6:
        logger.warning(f"{game.name}: vectors replay {replay:.9f} against SDP value {value:.9f}")
    return value, (xs, ys)

def solve_game(game, tol=sdp.DEFAULT_TOL):
    classical, strategy = classical_value(game)
    quantum, vectors = quantum_value(game, tol)
    logger.info(f"{game.name}: classical {classical:.7f}, quantum {quantum:.7f}")
    return GameValue(game, classical, strategy, quantum, vectors)

def simulate_single_prover(game, xs, ys):
    """
    Acceptance probability ½ Σ π V(c|s,t)(1 + (−1)^c x_s·y_t) of a single quantum prover
    answering with the given vectors.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 2 or ys.ndim != 2 or xs.shape[1] != ys.shape[1]:
        raise ValidationError("vector lists must share one dimension")
    if xs.shape[0] != game.n_s or ys.shape[0] != game.n_t:
        raise ValidationError("one vector per question is required")
    norms = np.concatenate([np.linalg.norm(xs, axis=1), np.linalg.norm(ys, axis=1)])
    if np.max(np.abs(norms - 1)) > 1e-8:
        raise ValidationError("strategy vectors must be unit vectors")
    return game.evaluate(xs, ys)

def grid_quantum_value(game, steps=20001):
    """
    Quantum value of a 2 x 2 game by scanning Alice's relative angle; Bob's best
    response to a fixed pair of planar vectors is exact.
    """
    if (game.n_s, game.n_t) != (2, 2):
        raise ValidationError("grid search handles 2 x 2 games only")
    angles = np.linspace(0, np.pi, steps)
    x0 = np.array([1.0, 0.0])
    x1 = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    a = game.bias
    total = np.zeros(steps)
    for t in range(2):
        pull = a[0, t] * x0 + a[1, t] * x1
        total += np.linalg.norm(pull, axis=1)
    return game.offset + float(np.max(total)) / 2

def gram_certificate(vectors, dual, c, name):
    """ Primal Gram matrix of the vectors, the dual vector and the problem they certify. """
    vectors = np.asarray(vectors, dtype=float)
    problem = sdp.gram_problem(c, name)
    return problem, vectors @ vectors.T, np.asarray(dual, dtype=float)

def chsh_certificate():
    """ Vectors at 0, π/2 for Alice and ±π/4 for Bob with λ = (1/√2)(1, 1, 1, 1). """
    a = CHSH_CORRELATIONS
    c = np.block([[np.zeros((2, 2)), a], [a.T, np.zeros((2, 2))]]) / 2
    angles = [0, np.pi / 2, np.pi / 4, -np.pi / 4]
    vectors = [[np.cos(x), np.sin(x)] for x in angles]
    return gram_certificate(vectors, np.full(4, 1 / np.sqrt(2)), c, "chsh")

def chained_certificate(n):
    """ x_k at π(2k−2)/2n, y_k at π(2k−1)/2n, dual cos(π/2n)·1. """
    a = chained_correlations(n)
    c = np.block([[np.zeros((n, n)), a], [a.T, np.zeros((n, n))]]) / 2
    k = np.arange(1, n + 1)
    angles = np.concatenate([np.pi * (2 * k - 2) / (2 * n), np.pi * (2 * k - 1) / (2 * n)])
    vectors = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return gram_certificate(vectors, np.full(2 * n, np.cos(np.pi / (2 * n))), c, f"chained:{n}")

def composition_objective(n):
    a = CHSH_CORRELATIONS
    for _ in range(n - 1):
        a = np.kron(a, CHSH_CORRELATIONS)
    size = a.shape[0]
    return np.block([[np.zeros((size, size)), a], [a.T, np.zeros((size, size))]])

def composition_certificate(n):
    """ G = I + W/(√2)ⁿ and λ = ½(√2)ⁿ·1 for the n-fold composition of CHSH. """
    w = composition_objective(n)
    scale = np.sqrt(2) ** n
    problem = sdp.gram_problem(w / 2, f"chsh^{n}")
    return problem, np.eye(len(w)) + w / scale, np.full(len(w), scale / 2)

def tsirelson(tol=sdp.DEFAULT_TOL):
    """ CHSH Gram SDP solved and certified; both give 2√2. """
    problem, primal, dual = chsh_certificate()
    report = sdp.verify_certificate(problem, primal, dual)
    solution = sdp.solve(problem, tol)
    return {
        "value": solution.value,
        "certificate": report.status,
        "certified_value": report.dual_value,
        "gap": solution.gap,
    }

def chained_chsh(n, tol=sdp.DEFAULT_TOL):
    """ Chained inequality with n settings: 2n cos(π/2n), solved and certified. """
    problem, primal, dual = chained_certificate(n)
    report = sdp.verify_certificate(problem, primal, dual)
    solution = sdp.solve(problem, tol)
    game = chained_game(n)
    classical, _ = classical_value(game)
    return {
        "n": n,
        "analytic": 2 * n * np.cos(np.pi / (2 * n)),
        "correlation_bound": solution.value,
        "certificate": report.status,
        "value": 0.5 * (1 + solution.value / (2 * n)),
        "classical": classical,
        "classical_correlation": 2 * n * (2 * classical - 1),
    }

def xor_composition_value(n, tol=sdp.DEFAULT_TOL):
    """
    Value (2√2)ⁿ of the n-fold CHSH composition A^{⊗n}; always certified, and also
    solved when small enough.
    """
    if not 1 <= n <= MAX_COMPOSITION:
        raise ValidationError(f"composition is limited to 1..{MAX_COMPOSITION} copies")
    problem, primal, dual = composition_certificate(n)
    report = sdp.verify_certificate(problem, primal, dual)
    result = {
        "n": n,
        "analytic": (2 * np.sqrt(2)) ** n,
        "certificate": report.status,
        "certified_value": report.dual_value,
    }
    if n <= MAX_SOLVED_COMPOSITION:
        result["solver_value"] = sdp.solve(problem, tol).value
    return result

def rac_dimension_bound(n_settings, n_outcomes, p):
    """
    log₂ d ≥ (log|A| − h(p) − (1 − p) log(|A| − 1))·|S| for a random access code
    decoded with success probability p.
    """
    if n_settings < 1 or n_outcomes < 1:
        raise ValidationError("settings and outcomes must be positive")
    if not 1 / n_outcomes - 1e-12 <= p <= 1 + 1e-12:
        raise ValidationError(f"success probability must lie in [1/{n_outcomes}, 1], got {p}")
    p = min(1.0, max(0.0, p))
    if n_outcomes == 1:
        return 0.0
    per_setting = np.log2(n_outcomes) - ent.binary_entropy(p) - (1 - p) * np.log2(n_outcomes - 1)
    return float(max(0.0, per_setting * n_settings))

def urac_bound(dists, ps, alphabet):
    """
    Unbalanced random access code: m ≥ Σ_t H(X_t) − h(p_t) − (1 − p_t) log(|Σ| − 1).
    """
    if len(dists) != len(ps):
        raise ValidationError("one success probability per distribution is required")
    total = 0.0
    for dist, p in zip(dists, ps):
        if not 1 / alphabet - 1e-12 <= p <= 1 + 1e-12:
            raise ValidationError(f"success probability {p} outside [1/{alphabet}, 1]")
        p = min(1.0, p)
        total += ent.shannon(dist) - ent.binary_entropy(p)
        if alphabet > 1:
            total -= (1 - p) * np.log2(alphabet - 1)
    return float(max(0.0, total))
