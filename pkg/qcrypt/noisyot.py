"""
Randomized 1-2 oblivious transfer from BB84 states against an adversary whose quantum
storage is noisy.

Alice encodes X in random bases Θ, waits, announces Θ and two hash functions, and outputs
S_b = f_b(X|I_b). Bob measures everything in the basis of his choice C and recovers S_C.
Security rests on the per-qubit uncertainty parameter Δ of the adversary's storage
attack; the bounds below turn Δ into the non-uniformity δ_sec of the string Bob did not
choose.
"""
import itertools
import logging

import numpy as np
import scipy.optimize

import qcrypt.entropy as ent
import qcrypt.matcore as mc
import qcrypt.pistar as pistar
from qcrypt.errors import DecodingError, ValidationError

LOG43 = np.log2(4 / 3)
BREIDBART_VALUE = 0.5 + 1 / (2 * np.sqrt(2))
CROSSOVER_R = 1 / np.sqrt(2)
ALPHA_MAX = 1 / np.sqrt(2)
ABORT_MARGIN = 2.0
SYNDROME_MARGIN = 0.5
MAX_ATTACK_QUBITS = 24
MAX_HONEST_QUBITS = 4096
MAX_CODE_LENGTH = 20
MAX_ENUMERATED_HASHES = 2 ** 16
MIN_GRID = 50
WARN_GRID = 200
DEFAULT_CODE = "hamming:2"
DEFAULT_SEED = 1234

NONE = "none"
BREIDBART = "breidbart"
STORE = "store"

logger = logging.getLogger("NOISYOT")

def bb84_vector(bit, basis):
    """ H^basis|bit⟩: basis 0 is the computational (+) basis, 1 the Hadamard (×) basis. """
    v = mc.ket(bit, 2)
    return mc.HADAMARD @ v if basis else v

def bb84_state(bit, basis):
    return mc.projector(bb84_vector(bit, basis))

def breidbart_basis():
    """ Eigenbasis of (Z + X)/√2, halfway between the two BB84 bases. """
    angle = np.pi / 8
    return np.array([[np.cos(angle), -np.sin(angle)],
                     [np.sin(angle), np.cos(angle)]], dtype=complex)

def bb84_cq(n):
    """
    n uniformly random bits, each sent in a uniformly random basis the receiver never
    learns: ρ_x = ⊗_i ½(σ_{x_i,+} + σ_{x_i,×}).
    """
    singles = [(bb84_state(x, 0) + bb84_state(x, 1)) / 2 for x in range(2)]
    labels = list(range(2 ** n))
    conditionals = []
    for x in labels:
        bits = [(x >> (n - 1 - i)) & 1 for i in range(n)]
        conditionals.append(mc.kron_all(*[singles[b] for b in bits]))
    return ent.CqState(labels, np.full(2 ** n, 2.0 ** -n), conditionals)

def guessing_probability(cq):
    """ Optimal probability of guessing the classical label from the quantum part. """
    weighted = [p * rho for p, rho in zip(cq.weights, cq.conditionals)]
    value, _ = pistar.optimal_discrimination(weighted)
    return value

def basis_guess(channel, basis):
    """ Helstrom value ½[1 + ½‖S(σ_{0,b}) − S(σ_{1,b})‖₁] of guessing a BB84 bit after S. """
    out0 = channel.apply(bb84_state(0, basis))
    out1 = channel.apply(bb84_state(1, basis))
    return float(0.5 * (1 + 0.5 * mc.trace_norm(out0 - out1)))

def channel_delta(channel):
    """ Δ(S) = √(P_g₊ · P_g×) for a single-qubit storage attack S. """
    if channel.in_dim != 2:
        raise ValidationError(f"{channel.name} does not act on a qubit")
    return float(np.sqrt(basis_guess(channel, 0) * basis_guess(channel, 1)))

def guessing_product(channels, basis):
    """ P_g(X|ρ_E) of a product attack: Π_i P_g(X_i | S_i(σ_{·,b})). """
    if not channels:
        raise ValidationError("at least one per-qubit channel is required")
    for channel in channels:
        if channel.in_dim != 2:
            raise ValidationError(f"{channel.name} does not act on a qubit")
    return float(np.prod([basis_guess(channel, basis) for channel in channels]))

def depolarizing_delta_max(r):
    """ max_S Δ(S) against depolarizing storage: (1 + r)/2 from r = 1/√2 on, Breidbart below. """
    if not 0 <= r <= 1:
        raise ValidationError(f"r must lie in [0, 1], got {r}")
    return max((1 + r) / 2, BREIDBART_VALUE) if r >= CROSSOVER_R else BREIDBART_VALUE

def symmetric_attack(alpha, theta, r):
    """
    Partial measurement with Kraus operators g A g†, g ∈ {I, X, Z, XZ}, where A has
    eigenvalue α on |φ⟩ and β = √(½ − α²) on |φ⊥⟩, |φ⟩ at polar angle θ in the X-Z plane.
    The outcome g is kept classically and the post-measurement qubit is stored under
    depolarizing noise r.
    """
    if not 0 <= alpha <= ALPHA_MAX + 1e-12:
        raise ValidationError(f"alpha must lie in [0, 1/√2], got {alpha}")
    beta = np.sqrt(max(0.0, 0.5 - alpha ** 2))
    phi = np.array([np.cos(theta / 2), np.sin(theta / 2)], dtype=complex)
    a = beta * mc.I2 + (alpha - beta) * mc.projector(phi)
    group = (mc.I2, mc.X, mc.Z, mc.X @ mc.Z)
    branches = [[g @ a @ g.conj().T] for g in group]
    return mc.KrausChannel.flagged(branches, mc.depolarizing_channel(r),
                                   f"attack({alpha:.4f},{theta:.4f})")

def _grid(start, stop, steps, extra):
    return np.unique(np.concatenate([np.linspace(start, stop, steps), extra]))

def verify_depolarizing_theorem(r, grid=WARN_GRID):
    """
    Grid search of Δ over the symmetrised four-outcome attacks against the closed form.

    :param r: depolarizing parameter of the storage
    :param grid: number of α points; the angle grid uses a tenth of it
    :returns: report with the maximum, its location and both comparison flags
    """
    if not 0 <= r <= 1:
        raise ValidationError(f"r must lie in [0, 1], got {r}")
    if grid < MIN_GRID:
        raise ValidationError(f"grid of {grid} points is too coarse (minimum {MIN_GRID})")
    if grid < WARN_GRID:
        logger.warning(f"grid of {grid} points is below the recommended {WARN_GRID}")
    alphas = _grid(0, ALPHA_MAX, grid, [0.0, 0.5, ALPHA_MAX])
    thetas = _grid(0, np.pi / 2, max(9, grid // 10), [np.pi / 4])
    best, arg = -1.0, None
    for alpha in alphas:
        for theta in thetas:
            value = channel_delta(symmetric_attack(alpha, theta, r))
            if value > best + 1e-12:
                best, arg = value, (float(alpha), float(theta))
    closed = depolarizing_delta_max(r)
    report = {
        "r": r,
        "max": best,
        "alpha": arg[0],
        "theta": arg[1],
        "closed_form": closed,
        "within_bound": bool(best <= closed + 1e-4),
        "attained": bool(abs(best - closed) <= 2e-3),
    }
    if not report["within_bound"]:
        logger.error(f"r = {r}: attack reaches {best:.6f} above the closed form {closed:.6f}")
    return report

def security_bound_perfect(n, ell, delta_max):
    """ δ_sec ≤ 2^{ℓ/2 − 1} · Δ^{log(4/3)·n/2}. """
    if not 0 < delta_max <= 1:
        raise ValidationError(f"delta_max must lie in (0, 1], got {delta_max}")
    return float(2 ** (ell / 2 - 1) * delta_max ** (LOG43 * n / 2))

def security_rate(p_error, delta_max):
    """ Exponent per qubit of the practical bound; negative means secure for large m. """
    if not 0 <= p_error < 0.5:
        raise ValidationError(f"p_error must lie in [0, ½), got {p_error}")
    if not 0 < delta_max <= 1:
        raise ValidationError(f"delta_max must lie in (0, 1], got {delta_max}")
    return float(ent.binary_entropy(p_error) / 4 + np.log2(delta_max) * LOG43 / 2)

def security_bound_practical(m, ell, p_error, delta_max):
    """ 2^{ℓ/2 − 1 + h(p_error)m/4} · Δ^{log(4/3)m/2}. """
    security_rate(p_error, delta_max)
    exponent = ell / 2 - 1 + ent.binary_entropy(p_error) * m / 4
    return float(2 ** exponent * delta_max ** (LOG43 * m / 2))

def practical_crossover(delta_max):
    """ Largest tolerable p_error: root of h(p)/4 + log Δ · log(4/3)/2 = 0. """
    if not 0 < delta_max < 1:
        raise ValidationError("a crossover exists only for delta_max in (0, 1)")
    if security_rate(0.5 - 1e-12, delta_max) < 0:
        return 0.5
    return float(scipy.optimize.brentq(lambda p: security_rate(p, delta_max),
                                       1e-12, 0.5 - 1e-12, xtol=1e-12))

def tradeoff_rows(rs, p_errors, m, ell):
    """ Plot-ready rows (r, p_error, bound, secure) for depolarizing storage. """
    rows = []
    for r in rs:
        delta = depolarizing_delta_max(r)
        for p in p_errors:
            rows.append({
                "r": float(r),
                "p_error": float(p),
                "delta_max": delta,
                "bound": security_bound_practical(m, ell, p, delta),
                "secure": bool(security_rate(p, delta) < 0),
            })
    return rows

def pa_bound(ell, k_leaked_bits, p_guess):
    """ d(F(X)|F, D, ρ_E) ≤ 2^{(ℓ + k)/2 − 1} √P_g. """
    if not 0 < p_guess <= 1:
        raise ValidationError(f"guessing probability must lie in (0, 1], got {p_guess}")
    return float(2 ** ((ell + k_leaked_bits) / 2 - 1) * np.sqrt(p_guess))

def hashing_distance_bound(h2, s):
    """ ½ · 2^{−½(H₂(ρ_AB|ρ) − s)} for s output bits. """
    return float(0.5 * 2 ** (-0.5 * (h2 - s)))

def to_bits(x, n):
    return np.array([(x >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)

class AffineHash:
    """ f(x) = Ax ⊕ c over GF(2). """
    def __init__(self, a, c):
        self.a = np.asarray(a, dtype=np.uint8)
        self.c = np.asarray(c, dtype=np.uint8)

    def apply(self, x):
        return (self.a.astype(int) @ np.asarray(x, dtype=int) + self.c) % 2

    def apply_int(self, x):
        y = self.apply(to_bits(x, self.a.shape[1]))
        return int(sum(int(b) << (len(y) - 1 - i) for i, b in enumerate(y)))

class AffineHashFamily:
    """ All affine maps {0,1}ⁿ → {0,1}^ℓ. """
    def __init__(self, n, ell):
        if n < 1 or ell < 1:
            raise ValidationError("hash input and output lengths must be positive")
        self.n = n
        self.ell = ell

    @property
    def size(self):
        return 2 ** (self.ell * self.n + self.ell)

    def sample(self, rng):
        return AffineHash(rng.integers(0, 2, size=(self.ell, self.n), dtype=np.uint8),
                          rng.integers(0, 2, size=self.ell, dtype=np.uint8))

    def enumerate(self):
        if self.size > MAX_ENUMERATED_HASHES:
            raise ValidationError(f"family of {self.size} functions is too large to enumerate")
        width = self.ell * self.n
        for code in range(self.size):
            bits = to_bits(code, width + self.ell)
            yield AffineHash(bits[:width].reshape(self.ell, self.n), bits[width:])

    def collision_probability(self, x, y):
        """
        Pr_f[f(x) = f(y)], exact: rows of A are independent and c cancels, so it is the
        fraction of rows a with a·(x ⊕ y) = 0, to the power ℓ.
        """
        if x == y:
            return 1.0
        z = to_bits(x ^ y, self.n)
        rows = np.array([to_bits(a, self.n) for a in range(2 ** self.n)], dtype=int)
        even = np.mean((rows @ z) % 2 == 0)
        return float(even ** self.ell)

    def worst_collision(self):
        """ max over x ≠ y; collisions depend on x ⊕ y only. """
        return max(self.collision_probability(z, 0) for z in range(1, 2 ** self.n))

def sample_hash(family, seed):
    return family.sample(np.random.default_rng(seed))

def non_uniformity(cq, n_bits):
    """ d(X|ρ_E) = ½ Σ_x ‖p_x ρ_x − 2^{−n} ρ_E‖₁ over all n-bit strings x. """
    rho = cq.average()
    weighted = {int(x): p * r for x, p, r in zip(cq.labels, cq.weights, cq.conditionals)}
    if any(not 0 <= x < 2 ** n_bits for x in weighted):
        raise ValidationError(f"labels must be {n_bits}-bit integers")
    total = 0.0
    for x in range(2 ** n_bits):
        total += mc.trace_norm(weighted.get(x, 0 * rho) - 2.0 ** -n_bits * rho)
    return float(total / 2)

def hashed_non_uniformity(cq, family):
    """ Average of d(F(X)|F, ρ_E) over every function of the family. """
    rho = cq.average()
    total = 0.0
    for f in family.enumerate():
        groups = [0 * rho for _ in range(2 ** family.ell)]
        for x, p, r in zip(cq.labels, cq.weights, cq.conditionals):
            groups[f.apply_int(int(x))] = groups[f.apply_int(int(x))] + p * r
        total += sum(mc.trace_norm(g - 2.0 ** -family.ell * rho) for g in groups) / 2
    return float(total / family.size)

def gf2_rank(h):
    """ Rank over GF(2) by row reduction. """
    m = np.array(h, dtype=np.uint8) % 2
    rank = 0
    for col in range(m.shape[1]):
        pivots = np.nonzero(m[rank:, col])[0]
        if not len(pivots):
            continue
        pivot = rank + pivots[0]
        m[[rank, pivot]] = m[[pivot, rank]]
        for row in range(m.shape[0]):
            if row != rank and m[row, col]:
                m[row] ^= m[rank]
        rank += 1
        if rank == m.shape[0]:
            break
    return rank

class LinearCode:
    """ Binary code given by a full-row-rank parity-check matrix, decoded by coset leaders. """
    def __init__(self, h, name="code"):
        self.h = np.asarray(h, dtype=np.uint8) % 2
        self.name = name
        self.rows, self.length = self.h.shape
        if self.length > MAX_CODE_LENGTH:
            raise ValidationError(f"block length {self.length} exceeds {MAX_CODE_LENGTH}")
        if gf2_rank(self.h) != self.rows:
            raise ValidationError(f"{name}: parity-check matrix is not of full row rank")
        self.leaders, self.radius = self._coset_leaders()

    def _coset_leaders(self):
        leaders = {}
        radius = None
        for weight in range(self.length + 1):
            clash = False
            for positions in itertools.combinations(range(self.length), weight):
                e = np.zeros(self.length, dtype=np.uint8)
                e[list(positions)] = 1
                key = self.syndrome(e).tobytes()
                if key in leaders:
                    clash = True
                else:
                    leaders[key] = e
            if clash and radius is None:
                radius = weight - 1
            if len(leaders) == 2 ** self.rows:
                break
        return leaders, weight if radius is None else radius

    def syndrome(self, x):
        return (self.h.astype(int) @ np.asarray(x, dtype=int) % 2).astype(np.uint8)

    def decode(self, y, syndrome):
        """ Correct y towards the word whose syndrome was announced. """
        diff = (self.syndrome(y) ^ np.asarray(syndrome, dtype=np.uint8)).tobytes()
        return np.asarray(y, dtype=np.uint8) ^ self.leaders[diff]

    def to_dict(self):
        return {"name": self.name, "length": self.length, "rows": self.rows,
                "radius": self.radius, "h": self.h.tolist()}

def hamming_code(r):
    """ [2^r − 1, 2^r − 1 − r] Hamming code: columns are the nonzero r-bit vectors. """
    if r < 2:
        raise ValidationError("Hamming codes need r >= 2")
    columns = [to_bits(v, r) for v in range(1, 2 ** r)]
    return LinearCode(np.array(columns).T, f"hamming:{r}")

def extended_hamming_code(r):
    base = hamming_code(r).h
    h = np.zeros((r + 1, base.shape[1] + 1), dtype=np.uint8)
    h[:r, :-1] = base
    h[r, :] = 1
    return LinearCode(h, f"ext-hamming:{r}")

def repetition_code(m):
    if m < 2:
        raise ValidationError("repetition codes need length >= 2")
    h = np.zeros((m - 1, m), dtype=np.uint8)
    for i in range(m - 1):
        h[i, i] = h[i, i + 1] = 1
    return LinearCode(h, f"repetition:{m}")

def build_code(name):
    """ Presets hamming:<r>, ext-hamming:<r>, repetition:<m>. """
    kind, _, arg = name.partition(":")
    if not arg.isdigit():
        raise ValidationError(f"code {name!r} needs an integer parameter")
    builders = {"hamming": hamming_code, "ext-hamming": extended_hamming_code,
                "repetition": repetition_code}
    if kind not in builders:
        raise ValidationError(f"unknown code family {kind!r}")
    return builders[kind](int(arg))

def syndrome_roundtrip(code, x, error):
    """
    Send syn(x), receive x ⊕ error, decode.

    :raises DecodingError: when the error is beyond the code's radius or decoding misses
    """
    x = np.asarray(x, dtype=np.uint8)
    error = np.asarray(error, dtype=np.uint8)
    if len(x) != code.length or len(error) != code.length:
        raise ValidationError(f"{code.name} works on blocks of {code.length} bits")
    if int(error.sum()) > code.radius:
        raise DecodingError(f"{int(error.sum())} flips exceed the radius {code.radius} of {code.name}")
    decoded = code.decode(x ^ error, code.syndrome(x))
    if not np.array_equal(decoded, x):
        raise DecodingError(f"{code.name} decoded to the wrong word")
    return decoded

def _blocks(bits, length):
    padded = np.zeros(-(-len(bits) // length) * length, dtype=np.uint8)
    padded[:len(bits)] = bits
    return padded.reshape(-1, length)

def block_syndromes(code, bits):
    """ Syndromes of consecutive blocks, the last one zero-padded. """
    return [code.syndrome(block) for block in _blocks(bits, code.length)]

def reconcile(code, bits, syndromes):
    """ Blockwise correction of a noisy copy towards the announced syndromes. """
    blocks = _blocks(bits, code.length)
    if len(blocks) != len(syndromes):
        raise ValidationError("syndrome count does not match the string length")
    fixed = [code.decode(block, s) for block, s in zip(blocks, syndromes)]
    return np.concatenate(fixed)[:len(bits)] if fixed else np.zeros(0, dtype=np.uint8)

class RotParams:
    """ Parameters of the noiseless protocol: n qubits, ℓ output bits, wait time label. """
    def __init__(self, n, ell, wait="T", seed=DEFAULT_SEED):
        if n < 1 or ell < 1:
            raise ValidationError("n and ell must be positive")
        self.n = n
        self.ell = ell
        self.wait = wait
        self.seed = seed
        self.p_erase = 0.0
        self.p_error = 0.0
        self.code = None

    @property
    def practical(self):
        return False

    def to_dict(self):
        return {"n": self.n, "ell": self.ell, "wait": self.wait, "seed": self.seed}

class PracticalParams(RotParams):
    """ Adds erasures, bit errors and the code used for information reconciliation. """
    def __init__(self, n, ell, p_erase, p_error, code=DEFAULT_CODE, wait="T", seed=DEFAULT_SEED):
        super().__init__(n, ell, wait, seed)
        if not 0 <= p_erase < 1:
            raise ValidationError(f"p_erase must lie in [0, 1), got {p_erase}")
        if not 0 <= p_error < 0.5:
            raise ValidationError(f"p_error must lie in [0, ½), got {p_error}")
        self.p_erase = p_erase
        self.p_error = p_error
        self.code = build_code(code) if isinstance(code, str) else code
        if self.code.length > n:
            raise ValidationError(f"block length {self.code.length} exceeds n = {n}")
        rate = self.code.rows / self.code.length
        allowed = ent.binary_entropy(p_error) * (1 + SYNDROME_MARGIN)
        if rate > allowed:
            logger.warning(f"{self.code.name} leaks {rate:.3f} bits per bit, "
                           f"above h(p_error)(1 + margin) = {allowed:.3f}")

    @property
    def practical(self):
        return True

    def abort_threshold(self):
        """ (1 − p_erase)n/2 − 2√n. """
        return (1 - self.p_erase) * self.n / 2 - ABORT_MARGIN * np.sqrt(self.n)

    def to_dict(self):
        doc = super().to_dict()
        doc.update({"p_erase": self.p_erase, "p_error": self.p_error,
                    "code": self.code.name})
        return doc

class StorageAttack:
    """ A product attack: per qubit, either measure at once or store under depolarizing noise. """
    def __init__(self, name, r=None):
        if name not in (BREIDBART, STORE):
            raise ValidationError(f"unknown attack {name!r}")
        if name == STORE and (r is None or not 0 <= r <= 1):
            raise ValidationError("storing needs a depolarizing parameter in [0, 1]")
        self.name = name
        self.r = r
        self.logger = logging.getLogger("NOISYOT")
        if name == BREIDBART:
            self.channel = mc.measure_channel(breidbart_basis())
        else:
            self.channel = mc.depolarizing_channel(r)

    def delta(self):
        return channel_delta(self.channel)

    def correct_probability(self, bit, basis):
        """ Probability that the adversary's final guess of the bit is right. """
        out = self.channel.apply(bb84_state(bit, basis))
        if self.name == STORE:
            u = mc.HADAMARD if basis else mc.I2
            out = u.conj().T @ out @ u
        return float(np.real(out[bit, bit]))

    def guess_bits(self, x, theta, rng):
        right = np.array([self.correct_probability(b, t) for b, t in zip(x, theta)])
        keep = rng.random(len(x)) < right
        return np.where(keep, x, 1 - x).astype(np.uint8)

class Alice:
    """ Sender: prepares BB84 states, announces bases, syndromes and hashes. """
    def __init__(self, params, rng):
        self.params = params
        self.rng = rng
        n = params.n
        self.x = rng.integers(0, 2, size=n, dtype=np.uint8)
        self.theta = rng.integers(0, 2, size=n, dtype=np.uint8)
        self.family = AffineHashFamily(n, params.ell)

    def states(self):
        return [bb84_vector(b, t) for b, t in zip(self.x, self.theta)]

    def accept(self, erased):
        """ Abort when either basis keeps too few unerased slots. """
        if not self.params.practical:
            return True
        kept = ~erased
        counts = [int(np.sum(kept & (self.theta == b))) for b in (0, 1)]
        return min(counts) > self.params.abort_threshold()

    def positions(self, erased):
        return [np.nonzero((self.theta == b) & ~erased)[0] for b in (0, 1)]

    def announce(self, erased):
        """ Bases, one hash per basis and, in the practical protocol, blockwise syndromes. """
        hashes = [self.family.sample(self.rng) for _ in range(2)]
        syndromes = None
        if self.params.practical:
            syndromes = [block_syndromes(self.params.code, self.x[idx])
                         for idx in self.positions(erased)]
        return self.theta.copy(), hashes, syndromes

    def outputs(self, erased, hashes):
        return [output_string(hashes[b], self.x, idx)
                for b, idx in enumerate(self.positions(erased))]

class Bob:
    """ Honest receiver: measures every qubit in the basis of his choice. """
    def __init__(self, params, choice, rng):
        self.params = params
        self.choice = choice
        self.rng = rng

    def receive(self, states):
        n = len(states)
        basis = mc.HADAMARD if self.choice else mc.I2
        outcomes = np.array([self.rng.choice(2, p=ent.outcome_distribution(basis, v))
                             for v in states], dtype=np.uint8)
        flips = self.rng.random(n) < self.params.p_error
        erased = self.rng.random(n) < self.params.p_erase
        self.bits = outcomes ^ flips.astype(np.uint8)
        return erased

    def output(self, theta, erased, hashes, syndromes):
        idx = np.nonzero((theta == self.choice) & ~erased)[0]
        bits = self.bits[idx]
        if syndromes is not None:
            bits = reconcile(self.params.code, bits, syndromes[self.choice])
        full = np.zeros(len(theta), dtype=np.uint8)
        full[idx] = bits
        return output_string(hashes[self.choice], full, idx)

def output_string(f, x, idx):
    """ f applied to x restricted to idx, all other positions zero. """
    masked = np.zeros(len(x), dtype=np.uint8)
    masked[idx] = np.asarray(x, dtype=np.uint8)[idx]
    return tuple(int(b) for b in f.apply(masked))

def simulate_rot(params, attack=None, trials=1000, seed=None):
    """
    Monte-Carlo runs of the protocol.

    With attack None, Bob is honest and the report counts correct deliveries of S_C,
    aborts and failures, where reconciliation left Bob with a wrong S_C. With a
    StorageAttack, a dishonest Bob guesses X qubit by qubit and the report compares
    his success on S_1 with ½ + δ_sec.
    """
    if trials < 1:
        raise ValidationError("trials must be positive")
    if attack is not None and params.n > MAX_ATTACK_QUBITS:
        raise ValidationError(f"adversarial runs simulate at most {MAX_ATTACK_QUBITS} qubits")
    if params.n > MAX_HONEST_QUBITS:
        raise ValidationError(f"honest runs simulate at most {MAX_HONEST_QUBITS} qubits")
    seed = params.seed if seed is None else seed
    children = np.random.SeedSequence(seed).spawn(trials)
    correct = aborts = guessed = 0
    for child in children:
        rng = np.random.default_rng(child)
        alice = Alice(params, rng)
        if attack is None:
            bob = Bob(params, int(rng.integers(0, 2)), rng)
            erased = bob.receive(alice.states())
            if not alice.accept(erased):
                aborts += 1
                continue
            theta, hashes, syndromes = alice.announce(erased)
            if bob.output(theta, erased, hashes, syndromes) == alice.outputs(erased, hashes)[bob.choice]:
                correct += 1
        else:
            erased = np.zeros(params.n, dtype=bool)
            guess = attack.guess_bits(alice.x, alice.theta, rng)
            theta, hashes, _ = alice.announce(erased)
            target = alice.outputs(erased, hashes)[1]
            if output_string(hashes[1], guess, np.nonzero(theta == 1)[0]) == target:
                guessed += 1

    completed = trials - aborts
    report = {"params": params.to_dict(), "trials": trials,
              "attack": attack.name if attack is not None else NONE}
    if attack is None:
        report.update({
            "aborts": aborts,
            "failures": completed - correct,
            "abort_rate": aborts / trials,
            "correctness": correct / completed if completed else None,
        })
        logger.info(f"honest runs: {correct}/{completed} correct, {aborts} aborts")
    else:
        rate = guessed / trials
        delta_sec = security_bound_perfect(params.n, params.ell, attack.delta())
        envelope = delta_sec + 3 * np.sqrt(0.25 / trials)
        report.update({
            "guess_rate": rate,
            "advantage": rate - 2.0 ** -params.ell,
            "delta_sec": delta_sec,
            "within_envelope": bool(rate - 2.0 ** -params.ell <= envelope),
        })
        logger.info(f"{attack.name}: guessed S_1 in {guessed}/{trials} runs, δ_sec = {delta_sec:.4g}")
    return report
