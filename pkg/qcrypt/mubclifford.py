"""
Mutually unbiased bases and Clifford algebra generators.

A basis is a unitary whose columns are the basis vectors; a MubSet is a list of them.
"""
import numpy as np

import qcrypt.matcore as mc
from qcrypt.errors import ValidationError

UNITARY_TOL = 1e-9
MUB_TOL = 1e-8
MAX_PRIME = 31
MAX_CLIFFORD_QUBITS = 5

K_GATE = (mc.I2 + 1j * mc.X) / np.sqrt(2)

class MubSet:
    """ A list of orthonormal bases of one dimension. """
    def __init__(self, bases, family="custom"):
        """
        :param bases: list of unitaries, one per basis, vectors as columns
        :param family: label of the construction that produced the set
        """
        if not bases:
            raise ValidationError("a basis set needs at least one basis")
        self.bases = [mc.as_matrix(u, "basis") for u in bases]
        self.dim = self.bases[0].shape[0]
        for t, u in enumerate(self.bases):
            if u.shape[0] != self.dim:
                raise ValidationError(f"basis {t} has dim {u.shape[0]}, expected {self.dim}")
            if np.max(np.abs(u.conj().T @ u - np.eye(self.dim))) > UNITARY_TOL:
                raise ValidationError(f"basis {t} is not orthonormal")
        self.family = family

    def __len__(self):
        return len(self.bases)

    def subset(self, indices):
        return MubSet([self.bases[i] for i in indices], self.family)

    def to_dict(self):
        return {
            "family": self.family,
            "dim": self.dim,
            "bases": [
                [{"re": u[:, k].real.tolist(), "im": u[:, k].imag.tolist()}
                 for k in range(self.dim)]
                for u in self.bases],
        }

def check_mutually_unbiased(mubs, tol=MUB_TOL):
    """
    Check every cross-basis overlap |⟨b_k|b'_l⟩|² against 1/d.

    :returns: (passed, report) where the report names the worst pair
    """
    worst, pair = 0.0, None
    for t in range(len(mubs)):
        for u in range(t + 1, len(mubs)):
            overlaps = np.abs(mubs.bases[t].conj().T @ mubs.bases[u]) ** 2
            deviation = float(np.max(np.abs(overlaps - 1 / mubs.dim)))
            if deviation > worst or pair is None:
                worst, pair = deviation, (t, u)
    report = {"family": mubs.family, "dim": mubs.dim, "bases": len(mubs),
              "worst_deviation": worst, "worst_pair": list(pair) if pair else None}
    return worst <= tol, report

def standard_bases(n):
    """ Computational, Hadamard and K bases on n qubits, K = (I + iX)/√2. """
    if n < 1:
        raise ValidationError("need at least one qubit")
    gates = (mc.I2, mc.HADAMARD, K_GATE)
    return MubSet([mc.kron_all(*[g] * n) for g in gates], f"standard:{n}")

def product_mubs(mubs):
    """ Bases U ⊗ Ū in dimension d², one per basis of the input. """
    return MubSet([np.kron(u, u.conj()) for u in mubs.bases], f"product:{mubs.family}")

class LatinSquare:
    """ An s x s grid over the symbols 1..s. """
    def __init__(self, cells, latin=True):
        """
        :param cells: s x s integer grid with entries 1..s
        :param latin: require every row and column to be a permutation
        """
        cells = np.asarray(cells, dtype=int)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1]:
            raise ValidationError("a Latin square must be a square grid")
        self.s = cells.shape[0]
        if cells.min() < 1 or cells.max() > self.s:
            raise ValidationError(f"symbols must lie in 1..{self.s}")
        symbols = set(range(1, self.s + 1))
        if latin:
            for k in range(self.s):
                if set(cells[k]) != symbols or set(cells[:, k]) != symbols:
                    raise ValidationError(f"row or column {k + 1} is not a permutation")
        self.cells = cells
        self.latin = latin

    def positions(self, symbol):
        """ Cells (i, j) holding the symbol, ordered by row. """
        return [tuple(p) for p in np.argwhere(self.cells == symbol)]

    def orthogonal_to(self, other):
        """ Every ordered symbol pair appears exactly once when superimposed. """
        pairs = set(zip(self.cells.ravel(), other.cells.ravel()))
        return len(pairs) == self.s * self.s

def parse_latin_square(text):
    """ Whitespace separated integer grid, one row per line. """
    try:
        rows = [[int(tok) for tok in line.split()] for line in text.strip().splitlines()
                if line.strip()]
    except ValueError as e:
        raise ValidationError(f"Latin square is not an integer grid: {e}")
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ValidationError("Latin square rows differ in length")
    return LatinSquare(rows)

def row_square(s):
    return LatinSquare([[i + 1] * s for i in range(s)], latin=False)

def column_square(s):
    return LatinSquare([list(range(1, s + 1)) for _ in range(s)], latin=False)

def is_prime(d):
    if d < 2:
        return False
    return all(d % k for k in range(2, int(np.sqrt(d)) + 1))

def cyclic_latin_squares(s):
    """ The s − 1 mutually orthogonal squares L_ij = (a·i + j) mod s + 1 for prime s. """
    if not is_prime(s):
        raise ValidationError(f"cyclic Latin squares need prime side, got {s}")
    return [LatinSquare([[(a * i + j) % s + 1 for j in range(s)] for i in range(s)])
            for a in range(1, s)]

def latin_square_mub(squares, s, include_row_column=True):
    """
    Bases in dimension s² from mutually orthogonal Latin squares.

    Symbol ℓ of a square selects s cells (i_k, j_k); the basis holds the vectors
    (1/√s) Σ_k ω^{tk} |i_k, j_k⟩ for t in 0..s−1.

    :param squares: list of LatinSquare of side s
    :param include_row_column: prepend the row and column squares
    """
    squares = list(squares)
    if include_row_column:
        squares = [row_square(s), column_square(s)] + squares
    if not squares:
        raise ValidationError("no squares given")
    for sq in squares:
        if sq.s != s:
            raise ValidationError(f"square of side {sq.s} in a side-{s} construction")
    for a in range(len(squares)):
        for b in range(a + 1, len(squares)):
            if not squares[a].orthogonal_to(squares[b]):
                raise ValidationError(f"squares {a} and {b} are not orthogonal")

    powers = np.exp(2j * np.pi * np.outer(np.arange(s), np.arange(s)) / s) / np.sqrt(s)
    bases = []
    for sq in squares:
        u = np.zeros((s * s, s * s), dtype=complex)
        for symbol in range(1, s + 1):
            cells = sq.positions(symbol)
            for t in range(s):
                column = (symbol - 1) * s + t
                for k, (i, j) in enumerate(cells):
                    u[i * s + j, column] = powers[t, k]
        bases.append(u)
    return MubSet(bases, f"latin:{s}")

def shift_operator(d):
    """ X_d|k⟩ = |k+1 mod d⟩. """
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)

def clock_operator(d):
    """ Z_d|k⟩ = ω^k|k⟩, powers evaluated one by one. """
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))

def pauli_mub(d):
    """
    d + 1 bases for prime d: the computational basis and the eigenbases of X Z^k.

    The eigenvector with index j has amplitudes exp(πi·[k m(m−1) − 2jm − k(d−1)m]/d)/√d.
    """
    if not is_prime(d) or d > MAX_PRIME:
        raise ValidationError(f"Pauli bases need a prime dimension up to {MAX_PRIME}, got {d}")
    bases = [np.eye(d, dtype=complex)]
    m = np.arange(d)
    for k in range(d):
        u = np.zeros((d, d), dtype=complex)
        for j in range(d):
            num = (k * m * (m - 1) - 2 * j * m - k * (d - 1) * m) % (2 * d)
            u[:, j] = np.exp(1j * np.pi * num / d) / np.sqrt(d)
        bases.append(mc.fix_phase(u))
    return MubSet(bases, f"pauli:{d}")

def build_family(name):
    """
    Named constructions: standard:<n>, pauli:<d>, latin:<s>, product:<n>.

    product:<n> is the U ⊗ Ū family built on standard:<n>.
    """
    kind, _, arg = name.partition(":")
    try:
        size = int(arg)
    except ValueError:
        raise ValidationError(f"basis family {name!r} needs an integer parameter")
    if kind == "standard":
        return standard_bases(size)
    if kind == "pauli":
        return pauli_mub(size)
    if kind == "latin":
        return latin_square_mub(cyclic_latin_squares(size), size)
    if kind == "product":
        return product_mubs(standard_bases(size))
    raise ValidationError(f"unknown basis family {kind!r}")

class CliffordGenerators:
    """ Jordan-Wigner generators Γ_1..Γ_2n and Γ_0 = iⁿ Γ_1⋯Γ_2n on n qubits. """
    def __init__(self, n, gammas, gamma0):
        self.n = n
        self.dim = 2 ** n
        self.gammas = gammas
        self.gamma0 = gamma0

    def all(self):
        """ (Γ_0, Γ_1, ..., Γ_2n). """
        return [self.gamma0] + list(self.gammas)

    def observables(self, k):
        """ The first k of Γ_1, ..., Γ_2n, Γ_0. """
        pool = list(self.gammas) + [self.gamma0]
        if not 1 <= k <= len(pool):
            raise ValidationError(f"K must lie in 1..{len(pool)}, got {k}")
        return pool[:k]

def clifford_generators(n):
    """
    Γ_{2j−1} = Y^{⊗(j−1)} ⊗ X ⊗ I^{⊗(n−j)} and Γ_{2j} = Y^{⊗(j−1)} ⊗ Z ⊗ I^{⊗(n−j)}.
    """
    if not 1 <= n <= MAX_CLIFFORD_QUBITS:
        raise ValidationError(f"Clifford generators need 1 <= n <= {MAX_CLIFFORD_QUBITS}")
    gammas = []
    for j in range(1, n + 1):
        for middle in (mc.X, mc.Z):
            factors = [mc.Y] * (j - 1) + [middle] + [mc.I2] * (n - j)
            gammas.append(mc.kron_all(*factors))
    product = np.eye(2 ** n, dtype=complex)
    for g in gammas:
        product = product @ g
    return CliffordGenerators(n, gammas, (1j ** n) * product)

def _check_dim(rho, g):
    rho = mc.check_density(rho)
    if rho.shape[0] != g.dim:
        raise ValidationError(f"state dim {rho.shape[0]} does not match generators dim {g.dim}")
    return rho

def vector_components(rho, g):
    """ (Tr ρΓ_0, Tr ρΓ_1, ..., Tr ρΓ_2n). """
    rho = _check_dim(rho, g)
    return np.array([np.trace(rho @ gamma).real for gamma in g.all()])

def project_vector_part(rho, g):
    """ (I + Σ_j g_j Γ_j)/d, dropping every higher-grade component of ρ. """
    comps = vector_components(rho, g)
    out = (np.eye(g.dim) + sum(c * gamma for c, gamma in zip(comps, g.all()))) / g.dim
    return mc.check_density(out, "vector part")

def observables_from_vectors(xs, transpose=False):
    """
    Observables Σ_j x^j Γ_j for real unit vectors, with the maximally entangled state
    on which ⟨Ψ|X_s ⊗ Y_t|Ψ⟩ = x_s·y_t when Bob's side uses transpose=True.

    :param xs: list of real unit vectors of a common length N ≤ 10
    :returns: (observables, maximally entangled state vector)
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    size = xs.shape[1]
    if size > 2 * MAX_CLIFFORD_QUBITS:
        raise ValidationError(f"vectors of length {size} exceed {2 * MAX_CLIFFORD_QUBITS}")
    norms = np.linalg.norm(xs, axis=1)
    if np.max(np.abs(norms - 1)) > 1e-8:
        raise ValidationError("observable vectors must be unit vectors")
    g = clifford_generators(max(1, size // 2))
    pool = g.observables(size)
    if transpose:
        pool = [gamma.T for gamma in pool]
    observables = [sum(c * gamma for c, gamma in zip(x, pool)) for x in xs]
    psi = np.eye(g.dim, dtype=complex).ravel() / np.sqrt(g.dim)
    return observables, psi
