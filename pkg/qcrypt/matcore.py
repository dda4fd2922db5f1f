"""
Dense linear algebra and quantum state primitives shared by every other module.

Matrices are plain complex numpy arrays. The check_* helpers enforce the invariants of
Hermitian matrices, density matrices, pure states and POVMs, returning the validated array
so callers can write ``rho = check_density(rho)``.
"""
import functools

import numpy as np

from qcrypt.errors import ValidationError

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9
TRACE_TOL = 1e-9
NORM_TOL = 1e-10
POVM_TOL = 1e-8
PHASE_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULIS = (X, Y, Z)

def as_matrix(m, name="matrix"):
    """
    Convert to a square complex array.

    :param m: anything numpy accepts as a 2-d array
    :param name: used in error messages
    :returns: complex ndarray
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} has non-finite entries")
    return m

def same_dim(a, b):
    """ Raise if the two square matrices differ in dimension. """
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")

def check_hermitian(m, name="matrix"):
    """ Validate M = M† entrywise within HERMITIAN_TOL. """
    m = as_matrix(m, name)
    deviation = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if deviation > HERMITIAN_TOL:
        raise ValidationError(f"{name} is not Hermitian (deviation {deviation:.3g})")
    return m

def check_density(rho, name="state"):
    """ Validate a density matrix: Hermitian, PSD and unit trace. """
    rho = check_hermitian(rho, name)
    evals = np.linalg.eigvalsh(rho)
    if evals[0] < -PSD_TOL:
        raise ValidationError(f"{name} is not PSD (min eigenvalue {evals[0]:.3g})")
    if abs(np.trace(rho).real - 1) > TRACE_TOL:
        raise ValidationError(f"{name} does not have unit trace")
    return rho

def check_pure(psi, name="state vector"):
    """ Validate a unit vector and return it as a complex 1-d array. """
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValidationError(f"{name} must be a vector")
    if abs(np.linalg.norm(psi) - 1) > NORM_TOL:
        raise ValidationError(f"{name} is not normalised")
    return psi

def check_povm(elements, name="povm"):
    """ Validate POVM elements: same dim, each PSD, summing to the identity. """
    if len(elements) == 0:
        raise ValidationError(f"{name} has no elements")
    elements = [check_hermitian(e, name) for e in elements]
    dim = elements[0].shape[0]
    for e in elements:
        if e.shape[0] != dim:
            raise ValidationError(f"{name} elements differ in dimension")
        if np.linalg.eigvalsh(e)[0] < -PSD_TOL:
            raise ValidationError(f"{name} has an element that is not PSD")
    if np.max(np.abs(sum(elements) - np.eye(dim))) > POVM_TOL:
        raise ValidationError(f"{name} does not sum to the identity")
    return elements

def fix_phase(vectors):
    """
    Rotate each column so that its first nonzero amplitude is real and positive.

    :param vectors: matrix whose columns are vectors
    :returns: new matrix with fixed phases
    """
    vectors = np.array(vectors, dtype=complex)
    for k in range(vectors.shape[1]):
        column = vectors[:, k]
        nonzero = np.flatnonzero(np.abs(column) > PHASE_TOL)
        if len(nonzero):
            amp = column[nonzero[0]]
            vectors[:, k] = column * (abs(amp) / amp)
    return vectors

def eig_hermitian(m):
    """
    Eigen-decomposition of a Hermitian matrix.

    :returns: (ascending eigenvalues, orthonormal eigenvector columns)
    """
    m = check_hermitian(m)
    evals, evecs = np.linalg.eigh((m + m.conj().T) / 2)
    return evals, fix_phase(evecs)

def trace_norm(m):
    """ Sum of absolute eigenvalues of a Hermitian matrix. """
    return float(np.sum(np.abs(np.linalg.eigvalsh(check_hermitian(m)))))

def trace_distance(a, b):
    """ ½‖a − b‖₁ of two density matrices. """
    a = check_density(a, "first state")
    b = check_density(b, "second state")
    same_dim(a, b)
    return min(1.0, max(0.0, trace_norm(a - b) / 2))

def sqrtm_psd(m):
    """ Square root of a PSD matrix, negative rounding noise clipped to zero. """
    evals, evecs = np.linalg.eigh(check_hermitian(m))
    return (evecs * np.sqrt(np.clip(evals, 0, None))) @ evecs.conj().T

def fidelity(a, b):
    """ Tr√(√a b √a), clipped to [0, 1]. """
    a = check_density(a, "first state")
    b = check_density(b, "second state")
    same_dim(a, b)
    root = sqrtm_psd(a)
    inner = root @ b @ root
    evals = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    return float(min(1.0, np.sum(np.sqrt(np.clip(evals, 0, None)))))

def partial_trace(m, dims, keep=0):
    """
    Trace out one half of a bipartite operator.

    :param m: operator on a space of dimension dA·dB
    :param dims: the pair (dA, dB)
    :param keep: 0 keeps the A system, 1 keeps the B system
    :returns: reduced operator
    """
    m = as_matrix(m)
    d_a, d_b = dims
    if d_a * d_b != m.shape[0]:
        raise ValidationError(f"dimension {m.shape[0]} does not factor as {d_a}x{d_b}")
    blocks = m.reshape(d_a, d_b, d_a, d_b)
    if keep == 0:
        return np.einsum('ijkj->ik', blocks)
    if keep == 1:
        return np.einsum('ijil->jl', blocks)
    raise ValidationError(f"keep must be 0 or 1, got {keep}")

def bloch_vector(rho):
    """ Bloch vector (rx, ry, rz) of a qubit density matrix. """
    rho = check_density(rho)
    if rho.shape[0] != 2:
        raise ValidationError("Bloch vectors are defined for qubits only")
    return tuple(float(np.trace(rho @ p).real) for p in PAULIS)

def from_bloch(r):
    """ Qubit density matrix (I + r·σ)/2. """
    return (I2 + sum(c * p for c, p in zip(r, PAULIS))) / 2

def ket(index, dim):
    """ Computational basis vector. """
    v = np.zeros(dim, dtype=complex)
    v[index] = 1
    return v

def projector(v):
    """ |v⟩⟨v|. """
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())

def kron_all(*mats):
    """ Tensor product of all arguments, left to right. """
    return functools.reduce(np.kron, [np.asarray(m, dtype=complex) for m in mats])

def von_neumann(rho):
    """ −Tr ρ log₂ ρ. """
    evals = np.linalg.eigvalsh(check_hermitian(rho))
    evals = evals[evals > PSD_TOL]
    return float(-np.sum(evals * np.log2(evals)))

class KrausChannel:
    """ A trace-preserving map given by its Kraus operators. """
    def __init__(self, operators, name="channel"):
        """
        Validate and store the Kraus operators.

        :param operators: list of matrices of shape (out_dim, in_dim)
        :param name: label used in logs and reports
        """
        ops = [np.asarray(op, dtype=complex) for op in operators]
        if not ops:
            raise ValidationError(f"{name} has no Kraus operators")
        shape = ops[0].shape
        if any(op.ndim != 2 or op.shape != shape for op in ops):
            raise ValidationError(f"{name} Kraus operators differ in shape")
        self.operators = ops
        self.name = name
        self.out_dim, self.in_dim = shape

        completeness = sum(op.conj().T @ op for op in ops)
        if np.max(np.abs(completeness - np.eye(self.in_dim))) > POVM_TOL:
            raise ValidationError(f"{name} is not trace preserving")

        self.unital = False
        if self.in_dim == self.out_dim:
            image = sum(op @ op.conj().T for op in ops)
            self.unital = bool(np.max(np.abs(image - np.eye(self.out_dim))) <= POVM_TOL)

    def apply(self, rho):
        """ Σ V ρ V†. Works on any operator, not only states. """
        rho = as_matrix(rho)
        if rho.shape[0] != self.in_dim:
            raise ValidationError(
                f"{self.name} expects dimension {self.in_dim}, got {rho.shape[0]}")
        return sum(op @ rho @ op.conj().T for op in self.operators)

    def compose(self, after):
        """ The channel ``after ∘ self``. """
        if after.in_dim != self.out_dim:
            raise ValidationError("channels cannot be composed: dimension mismatch")
        ops = [b @ a for a in self.operators for b in after.operators]
        return KrausChannel(ops, f"{after.name}*{self.name}")

    @classmethod
    def flagged(cls, branches, after=None, name="instrument"):
        """
        Build a channel that records which branch of an instrument fired.

        The output is the classical flag register tensored with the branch output:
        each Kraus operator becomes |g⟩ ⊗ (after_j · K) for branch g.

        :param branches: list of lists of Kraus operators, one list per outcome
        :param after: optional channel applied to every branch output
        """
        ops = []
        count = len(branches)
        for g, branch in enumerate(branches):
            flag = ket(g, count).reshape(count, 1)
            for k in branch:
                k = np.asarray(k, dtype=complex)
                tails = after.operators if after is not None else [np.eye(k.shape[0])]
                ops.extend(np.kron(flag, t @ k) for t in tails)
        return cls(ops, name)

    def to_dict(self):
        return {
            "name": self.name,
            "in_dim": self.in_dim,
            "out_dim": self.out_dim,
            "unital": self.unital,
            "kraus": [to_json(op) for op in self.operators],
        }

def apply_channel(channel, rho):
    """ Apply a channel to a density matrix and return the (validated) output state. """
    rho = check_density(rho)
    return check_density(channel.apply(rho), f"{channel.name} output")

def identity_channel(dim):
    return KrausChannel([np.eye(dim)], "identity")

def unitary_channel(u):
    u = as_matrix(u, "unitary")
    return KrausChannel([u], "unitary")

def depolarizing_channel(r):
    """
    Qubit depolarizing channel N(ρ) = rρ + (1 − r)I/2.

    :param r: retention parameter in [0, 1]
    """
    if not 0 <= r <= 1:
        raise ValidationError(f"depolarizing parameter must lie in [0, 1], got {r}")
    ops = [np.sqrt((1 + 3 * r) / 4) * I2]
    ops.extend(np.sqrt((1 - r) / 4) * p for p in PAULIS)
    return KrausChannel(ops, f"depolarizing({r:g})")

def measure_channel(basis):
    """
    Measure in the basis given by the columns of ``basis`` and keep the outcome
    as a diagonal classical register.
    """
    basis = as_matrix(basis, "basis")
    dim = basis.shape[0]
    ops = [np.outer(ket(k, dim), basis[:, k].conj()) for k in range(dim)]
    return KrausChannel(ops, "measure")

def random_density(dim, rng, rank=None):
    """ GG†/Tr(GG†) with G a complex Gaussian dim x rank matrix. """
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real

def random_pure(dim, rng):
    """ Normalised complex Gaussian vector. """
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)

def random_unitary(dim, rng):
    """ Haar unitary from the QR decomposition of a Gaussian matrix with fixed phases. """
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))

def to_json(m):
    """ Serialise a square matrix as {"dim", "re", "im"} in row-major order. """
    m = as_matrix(m)
    return {
        "dim": int(m.shape[0]),
        "re": m.real.ravel().tolist(),
        "im": m.imag.ravel().tolist(),
    }

def from_json(doc):
    """ Inverse of to_json. """
    try:
        dim = int(doc["dim"])
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc.get("im", np.zeros(dim * dim)), dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(f"malformed matrix document: {e}")
    if re.size != dim * dim or im.size != dim * dim:
        raise ValidationError(f"matrix document has wrong entry count for dim {dim}")
    return as_matrix((re + 1j * im).reshape(dim, dim))
