"""
Classical and measured entropies, in bits.

0·log 0 is taken as 0 everywhere. The Rényi family takes ``INF`` as the order of the
min-entropy.
"""
import numpy as np

import qcrypt.matcore as mc
from qcrypt.errors import ValidationError

INF = float('inf')
DIST_TOL = 1e-9
SUPPORT_CUTOFF = 1e-10

def check_dist(p, name="distribution"):
    """
    Validate a probability vector.

    :param p: sequence of probabilities
    :returns: float ndarray
    """
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0:
        raise ValidationError(f"{name} is empty")
    if not np.all(np.isfinite(p)) or np.min(p) < -DIST_TOL:
        raise ValidationError(f"{name} has negative or non-finite entries")
    if abs(np.sum(p) - 1) > DIST_TOL:
        raise ValidationError(f"{name} sums to {np.sum(p):.12g}, not 1")
    return np.clip(p, 0, None)

def _xlogx(p):
    p = p[p > 0]
    return p * np.log2(p)

def shannon(p):
    """ H(X) = −Σ p log p. """
    p = check_dist(p)
    return float(max(0.0, -np.sum(_xlogx(p))))

def renyi(p, alpha):
    """
    Rényi entropy of order alpha.

    :param p: probability vector
    :param alpha: order, > 0 and != 1; INF gives the min-entropy
    """
    if alpha <= 0 or alpha == 1:
        raise ValidationError(f"Renyi order must be positive and not 1, got {alpha}")
    p = check_dist(p)
    if alpha == INF:
        return float(-np.log2(np.max(p)))
    if alpha == 2:
        return float(-np.log2(np.sum(p ** 2)))
    p = p[p > 0]
    return float(np.log2(np.sum(p ** alpha)) / (1 - alpha))

def binary_entropy(p):
    """ h(p) = −p log p − (1−p) log(1−p). """
    if not 0 <= p <= 1:
        raise ValidationError(f"binary entropy needs p in [0, 1], got {p}")
    return shannon([p, 1 - p])

def outcome_distribution(basis, psi):
    """
    Outcome probabilities |⟨b_k|ψ⟩|² for a basis given as the columns of a unitary.
    """
    basis = mc.as_matrix(basis, "basis")
    psi = mc.check_pure(psi)
    if basis.shape[0] != psi.shape[0]:
        raise ValidationError(f"basis dim {basis.shape[0]} does not match state dim {psi.shape[0]}")
    probs = np.abs(basis.conj().T @ psi) ** 2
    return probs / np.sum(probs)

def measurement_entropy(basis, psi):
    """ H(B|ψ): Shannon entropy of measuring ψ in the basis. """
    return shannon(outcome_distribution(basis, psi))

def measurement_collision(basis, psi):
    """ H₂(B|ψ): collision entropy of measuring ψ in the basis. """
    return renyi(outcome_distribution(basis, psi), 2)

def mutual_information(joint):
    """
    I(X;Y) of a joint probability table.

    :param joint: 2-d array, rows indexed by x and columns by y
    """
    joint = np.asarray(joint, dtype=float)
    if joint.ndim != 2:
        raise ValidationError("joint distribution must be a table")
    check_dist(joint, "joint distribution")
    return max(0.0, shannon(joint.sum(axis=1)) + shannon(joint.sum(axis=0))
               - shannon(joint))

class CqState:
    """ A classical-quantum state Σ p_x |x⟩⟨x| ⊗ ρ_x. """
    def __init__(self, labels, weights, conditionals):
        """
        :param labels: one label per classical value
        :param weights: prior over the labels
        :param conditionals: density matrix per label, all of one dimension
        """
        if not len(labels) == len(weights) == len(conditionals):
            raise ValidationError("labels, weights and conditionals differ in length")
        self.labels = list(labels)
        self.weights = check_dist(weights, "cq weights")
        self.conditionals = [mc.check_density(rho, f"conditional {x}")
                             for x, rho in zip(self.labels, conditionals)]
        self.dim = self.conditionals[0].shape[0]
        if any(rho.shape[0] != self.dim for rho in self.conditionals):
            raise ValidationError("conditional states differ in dimension")

    @classmethod
    def from_vectors(cls, labels, weights, vectors):
        """ Build a cq-state whose conditionals are pure. """
        return cls(labels, weights, [mc.projector(mc.check_pure(v)) for v in vectors])

    def average(self):
        """ ρ = Σ p_x ρ_x. """
        return sum(p * rho for p, rho in zip(self.weights, self.conditionals))

    def to_dict(self):
        return {
            "labels": [str(x) for x in self.labels],
            "weights": self.weights.tolist(),
            "conditionals": [mc.to_json(rho) for rho in self.conditionals],
        }

def inverse_sqrt_on_support(rho, cutoff=SUPPORT_CUTOFF):
    """
    ρ^{−½} on the support of ρ; eigenvalues below cutoff map to 0.

    :returns: (pseudo inverse square root, support projector)
    """
    evals, evecs = np.linalg.eigh(mc.check_hermitian(rho))
    keep = evals > cutoff
    inv = np.zeros_like(evals)
    inv[keep] = 1 / np.sqrt(evals[keep])
    support = evecs[:, keep]
    return (evecs * inv) @ evecs.conj().T, support @ support.conj().T

def quantum_collision_cond(cq):
    """ H₂(ρ_AB|ρ) = −log Tr([(I ⊗ ρ^{−½})ρ_AB]²) of a cq-state. """
    r, _ = inverse_sqrt_on_support(cq.average())
    total = 0.0
    for p, rho in zip(cq.weights, cq.conditionals):
        block = r @ rho
        total += p ** 2 * np.trace(block @ block).real
    if total <= 0:
        raise ValidationError("degenerate ensemble")
    return float(-np.log2(total))

def square_root_measurement(cq):
    """
    Pretty-good measurement M_x = p_x ρ^{−½}ρ_xρ^{−½}, with the projector onto the
    complement of the support folded into the first element.
    """
    r, support = inverse_sqrt_on_support(cq.average())
    povm = [p * r @ rho @ r for p, rho in zip(cq.weights, cq.conditionals)]
    povm[0] = povm[0] + np.eye(cq.dim) - support
    return [(m + m.conj().T) / 2 for m in povm]

def srm_success(cq):
    """ Success probability of guessing x with the square-root measurement. """
    povm = square_root_measurement(cq)
    return float(sum(p * np.trace(m @ rho).real
                     for p, m, rho in zip(cq.weights, povm, cq.conditionals)))

def holevo_quantity(cq):
    """ χ = S(Σ p_x ρ_x) − Σ p_x S(ρ_x). """
    return mc.von_neumann(cq.average()) - float(
        sum(p * mc.von_neumann(rho) for p, rho in zip(cq.weights, cq.conditionals)))
