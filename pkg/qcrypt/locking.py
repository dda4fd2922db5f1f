"""
Locking of classical correlations and bounds on quantum bit-string commitment.

The ensemble encodes a string x in one of m bases chosen uniformly, U_t|x⟩. The
information an outcome carries about the pair (x, t) is log d minus the average entropy
of the measured bases, so analytic entropy bounds give certified upper bounds and
explicit measurements give lower bounds.
"""
import logging

import numpy as np

import qcrypt.entropy as ent
import qcrypt.matcore as mc
import qcrypt.mubclifford as mub
import qcrypt.pistar as pistar
import qcrypt.uncertainty as unc
from qcrypt.errors import ValidationError

LOCKING_TOL = 1e-3
MAX_DIM = 16
SUPPORTED_FAMILIES = ("standard", "pauli", "latin", "product")
QBSC_CONSTANT = 5 * np.log2(5) - 4

logger = logging.getLogger("LOCKING")

def prime_power(d):
    """ (p, N) with d = p^N, or None. """
    for p in range(2, d + 1):
        if d % p == 0:
            n, rest = 0, d
            while rest % p == 0:
                rest //= p
                n += 1
            return (p, n) if rest == 1 else None
    return None

def displacement_operators(d):
    """ The d² operators ⊗_i X_p^{a_i} Z_p^{b_i} for d = p^N. """
    factors = prime_power(d)
    if factors is None:
        raise ValidationError(f"dimension {d} is not a prime power")
    p, count = factors
    shift, clock = mub.shift_operator(p), mub.clock_operator(p)
    local = [np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
             for a in range(p) for b in range(p)]
    ops = [np.ones((1, 1), dtype=complex)]
    for _ in range(count):
        ops = [np.kron(a, b) for a in ops for b in local]
    return ops

def covariant_povm(psi, d):
    """ {(1/d) D|ψ⟩⟨ψ|D†} over the generalized Pauli displacements of d = p^N. """
    psi = mc.check_pure(psi)
    if len(psi) != d:
        raise ValidationError(f"state of dim {len(psi)} for a {d}-dim POVM")
    return [mc.projector(op @ psi) / d for op in displacement_operators(d)]

def measurement_information(mubs, povm):
    """
    Exact I(XT; K) between the label (x, t), uniform over strings and bases, and the
    outcome k of the POVM.
    """
    povm = mc.check_povm(povm)
    if povm[0].shape[0] != mubs.dim:
        raise ValidationError("POVM dimension does not match the bases")
    weight = 1 / (mubs.dim * len(mubs))
    rows = []
    for u in mubs.bases:
        for x in range(mubs.dim):
            v = u[:, x]
            rows.append([weight * np.vdot(v, m @ v).real for m in povm])
    joint = np.clip(np.array(rows), 0, None)
    return ent.mutual_information(joint / joint.sum())

def _check_family(mubs):
    if mubs.family.partition(":")[0] not in SUPPORTED_FAMILIES:
        raise ValidationError(f"unsupported basis family {mubs.family!r}")
    if mubs.dim > MAX_DIM:
        raise ValidationError(f"dimension {mubs.dim} exceeds {MAX_DIM}")

def entropy_lower_bound(mubs):
    """ Largest analytic lower bound on the average Shannon entropy of the set. """
    bounds = [unc.pairwise_bound(mubs)]
    if len(mubs) == mubs.dim + 1:
        bounds.append(unc.full_mub_collision_bound(mubs))
    return max(bounds)

def candidate_measurements(mubs, restarts=unc.DEFAULT_RESTARTS, seed=unc.DEFAULT_SEED):
    """ Named explicit measurements whose information lower-bounds the accessible one. """
    d = mubs.dim
    candidates = {f"basis:{t}": [mc.projector(u[:, k]) for k in range(d)]
                  for t, u in enumerate(mubs.bases)}
    candidates["computational"] = [mc.projector(mc.ket(k, d)) for k in range(d)]
    qubits = int(round(np.log2(d)))
    if 2 ** qubits == d and qubits % 2 == 0:
        candidates["bell-pairs"] = pistar.bell_pair_povm(qubits)
    if prime_power(d) is not None:
        minimum = unc.min_avg_shannon(mubs, restarts, seed)
        candidates["covariant"] = covariant_povm(minimum.minimizer, d)
    return candidates

def locking_accessible_info(mubs, restarts=unc.DEFAULT_RESTARTS, seed=unc.DEFAULT_SEED,
                            tol=LOCKING_TOL):
    """
    Sandwich the accessible information of the ensemble {U_t|x⟩}.

    :returns: dict with the certified upper bound, the best explicit lower bound, the
        measurement attaining it, and the value when both agree within tol
    """
    _check_family(mubs)
    log_d = np.log2(mubs.dim)
    upper = float(log_d - entropy_lower_bound(mubs))
    infos = {name: measurement_information(mubs, povm)
             for name, povm in candidate_measurements(mubs, restarts, seed).items()}
    best = max(sorted(infos), key=lambda name: infos[name])
    lower = float(infos[best])
    if lower > upper + tol:
        logger.warning(f"{mubs.family}: lower bound {lower:.6f} exceeds upper bound {upper:.6f}")
    tight = abs(upper - lower) <= tol
    logger.info(f"{mubs.family} with {len(mubs)} bases: {lower:.6f} <= Iacc <= {upper:.6f}")
    return {
        "family": mubs.family,
        "d": mubs.dim,
        "m": len(mubs),
        "upper": upper,
        "lower": lower,
        "measurement": best,
        "tight": tight,
        "value": upper if tight else None,
    }

def nonuniform_prior_gap(p_bases, n):
    """
    Measuring the likeliest of three bases yields max_t p_t·n bits, beating the n/2 of the
    uniform prior as soon as some p_t > ½.
    """
    p_bases = ent.check_dist(p_bases, "basis prior")
    if len(p_bases) != 3:
        raise ValidationError("the prior must cover exactly three bases")
    if n < 2 or n % 2:
        raise ValidationError(f"n must be even and positive, got {n}")
    lower = float(np.max(p_bases) * n)
    baseline = n / 2
    strict = bool(np.max(p_bases) > 0.5)
    if strict and not lower > baseline:
        raise ValidationError("single-basis bound fails to beat the baseline")
    return {"baseline": baseline, "lower": lower, "strict": strict}

def lockcom_params(n_unitaries, iacc_bound):
    """ (a, b) = (log₂|U|, accessible-information bound) of a locking-based commitment. """
    if n_unitaries < 1:
        raise ValidationError("at least one unitary is required")
    return float(np.log2(n_unitaries)), float(iacc_bound)

def qbsc_impossibility(n, a, b):
    """ An (n, a, b) string commitment is ruled out when a + b + c < n, c = 5 log₂5 − 4. """
    if min(n, a, b) < 0:
        raise ValidationError("commitment parameters must be non-negative")
    slack = a + b + QBSC_CONSTANT - n
    return {"possible": bool(slack >= 0), "slack": float(slack), "c": float(QBSC_CONSTANT)}

def qbsc_xi(cq, n):
    """ ξ = n − H₂(ρ_AB|ρ) of an ensemble over n-bit strings. """
    if len(cq.labels) != 2 ** n:
        raise ValidationError(f"{len(cq.labels)} labels for {n}-bit strings")
    return float(n - ent.quantum_collision_cond(cq))
