""" Tests the noisy-storage transfer bounds, hashing, codes and the protocol simulation. """
import logging

import numpy as np
import pytest

import qcrypt.entropy as ent
import qcrypt.matcore as mc
import qcrypt.noisyot as ot
from qcrypt.errors import DecodingError, ValidationError

import tests.conftest as helpers

def test_bb84_states():
    """ The four BB84 vectors and the Breidbart basis. """
    assert np.allclose(ot.bb84_vector(1, 0), mc.ket(1, 2))
    assert np.allclose(ot.bb84_vector(0, 1), np.array([1, 1]) / np.sqrt(2))
    u = ot.breidbart_basis()
    assert np.allclose(u.conj().T @ u, np.eye(2))
    cq = ot.bb84_cq(2)
    assert len(cq.labels) == 4 and cq.dim == 4

def test_guessing_probability():
    """ One hidden-basis qubit is guessed at ½ + √2/4, two at its square. """
    assert ot.guessing_probability(ot.bb84_cq(1)) == pytest.approx(ot.BREIDBART_VALUE)
    assert ot.guessing_probability(ot.bb84_cq(2)) == pytest.approx(ot.BREIDBART_VALUE ** 2, abs=1e-5)

def test_channel_delta():
    """ Perfect storage gives Δ = 1, depolarizing (1 + r)/2, Breidbart ½ + √2/4. """
    assert ot.channel_delta(mc.identity_channel(2)) == pytest.approx(1)
    assert ot.channel_delta(mc.depolarizing_channel(0.6)) == pytest.approx(0.8)
    assert ot.channel_delta(mc.measure_channel(ot.breidbart_basis())) == pytest.approx(ot.BREIDBART_VALUE)
    with pytest.raises(ValidationError):
        ot.channel_delta(mc.identity_channel(4))

def test_guessing_product():
    """ Product attacks multiply the per-qubit guessing probabilities. """
    assert ot.guessing_product([mc.identity_channel(2)] * 2, 0) == pytest.approx(1)
    assert ot.guessing_product([mc.depolarizing_channel(0.5)] * 2, 1) == pytest.approx(0.5625)
    with pytest.raises(ValidationError):
        ot.guessing_product([], 0)

def test_delta_max():
    """ Breidbart below r = 1/√2, (1 + r)/2 above, continuous at the crossover. """
    assert ot.depolarizing_delta_max(0.3) == pytest.approx(ot.BREIDBART_VALUE)
    assert ot.depolarizing_delta_max(1) == 1
    assert ot.depolarizing_delta_max(0.9) == pytest.approx(0.95)
    below = ot.depolarizing_delta_max(ot.CROSSOVER_R - 1e-9)
    above = ot.depolarizing_delta_max(ot.CROSSOVER_R + 1e-9)
    assert below == pytest.approx(above, abs=1e-8)
    with pytest.raises(ValidationError):
        ot.depolarizing_delta_max(1.5)

def test_symmetric_attack_limits():
    """ α = ½ stores the qubit untouched; α = 0 at θ = π/4 is the Breidbart measurement. """
    assert ot.channel_delta(ot.symmetric_attack(0.5, 0.3, 0.9)) == pytest.approx(0.95)
    assert ot.channel_delta(ot.symmetric_attack(0.0, np.pi / 4, 0.2)) == pytest.approx(ot.BREIDBART_VALUE)
    assert ot.symmetric_attack(0.3, 0.1, 0.5).out_dim == 8
    with pytest.raises(ValidationError):
        ot.symmetric_attack(0.9, 0, 0.5)

@pytest.mark.parametrize("r", [0, 0.3, ot.CROSSOVER_R, 0.9, 1])
def test_depolarizing_theorem(r):
    """ No symmetric attack beats the closed form, and the closed form is reached. """
    report = ot.verify_depolarizing_theorem(r, grid=ot.MIN_GRID)
    assert report["within_bound"]
    assert report["attained"]
    assert report["closed_form"] == pytest.approx(ot.depolarizing_delta_max(r))

def test_depolarizing_theorem_grid(caplog):
    """ Grids below the minimum are refused; coarse grids are accepted with a warning. """
    with pytest.raises(ValidationError):
        ot.verify_depolarizing_theorem(0.5, grid=10)
    with caplog.at_level(logging.WARNING, logger="NOISYOT"):
        ot.verify_depolarizing_theorem(0.5, grid=ot.MIN_GRID)
    assert any(r.name == "NOISYOT" and r.levelno == logging.WARNING for r in caplog.records)
    assert "below the recommended" in caplog.text

def test_perfect_bound():
    """ Δ = 1 leaves only the 2^{ℓ/2 − 1} prefactor; smaller Δ decays with n. """
    assert ot.security_bound_perfect(100, 2, 1.0) == pytest.approx(1)
    assert ot.security_bound_perfect(200, 1, 0.9) < ot.security_bound_perfect(100, 1, 0.9)
    with pytest.raises(ValidationError):
        ot.security_bound_perfect(10, 1, 0)

def test_practical_crossover():
    """ With Breidbart-limited storage up to about 2.9% bit errors are tolerated. """
    p = ot.practical_crossover(ot.BREIDBART_VALUE)
    assert p == pytest.approx(0.029, abs=0.002)
    assert ot.security_rate(p, ot.BREIDBART_VALUE) == pytest.approx(0, abs=1e-9)
    assert ot.practical_crossover(1e-6) == 0.5
    with pytest.raises(ValidationError):
        ot.practical_crossover(1.0)

def test_practical_bound():
    """ Without errors the practical bound is the perfect one. """
    assert ot.security_bound_practical(100, 1, 0.0, 0.9) == pytest.approx(ot.security_bound_perfect(100, 1, 0.9))
    with pytest.raises(ValidationError):
        ot.security_bound_practical(100, 1, 0.6, 0.9)

def test_tradeoff_rows():
    """ One row per (r, p_error) pair; strong noise and few errors are secure. """
    rows = ot.tradeoff_rows([0.5, 0.9], [0.0, 0.1], 500, 1)
    assert len(rows) == 4
    by_key = {(row["r"], row["p_error"]): row for row in rows}
    assert by_key[(0.9, 0.0)]["secure"]
    assert not by_key[(0.9, 0.1)]["secure"]
    assert by_key[(0.5, 0.0)]["delta_max"] == pytest.approx(ot.BREIDBART_VALUE)

def test_privacy_amplification_bounds():
    """ Closed forms of the hashing bounds. """
    assert ot.pa_bound(1, 0, 1.0) == pytest.approx(1 / np.sqrt(2))
    assert ot.pa_bound(1, 2, 0.25) == pytest.approx(np.sqrt(2) / 2)
    assert ot.hashing_distance_bound(3.0, 3) == pytest.approx(0.5)
    with pytest.raises(ValidationError):
        ot.pa_bound(1, 0, 0)

def test_affine_family_two_universal():
    """ Collisions happen with probability 2^{−ℓ}, checked against full enumeration. """
    family = ot.AffineHashFamily(2, 1)
    functions = list(family.enumerate())
    assert len(functions) == family.size == 8
    for x, y in ((0, 1), (1, 2), (0, 3)):
        collisions = np.mean([f.apply_int(x) == f.apply_int(y) for f in functions])
        assert collisions == pytest.approx(family.collision_probability(x, y))
        assert collisions == pytest.approx(0.5)
    assert ot.AffineHashFamily(3, 2).worst_collision() == pytest.approx(0.25)
    assert family.collision_probability(2, 2) == 1

def test_hash_sampling():
    """ Sampling is reproducible from the seed. """
    family = ot.AffineHashFamily(6, 2)
    a, b = ot.sample_hash(family, 5), ot.sample_hash(family, 5)
    assert np.array_equal(a.a, b.a) and np.array_equal(a.c, b.c)
    assert 0 <= a.apply_int(37) < 4
    with pytest.raises(ValidationError):
        list(ot.AffineHashFamily(16, 1).enumerate())
    with pytest.raises(ValidationError):
        ot.AffineHashFamily(0, 1)

def test_non_uniformity():
    """ Known strings are ½ away from uniform; strings independent of E are uniform. """
    assert ot.non_uniformity(helpers.orthogonal_cq(1), 1) == pytest.approx(0.5)
    assert ot.non_uniformity(helpers.identical_cq(2, np.eye(2) / 2), 2) == pytest.approx(0)
    with pytest.raises(ValidationError):
        ot.non_uniformity(helpers.orthogonal_cq(2), 1)

def test_leftover_hashing():
    """ Hashing BB84 strings lands within ½·2^{−½(H₂ − ℓ)} of uniform. """
    cq = ot.bb84_cq(2)
    family = ot.AffineHashFamily(2, 1)
    distance = ot.hashed_non_uniformity(cq, family)
    assert distance <= ot.hashing_distance_bound(ent.quantum_collision_cond(cq), 1) + 1e-9
    # only the two constant functions leave a bias, of ½ each
    assert ot.hashed_non_uniformity(helpers.identical_cq(2, np.eye(2) / 2), family) == pytest.approx(0.125)

def test_privacy_amplification_three_qubits():
    """ One hashed bit of a 3-qubit BB84 string stays within 2^{ℓ/2−1}√P_g of uniform. """
    cq = ot.bb84_cq(3)
    p_guess = ot.guessing_probability(cq)
    assert p_guess == pytest.approx(ot.BREIDBART_VALUE ** 3, abs=1e-5)
    distance = ot.hashed_non_uniformity(cq, ot.AffineHashFamily(3, 1))
    assert 0 <= distance <= ot.pa_bound(1, 0, p_guess)

def test_gf2_rank():
    """ Rank over GF(2) differs from the real rank. """
    assert ot.gf2_rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2
    assert ot.gf2_rank(np.eye(3)) == 3

@pytest.mark.parametrize("name, length, rows, radius", [
    ("hamming:3", 7, 3, 1),
    ("ext-hamming:3", 8, 4, 1),
    ("repetition:3", 3, 2, 1),
    ("repetition:5", 5, 4, 2),
])
def test_codes(name, length, rows, radius):
    """ Presets have the expected shape and correction radius. """
    code = ot.build_code(name)
    assert (code.length, code.rows, code.radius) == (length, rows, radius)
    assert len(code.leaders) == 2 ** rows

def test_code_errors():
    """ Rank-deficient checks and unknown presets are rejected. """
    with pytest.raises(ValidationError):
        ot.LinearCode([[1, 1], [1, 1]])
    with pytest.raises(ValidationError):
        ot.build_code("golay:23")
    with pytest.raises(ValidationError):
        ot.build_code("hamming:x")
    with pytest.raises(ValidationError):
        ot.hamming_code(1)

def test_syndrome_roundtrip(rng):
    """ Single flips are corrected by the Hamming code; two flips are beyond it. """
    code = ot.hamming_code(3)
    x = rng.integers(0, 2, size=7, dtype=np.uint8)
    for k in range(7):
        error = np.zeros(7, dtype=np.uint8)
        error[k] = 1
        assert np.array_equal(ot.syndrome_roundtrip(code, x, error), x)
    with pytest.raises(DecodingError):
        ot.syndrome_roundtrip(code, x, np.array([1, 1, 0, 0, 0, 0, 0]))
    with pytest.raises(ValidationError):
        ot.syndrome_roundtrip(code, x[:5], np.zeros(5))

def test_reconcile(rng):
    """ One flip per block is undone blockwise, including a padded final block. """
    code = ot.hamming_code(2)
    x = rng.integers(0, 2, size=10, dtype=np.uint8)
    syndromes = ot.block_syndromes(code, x)
    assert len(syndromes) == 4
    noisy = x.copy()
    for k in (0, 4, 8):
        noisy[k] ^= 1
    assert np.array_equal(ot.reconcile(code, noisy, syndromes), x)
    with pytest.raises(ValidationError):
        ot.reconcile(code, noisy, syndromes[:2])

def test_params_validation():
    """ Out-of-range probabilities and oversize codes are rejected. """
    with pytest.raises(ValidationError):
        ot.RotParams(0, 1)
    with pytest.raises(ValidationError):
        ot.PracticalParams(64, 1, 0.5, 0.6)
    with pytest.raises(ValidationError):
        ot.PracticalParams(64, 1, 1.0, 0.01)
    with pytest.raises(ValidationError):
        ot.PracticalParams(4, 1, 0.1, 0.01, "hamming:3")
    params = ot.PracticalParams(64, 1, 0.5, 0.02)
    assert params.abort_threshold() == pytest.approx(0)
    assert params.practical and not ot.RotParams(8, 1).practical
    assert params.to_dict()["code"] == ot.DEFAULT_CODE

def test_storage_attacks():
    """ Per-qubit success of the two attacks and their parameter checks. """
    store = ot.StorageAttack(ot.STORE, 0.6)
    assert store.correct_probability(1, 1) == pytest.approx(0.8)
    assert store.delta() == pytest.approx(0.8)
    breidbart = ot.StorageAttack(ot.BREIDBART)
    for bit in (0, 1):
        for basis in (0, 1):
            assert breidbart.correct_probability(bit, basis) == pytest.approx(ot.BREIDBART_VALUE)
    with pytest.raises(ValidationError):
        ot.StorageAttack(ot.STORE)
    with pytest.raises(ValidationError):
        ot.StorageAttack("laser")

def test_honest_noiseless():
    """ Without noise an honest receiver always gets the chosen string. """
    report = ot.simulate_rot(ot.RotParams(16, 2, seed=3), trials=50)
    assert report["correctness"] == 1
    assert report["aborts"] == 0
    assert report["failures"] == 0
    assert report["attack"] == ot.NONE

def test_honest_practical():
    """ With erasures and 2% errors, syndrome reconciliation keeps deliveries reliable. """
    params = ot.PracticalParams(64, 1, 0.5, 0.02, "hamming:2", seed=11)
    report = ot.simulate_rot(params, trials=1000)
    assert report["abort_rate"] < 0.05
    assert report["correctness"] >= 0.99
    completed = report["trials"] - report["aborts"]
    assert report["failures"] == completed - round(report["correctness"] * completed)

def test_dishonest_store():
    """ Perfect storage reveals everything and stays inside the Δ = 1 envelope. """
    report = ot.simulate_rot(ot.RotParams(4, 1), ot.StorageAttack(ot.STORE, 1.0), trials=100)
    assert report["guess_rate"] == 1
    assert report["delta_sec"] == pytest.approx(1 / np.sqrt(2))
    assert report["within_envelope"]

def test_dishonest_breidbart():
    """ Measuring at once leaves the cheater inside the proven envelope. """
    report = ot.simulate_rot(ot.RotParams(16, 1), ot.StorageAttack(ot.BREIDBART), trials=200)
    assert report["within_envelope"]
    assert report["advantage"] <= report["delta_sec"] + 0.11

def test_simulation_limits():
    """ Trial counts and adversarial sizes are bounded. """
    with pytest.raises(ValidationError):
        ot.simulate_rot(ot.RotParams(4, 1), trials=0)
    with pytest.raises(ValidationError):
        ot.simulate_rot(ot.RotParams(30, 1), ot.StorageAttack(ot.BREIDBART), trials=1)
