""" Named acceptance suites, each reproducing one closed-form result, run against a time budget. """
import datetime
import logging

import numpy as np

import qcrypt.entropy as ent
import qcrypt.games as games
import qcrypt.locking as locking
import qcrypt.matcore as mc
import qcrypt.mubclifford as mub
import qcrypt.noisyot as ot
import qcrypt.pistar as pistar
import qcrypt.uncertainty as unc
from qcrypt.errors import ValidationError

SUITES = (
    # name, result reproduced, subcommand, budget in seconds
    ("tsirelson", "CHSH Tsirelson bound 2√2", "tsirelson", 1),
    ("chained-chsh", "chained inequality 2n cos(π/2n), n = 2..8", "chained-chsh", 5),
    ("chsh-game", "CHSH classical ¾ and quantum ½ + 1/(2√2)", "game", 2),
    ("helstrom", "two- and three-basis bit guessing", "pistar", 1),
    ("pistar-and", "PI-STAR for AND under the skewed prior, n = 1..3", "pistar", 30),
    ("xor-discrimination", "STAR and Bell-strategy PI-STAR for XOR", "pistar", 10),
    ("min-storage", "minimal storage q for two and three bases", "pistar", 10),
    ("uncertainty-mub", "MUB entropic relations at (log d)/2", "uncertainty", 60),
    ("uncertainty-clifford", "anti-commuting relations 1 − 1/K and 1 − log(1 + 1/K)", "uncertainty", 60),
    ("meta-uncertainty", "Σ Tr(ρΓ_j)² ≤ 1", "uncertainty", 5),
    ("locking", "accessible information n/2 and (log d)/2", "locking", 60),
    ("qbsc", "commitment constant 5 log 5 − 4 and ξ", "qbsc", 5),
    ("noisy-ot", "depolarizing Δ_max and the 0.029 crossover", "ot-tradeoff", 60),
    ("ot-simulation", "honest delivery of S_C", "ot-sim", 60),
    ("privacy-amplification", "hashed distance below 2^{ℓ/2−1}√P_g", "ot-tradeoff", 30),
)

class Stopwatch:
    """ Times one suite against its budget. """
    def __init__(self, name, budget):
        """
        :param name: name of the suite being timed
        :param budget: number of seconds the suite may take
        """
        self.name = name
        self.budget = datetime.timedelta(seconds=budget)
        self.started = None
        self.elapsed = datetime.timedelta(0)

    def start(self):
        self.started = datetime.datetime.now()

    def stop(self):
        self.elapsed = datetime.datetime.now() - self.started
        return self.elapsed

    @property
    def over_budget(self):
        return self.elapsed > self.budget

def list_suites():
    return [{"name": name, "anchor": anchor, "subcommand": command, "budget": budget}
            for name, anchor, command, budget in SUITES]

def _close(a, b, tol):
    return abs(a - b) <= tol

class SuiteRunner:
    """ Runs suites by name and reports pass/fail with timings. """
    def __init__(self, seed=unc.DEFAULT_SEED, restarts=16):
        self.seed = seed
        self.restarts = restarts
        self.logger = logging.getLogger("SUITES")

    def run(self, names=None):
        """
        :param names: suites to run, all of them by default
        :returns: one row {name, passed, elapsed, detail} per suite
        """
        known = {name: budget for name, _, _, budget in SUITES}
        names = list(known) if not names else names
        unknown = [name for name in names if name not in known]
        if unknown:
            raise ValidationError(f"unknown suites: {', '.join(unknown)}")
        rows = []
        for name in names:
            watch = Stopwatch(name, known[name])
            watch.start()
            passed, detail = getattr(self, "check_" + name.replace("-", "_"))()
            elapsed = watch.stop()
            if watch.over_budget:
                self.logger.warning(f"{name} took {elapsed.total_seconds():.1f}s, "
                                    f"budget {known[name]}s")
            self.logger.info(f"{name}: {'passed' if passed else 'FAILED'}")
            rows.append({"name": name, "passed": bool(passed),
                         "elapsed": round(elapsed.total_seconds(), 3), "detail": detail})
        return rows

    def check_tsirelson(self):
        result = games.tsirelson()
        target = 2 * np.sqrt(2)
        passed = (_close(result["value"], target, 1e-6) and result["certificate"] == "optimal"
                  and _close(result["certified_value"], target, 1e-6))
        return passed, {"value": result["value"]}

    def check_chained_chsh(self):
        values = {}
        passed = True
        for n in range(2, 9):
            result = games.chained_chsh(n)
            values[n] = result["correlation_bound"]
            passed &= _close(result["correlation_bound"], result["analytic"], 1e-5)
            passed &= result["certificate"] == "optimal"
        return passed, {"values": values}

    def check_chsh_game(self):
        value = games.solve_game(games.chsh_game())
        xs, ys = value.quantum_vectors
        simulated = games.simulate_single_prover(value.game, xs, ys)
        target = 0.5 + 1 / (2 * np.sqrt(2))
        passed = (_close(value.classical, 0.75, 1e-12) and _close(value.quantum, target, 1e-6)
                  and _close(simulated, target, 1e-6))
        return passed, {"classical": value.classical, "quantum": value.quantum}

    def check_helstrom(self):
        two = pistar.star_success(pistar.build_ensemble("bit:0", 1, 2))
        three = pistar.star_success(pistar.build_ensemble("bit:0", 1, 3))
        passed = (_close(two, 0.5 + 1 / (2 * np.sqrt(2)), 1e-9)
                  and _close(three, 0.5 + 1 / (2 * np.sqrt(3)), 1e-9))
        return passed, {"two_bases": two, "three_bases": three}

    def check_pistar_and(self):
        values = {}
        passed = True
        for n in (1, 2, 3):
            value, _ = pistar.pistar_success(pistar.build_ensemble("and", n, 2, pistar.SKEWED_AND))
            values[n] = value
            passed &= _close(value, pistar.pistar_and_value(n), 1e-5)
        return passed, {"values": values}

    def check_xor_discrimination(self):
        passed = True
        for n in (1, 2, 3):
            result = pistar.pistar_xor_value(n, 2)
            passed &= _close(result["star_check"], result["star"], 1e-9)
            if n % 2 == 0:
                passed &= _close(result["pistar_check"], 1.0, 1e-9)
        return passed, {}

    def check_min_storage(self):
        rng = np.random.default_rng(self.seed)
        qs = []
        for table in random_mixed_tables(10, rng):
            bases = mub.standard_bases(2).subset([0, 1])
            e = pistar.HiddenFunctionEnsemble(2, table, bases)
            qs.append(pistar.min_storage(e.projectors)[0])
        full, _ = pistar.min_storage(pistar.three_basis_projectors(2))
        return all(q == 1 for q in qs) and full == 2, {"two_bases": qs, "three_bases": full}

    def check_uncertainty_mub(self):
        results = [unc.min_avg_shannon(mub.product_mubs(mub.standard_bases(1)), self.restarts, self.seed)]
        latin = mub.build_family("latin:3")
        results.extend(unc.min_avg_shannon(latin.subset(range(m)), self.restarts, self.seed)
                       for m in (2, 3, 4))
        return all(r.tight for r in results), {"achieved": [r.achieved for r in results]}

    def check_uncertainty_clifford(self):
        results = []
        for n in (1, 2):
            for k in range(2, 2 * n + 2):
                results.append(unc.clifford_shannon_relation(n, k, self.restarts, self.seed))
                results.append(unc.clifford_collision_relation(n, k, self.restarts, self.seed))
        return all(r.tight for r in results), {"checked": len(results)}

    def check_meta_uncertainty(self):
        rng = np.random.default_rng(self.seed)
        worst = 0.0
        for n in (1, 2):
            g = mub.clifford_generators(n)
            for _ in range(1000):
                worst = max(worst, unc.meta_uncertainty_check(mc.random_density(2 ** n, rng), g))
        return worst <= 1 + 1e-9, {"worst": worst}

    def check_locking(self):
        three = locking.locking_accessible_info(mub.standard_bases(2), self.restarts, self.seed)
        latin = locking.locking_accessible_info(mub.build_family("latin:3"), self.restarts, self.seed)
        passed = (three["tight"] and _close(three["value"], 1.0, 1e-3)
                  and latin["tight"] and _close(latin["value"], np.log2(3), 1e-3))
        return passed, {"three_bases": three["value"], "latin": latin["value"]}

    def check_qbsc(self):
        verdict = locking.qbsc_impossibility(100, 1, 50)
        orthogonal = ent.CqState(range(4), np.full(4, 0.25),
                                 [mc.projector(mc.ket(x, 4)) for x in range(4)])
        xi = locking.qbsc_xi(orthogonal, 2)
        passed = _close(verdict["c"], 7.609640, 1e-6) and not verdict["possible"] and xi == 2
        return passed, {"c": verdict["c"], "xi": xi}

    def check_noisy_ot(self):
        gap = abs(ot.depolarizing_delta_max(ot.CROSSOVER_R) - ot.BREIDBART_VALUE)
        reports = [ot.verify_depolarizing_theorem(r) for r in (0, 0.3, ot.CROSSOVER_R, 0.9, 1)]
        crossover = ot.practical_crossover(ot.BREIDBART_VALUE)
        passed = (gap <= 1e-9 and all(r["within_bound"] and r["attained"] for r in reports)
                  and _close(crossover, 0.029, 0.002))
        return passed, {"crossover": crossover}

    def check_ot_simulation(self):
        noiseless = ot.simulate_rot(ot.RotParams(16, 1, seed=self.seed), trials=200)
        noisy = ot.simulate_rot(ot.PracticalParams(64, 1, 0.5, 0.02, seed=self.seed), trials=1000)
        passed = noiseless["correctness"] == 1.0 and noisy["correctness"] >= 0.99
        return passed, {"noiseless": noiseless["correctness"], "noisy": noisy["correctness"]}

    def check_privacy_amplification(self):
        cq = ot.bb84_cq(3)
        distance = ot.hashed_non_uniformity(cq, ot.AffineHashFamily(3, 1))
        bound = ot.pa_bound(1, 0, ot.guessing_probability(cq))
        return distance <= bound, {"distance": distance, "bound": bound}

def random_mixed_tables(count, rng):
    """ Boolean tables on two bits other than the constant, XOR and XNOR ones. """
    excluded = {(0, 0, 0, 0), (1, 1, 1, 1), (0, 1, 1, 0), (1, 0, 0, 1)}
    tables = [t for t in np.ndindex(2, 2, 2, 2) if t not in excluded]
    return [list(tables[i]) for i in rng.choice(len(tables), size=count)]
