""" Command-line front end: one subcommand per family of results. """
import argparse
import csv
import io
import json
import logging
import sys

import numpy as np
import yaml

import qcrypt.games as games
import qcrypt.locking as locking
import qcrypt.mubclifford as mub
import qcrypt.noisyot as ot
import qcrypt.pistar as pistar
import qcrypt.suites as suites
import qcrypt.uncertainty as unc
from qcrypt.errors import ConvergenceError, ValidationError

JSON = "json"
CSV = "csv"
PRETTY = "pretty"
FORMATS = (JSON, CSV, PRETTY)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

def round_floats(doc, precision):
    """ Plain Python types with floats cut to the given number of significant digits. """
    if isinstance(doc, dict):
        return {str(k): round_floats(v, precision) for k, v in doc.items()}
    if isinstance(doc, (list, tuple)):
        return [round_floats(v, precision) for v in doc]
    if isinstance(doc, np.ndarray):
        return round_floats(doc.tolist(), precision)
    if isinstance(doc, (bool, np.bool_)):
        return bool(doc)
    if isinstance(doc, (int, np.integer)):
        return int(doc)
    if isinstance(doc, (float, np.floating)):
        return float(f"{float(doc):.{precision}g}")
    return doc

def csv_rows(doc):
    """ Rows for CSV output: the document's "rows" list if present, else the document itself. """
    rows = doc.get("rows") if isinstance(doc, dict) else doc
    if not isinstance(rows, list):
        rows = [doc]
    return [{k: v for k, v in row.items() if not isinstance(v, (dict, list))} for row in rows]

def render(doc, fmt):
    if fmt == JSON:
        return json.dumps(doc, indent=2, sort_keys=True)
    if fmt == PRETTY:
        return yaml.safe_dump(doc, sort_keys=True, allow_unicode=True).rstrip()
    rows = csv_rows(doc)
    out = io.StringIO()
    fields = sorted({k for row in rows for k in row})
    writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return out.getvalue().rstrip()

def build_parser():
    parser = argparse.ArgumentParser(prog="qcrypt", description="Quantum cryptography verification toolkit.")
    parser.add_argument("--seed", type=int, help="overrides the configured seed")
    parser.add_argument("--format", choices=FORMATS, help="output format")
    parser.add_argument("--output", help="write the result here instead of stdout")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("tsirelson", help="CHSH bound by SDP and certificate")

    p = sub.add_parser("chained-chsh", help="chained inequality with n settings")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("game", help="classical and quantum value of an XOR game")
    p.add_argument("--name", default="chsh", help="chsh, chained:<n>, gisin:<n> or a JSON file")

    p = sub.add_parser("mub", help="build a basis family and check mutual unbiasedness")
    p.add_argument("--family", required=True, help="standard:<n>, pauli:<d>, latin:<s>, product:<n>")
    p.add_argument("--vectors", action="store_true", help="include the basis vectors")

    p = sub.add_parser("uncertainty", help="entropic uncertainty bound against its numerical minimum")
    p.add_argument("--family", help="basis family for MUB relations")
    p.add_argument("--bases", type=int, help="use only the first m bases")
    p.add_argument("--clifford", action="store_true", help="anti-commuting observable relations")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--collision", action="store_true", help="collision instead of Shannon entropy")

    p = sub.add_parser("pistar", help="STAR and PI-STAR values of a hidden function")
    p.add_argument("--function", default="and", help="and, xor, bit:<i> or a JSON table")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--bases", type=int, default=2)
    p.add_argument("--prior", default=pistar.UNIFORM, choices=(pistar.UNIFORM, pistar.SKEWED_AND))

    p = sub.add_parser("locking", help="accessible information of a basis family")
    p.add_argument("--family", required=True)
    p.add_argument("--bases", type=int)

    p = sub.add_parser("qbsc", help="bit-string commitment impossibility")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)

    p = sub.add_parser("ot-tradeoff", help="security bound under depolarizing storage",
                       description="CSV columns: bound, delta_max, p_error, r, secure")
    p.add_argument("--r", type=float, nargs="+", required=True)
    p.add_argument("--p-error", type=float, nargs="+", default=[0.0])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--practical", action="store_true")
    p.add_argument("--p-erase", type=float, default=0.0)

    p = sub.add_parser("ot-sim", help="Monte-Carlo runs of the transfer protocol")
    p.add_argument("--trials", type=int)
    p.add_argument("--attack", default=ot.NONE, choices=(ot.NONE, ot.BREIDBART, ot.STORE))
    p.add_argument("--r", type=float, help="storage noise for the store attack")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--p-erase", type=float)
    p.add_argument("--p-error", type=float)
    p.add_argument("--code", default=ot.DEFAULT_CODE)

    p = sub.add_parser("rac-bound", help="dimension needed by a random access code")
    p.add_argument("--settings", type=int, required=True)
    p.add_argument("--outcomes", type=int, required=True)
    p.add_argument("--p", type=float, required=True)

    p = sub.add_parser("suites", help="list or run the acceptance suites",
                       description="CSV columns: anchor, budget, name, subcommand")
    p.add_argument("--run", nargs="*", help="run the named suites (all when empty)")
    return parser

class Qcrypt:
    def __init__(self, conf):
        """
        :param conf: merged configuration, see qcrypt.__main__.DEFAULTS
        """
        self.conf = conf
        self.seed = conf["seed"]
        self.logger = logging.getLogger("QCRYPT")

    def run(self, argv):
        """
        Parse, dispatch and print.

        :returns: exit code
        """
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as e:
            return EXIT_INVALID if e.code else EXIT_OK
        logging.getLogger().setLevel(logging.DEBUG if args.verbose else logging.INFO)
        if args.seed is not None:
            self.seed = args.seed
        fmt = args.format or self.conf["output"]["format"]
        try:
            doc = self.dispatch(args)
        except ValidationError as e:
            self.logger.error(f"invalid input: {e}")
            return EXIT_INVALID
        except ConvergenceError as e:
            self.logger.error(f"no convergence: {e}")
            return EXIT_NUMERICAL
        text = render(round_floats(doc, self.conf["output"]["precision"]), fmt)
        if args.output:
            with open(args.output, "w") as f:
                f.write(text + "\n")
        else:
            print(text)
        return EXIT_OK

    def dispatch(self, args):
        handler = getattr(self, "cmd_" + args.command.replace("-", "_"))
        self.logger.debug(f"running {args.command} with seed {self.seed}")
        return handler(args)

    @property
    def tol(self):
        return self.conf["sdp"]["tol"]

    def _family(self, name, bases):
        family = mub.build_family(name)
        if bases is not None:
            if not 1 <= bases <= len(family):
                raise ValidationError(f"{name} has {len(family)} bases, asked for {bases}")
            family = family.subset(range(bases))
        return family

    def cmd_tsirelson(self, args):
        return games.tsirelson(self.tol)

    def cmd_chained_chsh(self, args):
        if args.n < 2:
            raise ValidationError("the chained inequality needs n >= 2")
        return games.chained_chsh(args.n, self.tol)

    def cmd_game(self, args):
        value = games.solve_game(games.load_game(args.name), self.tol)
        xs, ys = value.quantum_vectors
        doc = value.to_dict()
        doc["single_prover"] = games.simulate_single_prover(value.game, xs, ys)
        return doc

    def cmd_mub(self, args):
        family = mub.build_family(args.family)
        passed, report = mub.check_mutually_unbiased(family)
        report["mutually_unbiased"] = passed
        if args.vectors:
            report["vectors"] = family.to_dict()["bases"]
        return report

    def cmd_uncertainty(self, args):
        restarts = self.conf["uncertainty"]["restarts"]
        tol = self.conf["uncertainty"]["tol"]
        if args.clifford:
            relation = unc.clifford_collision_relation if args.collision else unc.clifford_shannon_relation
            return relation(args.n, args.k, restarts, self.seed, tol).to_dict()
        if not args.family:
            raise ValidationError("either --family or --clifford is required")
        family = self._family(args.family, args.bases)
        relation = unc.min_avg_collision if args.collision else unc.min_avg_shannon
        return relation(family, restarts, self.seed, tol).to_dict()

    def cmd_pistar(self, args):
        e = pistar.build_ensemble(args.function, args.n, args.bases, args.prior)
        doc = pistar.ensemble_report(e, self.tol)
        if args.function == "and" and args.prior == pistar.SKEWED_AND:
            doc["pistar_closed_form"] = pistar.pistar_and_value(args.n)
            doc["star_closed_form"] = pistar.star_and_value(args.n)
        if args.function == "xor" and args.bases in (2, 3):
            closed = pistar.pistar_xor_value(args.n, args.bases, check=False)
            doc["pistar_closed_form"] = closed["pistar"]
            doc["star_closed_form"] = closed["star"]
        return doc

    def cmd_locking(self, args):
        family = self._family(args.family, args.bases)
        doc = locking.locking_accessible_info(family, self.conf["uncertainty"]["restarts"], self.seed)
        qubits = np.log2(family.dim)
        doc["n"] = int(qubits) if qubits == int(qubits) else None
        return doc

    def cmd_qbsc(self, args):
        return locking.qbsc_impossibility(args.n, args.a, args.b)

    def cmd_ot_tradeoff(self, args):
        m = args.n * (1 - args.p_erase) if args.practical else args.n
        if args.practical and not 0 <= args.p_erase < 1:
            raise ValidationError(f"p_erase must lie in [0, 1), got {args.p_erase}")
        rows = ot.tradeoff_rows(args.r, args.p_error, m, args.ell)
        return {"n": args.n, "m": m, "ell": args.ell, "rows": rows}

    def cmd_ot_sim(self, args):
        if args.p_erase is not None or args.p_error is not None:
            params = ot.PracticalParams(args.n, args.ell, args.p_erase or 0.0, args.p_error or 0.0,
                                        args.code, seed=self.seed)
        else:
            params = ot.RotParams(args.n, args.ell, seed=self.seed)
        attack = None if args.attack == ot.NONE else ot.StorageAttack(args.attack, args.r)
        trials = args.trials or self.conf["ot"]["trials"]
        return ot.simulate_rot(params, attack, trials)

    def cmd_rac_bound(self, args):
        return {"settings": args.settings, "outcomes": args.outcomes, "p": args.p,
                "log_dim": games.rac_dimension_bound(args.settings, args.outcomes, args.p)}

    def cmd_suites(self, args):
        if args.run is None:
            return {"rows": suites.list_suites()}
        runner = suites.SuiteRunner(self.seed, self.conf["uncertainty"]["restarts"])
        return {"rows": runner.run(args.run)}

def configure_logging():
    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT, stream=sys.stderr)
