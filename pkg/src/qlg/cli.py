"""Command-line driver: sweeps, Table 1 / Fig. 1 data, oracle runs, thresholds.

Exit codes: 0 success, 1 property violation, 2 usage error, 3 domain
precondition failure.  CSV goes to --out (default stdout); diagnostics go to
stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from contextlib import contextmanager

import numpy as np

from .errors import DomainError
from .inefficiency import critical_eta, delta_q, ratio
from .lgmodel import LGScenario, tilde_c_q
from .macroreal import CERTIFY_TOL, run_oracle
from .wigner import MAX_TWICE_S, SpinLabel

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

TABLE1_QS = (1.0, 1.1, 1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.4, 3.0, 4.0, 6.0, 8.0, 10.0)
FIG1_QS = (1.0, 1.2, 1.5, 1.8, 2.4)
ORACLE_QS = (1.0, 1.5, 2.0, 3.0)


def _q_list(text: str) -> list[float]:
    items = [t.strip() for t in text.split(",")]
    return [float(t) for t in items if t]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--twice-spin", type=int, default=None,
                        help="2s for the spin (default 1, i.e. s=1/2)")
    common.add_argument("--n", type=int, default=None, help="number of measurements (default 3)")
    common.add_argument("--q", action="append", default=None,
                        help="entropic index; repeat the flag or give a comma list")
    common.add_argument("--theta", type=float, default=0.9,
                        help="total angle for table1/threshold (default 0.9 rad)")
    common.add_argument("--theta-min", type=float, default=0.0)
    common.add_argument("--theta-max", type=float, default=math.pi)
    common.add_argument("--theta-steps", type=int, default=512)
    common.add_argument("--degrees", action="store_true", help="angles are given in degrees")
    common.add_argument("--eta", type=float, default=0.99, help="detector efficiency")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--models", type=int, default=10_000)
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--precision", type=int, default=9, help="significant digits in CSV")

    parser = argparse.ArgumentParser(prog="qlg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("scan", parents=[common], help="tilde-C_q over a theta grid")
    sub.add_parser("table1", parents=[common], help="ratio r_q(eta) for a list of q")
    sub.add_parser("oracle", parents=[common], help="certify random macrorealist models")
    sub.add_parser("threshold", parents=[common], help="critical efficiency per q")
    return parser


def _validate(parser, args) -> None:
    defaults = {"scan": FIG1_QS, "table1": TABLE1_QS, "oracle": ORACLE_QS, "threshold": TABLE1_QS}
    if args.q is None:
        args.q = list(defaults[args.command])
    else:
        try:
            args.q = [q for text in args.q for q in _q_list(text)]
        except ValueError as exc:
            parser.error(f"--q: {exc}")
        if not args.q:
            parser.error("--q: empty list of entropic indices")
    if any(not (q > 0 and math.isfinite(q)) for q in args.q):
        parser.error("--q: entries must be positive")
    if args.twice_spin is not None and not 0 <= args.twice_spin <= MAX_TWICE_S:
        parser.error(f"--twice-spin: must lie in [0, {MAX_TWICE_S}]")
    if args.n is not None and args.n < 3:
        parser.error("--n: need at least 3 measurements")
    if args.degrees:
        args.theta = math.radians(args.theta)
        args.theta_min = math.radians(args.theta_min)
        args.theta_max = math.radians(args.theta_max)
    if not args.theta_min < args.theta_max:
        parser.error("--theta-min must be smaller than --theta-max")
    if args.theta_steps < 2:
        parser.error("--theta-steps: need at least 2 points")
    if not 0.0 <= args.eta <= 1.0:
        parser.error("--eta: must lie in [0, 1]")
    if args.models < 1:
        parser.error("--models: need at least one model")
    if not 3 <= args.precision <= 17:
        parser.error("--precision: must lie in [3, 17]")


def fmt(value: float, precision: int) -> str:
    return format(float(value) + 0.0, f".{precision}g")


@contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _spin(args) -> SpinLabel:
    return SpinLabel(1 if args.twice_spin is None else args.twice_spin)


def _n(args) -> int:
    return 3 if args.n is None else args.n


def cmd_scan(args, out) -> int:
    spin, n, p = _spin(args), _n(args), args.precision
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["theta", "q", "tilde_c_q"])
    for theta in np.linspace(args.theta_min, args.theta_max, args.theta_steps):
        scenario = LGScenario.equidistant(spin, n, float(theta))
        for q in args.q:
            writer.writerow([fmt(theta, p), fmt(q, p), fmt(tilde_c_q(scenario, q), p)])
    return EXIT_OK


def cmd_table1(args, out) -> int:
    scenario = LGScenario.equidistant(_spin(args), _n(args), args.theta)
    rows = [(q, ratio(scenario, args.eta, q)) for q in args.q]
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["q", "r_q"])
    for q, r in rows:
        writer.writerow([fmt(q, args.precision), fmt(r, args.precision)])
    return EXIT_OK


def cmd_threshold(args, out) -> int:
    scenario = LGScenario.equidistant(_spin(args), _n(args), args.theta)
    rows = []
    for q in args.q:
        delta = delta_q(scenario, args.eta, q)
        rows.append((q, critical_eta(scenario, q), ratio(scenario, args.eta, q),
                     int(np.sign(delta))))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["q", "critical_eta", "r_q", "delta_sign"])
    p = args.precision
    for q, eta_star, r, sign in rows:
        writer.writerow([fmt(q, p), fmt(eta_star, p), fmt(r, p), sign])
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    if any(q < 1 for q in args.q):
        print("warning: C_q <= 0 is only established for q >= 1; computing anyway",
              file=sys.stderr)
    ns = (3, 4, 5) if args.n is None else (args.n,)
    ds = (2, 3) if args.twice_spin is None else (args.twice_spin + 1,)
    if any(d < 2 for d in ds):
        print("qlg oracle: error: --twice-spin: need at least two outcomes", file=sys.stderr)
        return EXIT_USAGE
    result = run_oracle(args.models, seed=args.seed, qs=tuple(args.q), ns=ns, ds=ds)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["models", "evaluations", "max_c_q", "bound", "status"])
    writer.writerow([args.models, result.evaluations, fmt(result.max_c_q, args.precision),
                     fmt(CERTIFY_TOL, args.precision), "pass" if result.passed else "fail"])
    if not result.passed:
        seed, n, d, L, q = result.worst
        print(f"violation: seed={seed} n={n} d={d} L={L} q={q} C_q={result.max_c_q!r}",
              file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


COMMANDS = {"scan": cmd_scan, "table1": cmd_table1, "oracle": cmd_oracle, "threshold": cmd_threshold}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    buffer = io.StringIO()
    try:
        code = COMMANDS[args.command](args, buffer)
    except DomainError as exc:
        print(f"qlg {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    with _output(args.out) as out:
        out.write(buffer.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
