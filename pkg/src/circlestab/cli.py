"""Command-line front end: ``circlestab {analyze,check,suite}``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, replace

from . import __version__
from .errors import CircleStabError
from .fieldio import read_field
from .fixed_points import DEFAULT_CONFIG
from .scenario import read_scenario, run_scenario
from .stability import Verdict, stability_verdict
from .suites import SuiteConfig, run_density, run_openness

OUT_ENV = "CIRCLESTAB_OUT"
DEFAULT_OUT = "circlestab-out"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2, 3


def _add_detection_args(p):
    p.add_argument("--grid", type=int, default=None,
                   help=f"scan grid resolution, >= 256 (default {DEFAULT_CONFIG.grid_resolution}, "
                        "or the scenario's config line)")
    p.add_argument("--tol-zero", type=float, default=None,
                   help=f"|f| below this counts as zero (default {DEFAULT_CONFIG.tol_zero:g})")
    p.add_argument("--tol-deriv", type=float, default=None,
                   help=f"|f'| at a zero above this counts as hyperbolic (default {DEFAULT_CONFIG.tol_deriv:g})")


def _add_out_arg(p):
    p.add_argument("--out", default=None,
                   help=f"output directory (default ${OUT_ENV}, else ./{DEFAULT_OUT})")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="circlestab",
        description="Structural stability analysis of vector fields on the circle.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run every command of a scenario file and write reports",
                       description="Exit status: 0 when every command succeeds, 1 otherwise, "
                                   "2 on a scenario parse error.")
    a.add_argument("scenario", help="scenario file")
    _add_detection_args(a)
    _add_out_arg(a)

    c = sub.add_parser("check", help="print the stability verdict of a field file",
                       description="Exit status: 0 structurally stable, 1 not structurally stable, "
                                   "3 undecided, 2 on parse or numerical errors.")
    c.add_argument("field", help="field file")
    _add_detection_args(c)

    s = sub.add_parser("suite", help="run a randomised openness or density experiment",
                       description="Exit status: 0 when every trial passes, 1 otherwise.")
    s.add_argument("name", choices=("openness", "density"))
    s.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    s.add_argument("--trials", type=int, default=100, help="number of random fields (default 100)")
    s.add_argument("--eps", type=float, default=1e-3, help="density budget (default 1e-3)")
    _add_detection_args(s)
    _add_out_arg(s)
    return parser


def _config(args, base=DEFAULT_CONFIG):
    updates = {}
    if args.grid is not None:
        updates["grid_resolution"] = args.grid
    if args.tol_zero is not None:
        updates["tol_zero"] = args.tol_zero
    if args.tol_deriv is not None:
        updates["tol_deriv"] = args.tol_deriv
    return replace(base, **updates)


def _out_dir(args):
    return args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT


def cmd_analyze(args):
    try:
        sc = read_scenario(args.scenario)
        cfg = _config(args, sc.cfg)
    except (OSError, CircleStabError) as exc:
        print(f"{args.scenario}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = _out_dir(args)
    status = run_scenario(sc, out, cfg)
    with open(os.path.join(out, "summary.json"), encoding="utf-8") as fh:
        summary = json.load(fh)
    for item in summary["commands"]:
        line = f"{item['index']:02d} {item['command']} {' '.join(item['fields'])}: {item['status']}"
        if item["error"]:
            line += f" ({item['error']})"
        print(line)
    print(f"reports written to {out}")
    return status


def cmd_check(args):
    try:
        field = read_field(args.field)
        rep = stability_verdict(field, _config(args))
    except (OSError, CircleStabError) as exc:
        print(f"{args.field}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(rep.summary())
    if rep.verdict is Verdict.STABLE:
        return EXIT_OK
    return EXIT_UNDECIDED if rep.verdict is Verdict.UNDECIDED else EXIT_FAIL


def cmd_suite(args):
    sc = SuiteConfig(trials=args.trials, seed=args.seed, eps=args.eps)
    try:
        cfg = _config(args)
    except CircleStabError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    trials = run_openness(sc, cfg) if args.name == "openness" else run_density(sc, cfg)
    passed = sum(t.passed for t in trials)
    out = _out_dir(args)
    os.makedirs(out, exist_ok=True)
    rows = [dict(asdict(t), passed=t.passed) for t in trials]
    payload = {"suite": args.name, "seed": args.seed, "trials": rows, "passed": passed}
    path = os.path.join(out, f"suite_{args.name}_seed{args.seed}.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(f"{args.name}: {passed}/{len(trials)} trials passed; details in {path}")
    return EXIT_OK if passed == len(trials) else EXIT_FAIL


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"analyze": cmd_analyze, "check": cmd_check, "suite": cmd_suite}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
