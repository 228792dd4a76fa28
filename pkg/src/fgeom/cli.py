"""Command-line front end: scenario runs and the one-shot reproduction."""

from __future__ import annotations

import argparse
import sys

from .battery import reproduce_paper
from .errors import FGeomError
from .scenario import load_scenario, run_scenario


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fgeom",
        description=(
            "Numerical verification of framed metric f-structures, their "
            "submanifold geometry and warped-product bounds."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument(
            "--samples", type=int, default=None, help="sample points per check (default 64)"
        )
        p.add_argument("--seed", type=int, default=None, help="RNG seed (default 42)")
        p.add_argument(
            "--tol-alg",
            type=float,
            default=None,
            help="tolerance for algebraic residuals (default 1e-9)",
        )
        p.add_argument(
            "--tol-curv",
            type=float,
            default=None,
            help="tolerance for curvature/derivative residuals (default 1e-7)",
        )
        p.add_argument(
            "--report", metavar="PATH", default=None, help="write the full report here"
        )
        p.add_argument(
            "--quiet", action="store_true", help="suppress the per-check summary"
        )

    run_p = sub.add_parser("run", help="run the checks declared in a scenario file")
    run_p.add_argument("scenario", help="path to a YAML scenario file")
    add_common(run_p)

    rp = sub.add_parser(
        "reproduce-paper", help="run the full built-in verification battery"
    )
    add_common(rp)
    return parser


def _emit(report, args):
    text = report.render()
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    if not args.quiet:
        for line in report.human_lines():
            print(line)
    return 0 if report.passed else 1


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            sc = load_scenario(args.scenario)
            report = run_scenario(
                sc,
                samples=args.samples,
                seed=args.seed,
                tol_alg=args.tol_alg,
                tol_curv=args.tol_curv,
            )
        else:
            report = reproduce_paper(
                samples=64 if args.samples is None else args.samples,
                seed=42 if args.seed is None else args.seed,
                tol_alg=1e-9 if args.tol_alg is None else args.tol_alg,
                tol_curv=1e-7 if args.tol_curv is None else args.tol_curv,
            )
    except (FGeomError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return _emit(report, args)


if __name__ == "__main__":
    raise SystemExit(main())
