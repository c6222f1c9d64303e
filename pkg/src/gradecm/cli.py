"""Command-line entry point: run DSL scripts or the example corpus and emit
JSON reports.

Exit codes: 0 all checks passed, 1 some comparison failed, 2 error.
"""

import argparse
import json
import sys

from .corpus import run_corpus
from .dsl import Session, parse_dsl
from .errors import GradecmError

SCHEMA = "gradecm-report/1"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gradecm",
        description="Exact grade/height computations and Cohen-Macaulay "
                    "sense checks over finitely presented algebras.")
    parser.add_argument("--input", metavar="FILE",
                        help="DSL script to execute ('-' for stdin)")
    parser.add_argument("--json", metavar="OUT", dest="json_out",
                        help="write the JSON report to this file")
    parser.add_argument("--corpus", action="store_true",
                        help="run the example corpus")
    parser.add_argument("--select", metavar="IDS",
                        help="comma list of corpus item ids")
    parser.add_argument("--budget", type=int, default=10**6, metavar="N",
                        help="reduction-step budget per engine run")
    parser.add_argument("--nmax", type=int, default=4, metavar="N",
                        help="truncation level for hgrade")
    parser.add_argument("--degree-bound", type=int, default=2, metavar="D",
                        help="degree bound for generated families")
    parser.add_argument("--workers", type=int, default=1, metavar="K",
                        help="corpus worker processes")
    return parser


def _emit(report, json_out):
    text = json.dumps(report, indent=2, sort_keys=True)
    if json_out:
        with open(json_out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.corpus and not args.input:
        parser.error("nothing to do: pass --input FILE or --corpus")
    try:
        if args.corpus:
            selection = None
            if args.select:
                selection = {s.strip() for s in args.select.split(",")}
            report = run_corpus(selection, workers=args.workers,
                                budget_steps=args.budget, n_max=args.nmax)
            _emit(report, args.json_out)
            return 0 if report["summary"]["failed"] == 0 else 1
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input) as fh:
                text = fh.read()
        session = Session(budget_steps=args.budget, n_max=args.nmax,
                          degree_bound=args.degree_bound,
                          workers=args.workers)
        parse_dsl(text, session)
        report = {
            "schema": SCHEMA,
            "results": session.results,
            "bindings": sorted(session.bindings),
        }
        _emit(report, args.json_out)
        return 0
    except GradecmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
