"""Command-line front end: solve an OPB file and print competition-style output.

Exit codes: 10 satisfiable, 20 unsatisfiable, 30 optimum found, 0 unknown,
1 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .opb import OpbParseError, read_opb
from .reduction import ALL_AT_ONCE, ITERATIVE
from .solver import ACTIVITY, ANALYSES, FIXED, SAT, UNSAT, Solver, SolverConfig

EXIT_SAT, EXIT_UNSAT, EXIT_OPTIMUM, EXIT_UNKNOWN, EXIT_ERROR = 10, 20, 30, 0, 1


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fraction(text):
    try:
        f = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0 < f <= 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1], got {text}")
    return f


def _nonneg(conv):
    def parse(text):
        try:
            v = conv(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}")
        if v < 0:
            raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
        return v

    return parse


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pbconflict", description="Conflict-driven pseudo-Boolean solver for OPB files.")
    p.add_argument("file", help="OPB input file")
    p.add_argument("--analysis", choices=ANALYSES, default="mir")
    p.add_argument("--weakening", choices=(ITERATIVE, ALL_AT_ONCE), default=ALL_AT_ONCE)
    p.add_argument("--max-length-frac", type=_fraction, default=Fraction(3, 20), metavar="F")
    p.add_argument("--conflict-limit", type=_nonneg(int), metavar="N")
    p.add_argument("--node-limit", type=_nonneg(int), metavar="N")
    p.add_argument("--time-limit", type=_nonneg(float), metavar="S")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--heuristic", choices=(ACTIVITY, FIXED), default=ACTIVITY)
    p.add_argument("--stats-json", metavar="PATH")
    return p


def _model_line(model):
    return " ".join(["v"] + [f"x{v}" if model[v] else f"-x{v}" for v in sorted(model)])


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as e:
        print(f"pbconflict: error: {e}", file=err)
        return EXIT_ERROR
    try:
        problem = read_opb(args.file)
    except OSError as e:
        print(f"pbconflict: cannot read {args.file}: {e.strerror or e}", file=err)
        return EXIT_ERROR
    except OpbParseError as e:
        print(f"pbconflict: {args.file}: {e}", file=err)
        return EXIT_ERROR
    except UnicodeDecodeError:
        print(f"pbconflict: {args.file}: not a text file", file=err)
        return EXIT_ERROR

    config = SolverConfig(
        analysis=args.analysis,
        weakening=args.weakening,
        max_conflict_length_fraction=args.max_length_frac,
        conflict_limit=args.conflict_limit,
        node_limit=args.node_limit,
        time_limit=args.time_limit,
        seed=args.seed,
        heuristic=args.heuristic,
    )

    def report(model, value):
        print(f"o {value}", file=out)

    solver = Solver(
        problem.normalized(),
        num_vars=problem.variable_count,
        objective=problem.objective,
        config=config,
        original=problem.constraints,
        on_solution=report,
    )
    result = solver.solve()

    if result.status == SAT and result.optimal:
        print("s OPTIMUM FOUND", file=out)
        code = EXIT_OPTIMUM
    elif result.status == SAT:
        print("s SATISFIABLE", file=out)
        code = EXIT_SAT
    elif result.status == UNSAT:
        print("s UNSATISFIABLE", file=out)
        code = EXIT_UNSAT
    else:
        print("s UNKNOWN", file=out)
        code = EXIT_UNKNOWN
    if result.model is not None:
        print(_model_line(result.model), file=out)

    if args.stats_json:
        payload = result.stats.to_dict()
        payload["status"] = result.status
        payload["optimal"] = result.optimal
        payload["objectiveValue"] = result.objective_value
        try:
            with open(args.stats_json, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
        except OSError as e:
            print(f"pbconflict: cannot write {args.stats_json}: {e.strerror or e}", file=err)
            return EXIT_ERROR
    return code


if __name__ == "__main__":
    sys.exit(main())
