"""Conflict analysis for pseudo-Boolean solving with reason reduction by
clausal extraction, saturation, division and mixed integer rounding.
"""

from .analysis import AnalysisResult, analyze, compute_backjump_level, is_asserting
from .bench import BenchRecord, run_suite, shifted_geo_mean, summarize
from .constraint import (
    LinearConstraint,
    PBConstraint,
    divide,
    is_falsified,
    mir,
    normalize,
    parse_constraint,
    propagated_literals,
    resolve,
    saturate,
    slack,
    weaken,
)
from .engine import Engine
from .opb import OpbParseError, OpbProblem, parse_opb, read_opb, write_opb
from .oracle import Oracle, implies, solve_exhaustive
from .reduction import ReductionStrategy, reduce
from .solver import SolveOutcome, Solver, SolverConfig, Statistics, solve

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "BenchRecord",
    "Engine",
    "LinearConstraint",
    "OpbParseError",
    "OpbProblem",
    "Oracle",
    "PBConstraint",
    "ReductionStrategy",
    "SolveOutcome",
    "Solver",
    "SolverConfig",
    "Statistics",
    "analyze",
    "compute_backjump_level",
    "divide",
    "implies",
    "is_asserting",
    "is_falsified",
    "mir",
    "normalize",
    "parse_constraint",
    "parse_opb",
    "propagated_literals",
    "read_opb",
    "reduce",
    "resolve",
    "run_suite",
    "saturate",
    "shifted_geo_mean",
    "slack",
    "solve",
    "solve_exhaustive",
    "summarize",
    "weaken",
    "write_opb",
]
