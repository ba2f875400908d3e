"""Benchmark harness: run strategies over permuted instances and aggregate.

An *instance* here is a model plus a permutation seed.  Seed 0 is the model
as given; any other seed shuffles the constraint order and renames the
variables.  Aggregates follow the MIP convention of shifted geometric means
(shift 1 for seconds, 100 for nodes) with quotients against the ``none``
baseline, reported over three subsets: all instances, the *affected* ones
and the ones every strategy solved.

The affected subset is a proxy: an instance counts as affected when the
strategies disagree on status or node count.
"""

from __future__ import annotations

import argparse
import json
import random
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from .constraint import LinearConstraint, negate, var_of
from .opb import OpbProblem, read_opb
from .solver import ANALYSES, NONE, SAT, UNSAT, Solver, SolverConfig

OPTIMUM = "OPTIMUM"
TIME_SHIFT = 1.0
NODE_SHIFT = 100.0


def shifted_geo_mean(values, shift: float) -> float:
    """``(prod(v + shift)) ** (1/n) - shift`` for nonnegative ``values``."""
    values = list(values)
    if not values:
        raise ValueError("shifted geometric mean of an empty list")
    if not shift > 0:
        raise ValueError(f"shift must be positive, got {shift}")
    if any(v < 0 for v in values):
        raise ValueError("values must be nonnegative")
    return statistics.geometric_mean([v + shift for v in values]) - shift


@dataclass(frozen=True)
class BenchRecord:
    instance_name: str
    permutation_seed: int
    strategy: str
    status: str
    nodes: int
    conflicts: int
    time_seconds: float
    learned_propagating_fraction: float
    mean_learned_length: float

    @property
    def key(self):
        return (self.instance_name, self.permutation_seed, self.strategy)

    @property
    def solved(self) -> bool:
        return self.status in (SAT, UNSAT, OPTIMUM)

    _CAMEL = {
        "instance_name": "instanceName",
        "permutation_seed": "permutationSeed",
        "strategy": "strategy",
        "status": "status",
        "nodes": "nodes",
        "conflicts": "conflicts",
        "time_seconds": "timeSeconds",
        "learned_propagating_fraction": "learnedPropagatingFraction",
        "mean_learned_length": "meanLearnedLength",
    }

    def to_dict(self) -> dict:
        return {self._CAMEL[k]: v for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, d):
        back = {v: k for k, v in cls._CAMEL.items()}
        return cls(**{back[k]: v for k, v in d.items()})


def permute(problem: OpbProblem, seed: int) -> OpbProblem:
    """Shuffle constraint order and rename variables; seed 0 returns the problem unchanged."""
    if seed == 0:
        return problem
    rng = random.Random(seed)
    n = problem.variable_count
    order = list(range(1, n + 1))
    rng.shuffle(order)
    rename = dict(zip(range(1, n + 1), order))

    def ren(l):
        v = rename[var_of(l)]
        return v if l > 0 else negate(v)

    cons = [LinearConstraint(tuple((a, ren(l)) for a, l in c.terms), c.relation, c.rhs) for c in problem.constraints]
    rng.shuffle(cons)
    obj = None if problem.objective is None else [(a, ren(l)) for a, l in problem.objective]
    return OpbProblem(cons, obj, problem.num_vars, problem.num_constraints)


def run_one(name, problem: OpbProblem, seed: int, strategy: str, conflict_limit=None, time_limit=None, **config):
    """Solve one (instance, seed, strategy) combination and return its record."""
    p = permute(problem, seed)
    cfg = SolverConfig(analysis=strategy, conflict_limit=conflict_limit, time_limit=time_limit, **config)
    try:
        res = Solver(p.normalized(), num_vars=p.variable_count, objective=p.objective, config=cfg, original=p.constraints).solve()
    except Exception:
        # a crashing run is recorded, never propagated
        return BenchRecord(name, seed, strategy, "UNKNOWN", 0, 0, 0.0, 0.0, 0.0)
    status = res.status
    if p.objective is not None and status == SAT:
        status = OPTIMUM if res.optimal else "UNKNOWN"
    st = res.stats
    return BenchRecord(
        name, seed, strategy, status, st.nodes, st.conflicts, st.wall_time, st.propagating_fraction, st.mean_learned_length
    )


def _run_task(task):
    name, problem, seed, strategy, kwargs = task
    return run_one(name, problem, seed, strategy, **kwargs)


def run_suite(instances, strategies, seeds, workers=1, **kwargs):
    """Run every (instance, seed, strategy); ``instances`` maps names to problems.

    Records come back sorted by instance name, then seed, then the position
    of the strategy in ``strategies``, whatever the worker count.
    """
    if isinstance(instances, dict):
        instances = list(instances.items())
    for s in strategies:
        if s not in ANALYSES:
            raise ValueError(f"unknown strategy {s!r}")
    tasks = [(name, prob, seed, s, kwargs) for name, prob in instances for seed in seeds for s in strategies]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_task, tasks, chunksize=4))
    else:
        records = [_run_task(t) for t in tasks]
    rank = {s: i for i, s in enumerate(strategies)}
    return sorted(records, key=lambda r: (r.instance_name, r.permutation_seed, rank[r.strategy]))


def _group(records):
    by_inst = {}
    for r in records:
        by_inst.setdefault((r.instance_name, r.permutation_seed), {})[r.strategy] = r
    return by_inst


def _quot(x, base):
    if base == 0:
        return 1.0 if x == 0 else None
    return x / base


def summarize(records, baseline=NONE):
    """Per-subset, per-strategy aggregates.

    Returns ``{subset: {strategy: row}}`` where a row holds ``instances``,
    ``solved``, ``time``, ``nodes`` (shifted geometric means) and the
    quotients ``timeQuot`` and ``nodesQuot`` against ``baseline`` (None when
    the baseline was not run).
    """
    by_inst = _group(records)
    strategies = []
    for r in records:
        if r.strategy not in strategies:
            strategies.append(r.strategy)
    subsets = {
        "all": list(by_inst),
        "affected": [k for k, g in by_inst.items() if len({(r.status, r.nodes) for r in g.values()}) > 1],
        "all-optimal": [k for k, g in by_inst.items() if all(r.solved for r in g.values())],
    }
    out = {}
    for name, keys in subsets.items():
        rows = {}
        for s in strategies:
            recs = [by_inst[k][s] for k in keys if s in by_inst[k]]
            row = {"instances": len(recs), "solved": sum(r.solved for r in recs)}
            if recs:
                row["time"] = shifted_geo_mean([r.time_seconds for r in recs], TIME_SHIFT)
                row["nodes"] = shifted_geo_mean([r.nodes for r in recs], NODE_SHIFT)
            else:
                row["time"] = row["nodes"] = None
            rows[s] = row
        base = rows.get(baseline)
        for row in rows.values():
            ok = base is not None and base["time"] is not None and row["time"] is not None
            row["timeQuot"] = _quot(row["time"], base["time"]) if ok else None
            row["nodesQuot"] = _quot(row["nodes"], base["nodes"]) if ok else None
        out[name] = rows
    return out


def _fmt(x, fmt):
    return "-" if x is None else format(x, fmt)


def render_table(summary) -> str:
    lines = []
    header = f"{'subset':<12} {'strategy':<11} {'inst':>5} {'solved':>6} {'time':>9} {'quot':>6} {'nodes':>10} {'quot':>6}"
    lines.append(header)
    lines.append("-" * len(header))
    for subset, rows in summary.items():
        label = "affected*" if subset == "affected" else subset
        for s, row in rows.items():
            lines.append(
                f"{label:<12} {s:<11} {row['instances']:>5} {row['solved']:>6} "
                f"{_fmt(row['time'], '9.4f')} {_fmt(row['timeQuot'], '6.2f')} "
                f"{_fmt(row['nodes'], '10.1f')} {_fmt(row['nodesQuot'], '6.2f')}"
            )
    lines.append("* affected: status or node count differs between strategies (a proxy)")
    return "\n".join(lines)


def write_jsonl(records, path):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r.to_dict(), sort_keys=True) + "\n")


def read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        return [BenchRecord.from_dict(json.loads(line)) for line in fh if line.strip()]


def load_opb_dir(path):
    """``[(name, problem)]`` for every ``*.opb`` file in a directory, sorted by name."""
    files = sorted(Path(path).glob("*.opb"))
    return [(f.stem, read_opb(f)) for f in files]


def main(argv=None):
    ap = argparse.ArgumentParser(prog="pbconflict-bench", description="Run strategies over a directory of OPB files.")
    ap.add_argument("directory")
    ap.add_argument("--strategies", default=",".join(ANALYSES), help="comma-separated analysis settings")
    ap.add_argument("--seeds", type=int, default=1, help="permutation seeds 0..N-1")
    ap.add_argument("--conflict-limit", type=int)
    ap.add_argument("--time-limit", type=float)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--records", help="write line-delimited JSON records here")
    args = ap.parse_args(argv)
    instances = load_opb_dir(args.directory)
    if not instances:
        print(f"no .opb files in {args.directory}", file=sys.stderr)
        return 1
    strategies = args.strategies.split(",")
    records = run_suite(
        instances,
        strategies,
        range(args.seeds),
        workers=args.workers,
        conflict_limit=args.conflict_limit,
        time_limit=args.time_limit,
    )
    if args.records:
        write_jsonl(records, args.records)
    print(render_table(summarize(records)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
