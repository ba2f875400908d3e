"""Conflict-driven search: decide, propagate, analyze, learn, backjump.

Optimization runs as a linear search: each model found adds the constraint
``objective <= value - 1`` and the search resumes from level 0 until the
strengthened problem is unsatisfiable.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .analysis import INFEASIBLE, analyze
from .constraint import LE, PBConstraint, normalize, objective_value, var_of
from .engine import FLIPPED, Engine
from .reduction import ALL_AT_ONCE, KINDS, WEAKENING_POLICIES, ReductionStrategy

NONE = "none"
ANALYSES = (NONE,) + KINDS
ACTIVITY, FIXED = "activity", "fixed"

SAT, UNSAT, UNKNOWN = "SAT", "UNSAT", "UNKNOWN"

ACTIVITY_DECAY = 0.95


@dataclass
class SolverConfig:
    """Search settings.

    ``analysis`` is ``"none"`` (chronological backtracking, no learning) or a
    reduction kind.  ``max_conflict_length_fraction`` caps learned
    constraints of the non-clausal strategies at fewer than
    ``ceil(fraction * num_vars)`` literals.  A nonzero ``seed`` adds a small
    seeded jitter to the initial activities.
    """

    analysis: str = "mir"
    weakening: str = ALL_AT_ONCE
    max_conflict_length_fraction: Fraction | float = Fraction(3, 20)
    conflict_limit: int | None = None
    node_limit: int | None = None
    time_limit: float | None = None
    seed: int = 0
    heuristic: str = ACTIVITY
    restarts: bool = False
    restart_interval: int = 100
    max_learned: int | None = None
    debug: bool = False

    def __post_init__(self):
        if self.analysis not in ANALYSES:
            raise ValueError(f"unknown analysis {self.analysis!r}; expected one of {ANALYSES}")
        if self.weakening not in WEAKENING_POLICIES:
            raise ValueError(f"unknown weakening policy {self.weakening!r}")
        if self.heuristic not in (ACTIVITY, FIXED):
            raise ValueError(f"unknown decision heuristic {self.heuristic!r}")
        frac = Fraction(self.max_conflict_length_fraction)
        if isinstance(self.max_conflict_length_fraction, float):
            frac = frac.limit_denominator(10**6)
        if not 0 < frac <= 1:
            raise ValueError(f"max_conflict_length_fraction must be in (0, 1], got {frac}")
        self.max_conflict_length_fraction = frac
        for name in ("conflict_limit", "node_limit", "time_limit", "max_learned"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be nonnegative, got {v}")
        if self.restart_interval < 1:
            raise ValueError("restart_interval must be >= 1")

    @property
    def strategy(self) -> ReductionStrategy | None:
        if self.analysis == NONE:
            return None
        return ReductionStrategy(self.analysis, self.weakening)

    def max_length(self, num_vars: int) -> int:
        return math.ceil(self.max_conflict_length_fraction * num_vars)


@dataclass
class Statistics:
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0
    learned_count: int = 0
    learned_propagated_at_least_once: int = 0
    mean_learned_length: float = 0.0
    weakened_fraction: float | None = None
    wall_time: float = 0.0
    restarts: int = 0
    fallbacks: int = 0
    solutions: int = 0

    @property
    def nodes(self) -> int:
        """Decisions plus conflicts: the stand-in for search-tree nodes."""
        return self.decisions + self.conflicts

    @property
    def propagating_fraction(self) -> float:
        if not self.learned_count:
            return 0.0
        return self.learned_propagated_at_least_once / self.learned_count

    def to_dict(self) -> dict:
        return {
            "decisions": self.decisions,
            "conflicts": self.conflicts,
            "propagations": self.propagations,
            "learnedCount": self.learned_count,
            "learnedPropagatedAtLeastOnce": self.learned_propagated_at_least_once,
            "meanLearnedLength": self.mean_learned_length,
            "weakenedFraction": self.weakened_fraction,
            "wallTime": self.wall_time,
            "nodes": self.nodes,
            "restarts": self.restarts,
            "fallbacks": self.fallbacks,
            "solutions": self.solutions,
        }


@dataclass
class SolveOutcome:
    status: str
    model: dict | None = None
    stats: Statistics = field(default_factory=Statistics)
    objective_value: int | None = None
    optimal: bool = False


def luby(i: int) -> int:
    """The i-th element (0-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class Solver:
    """One search over a fixed formula.

    ``formula`` is a list of normalized constraints; ``objective`` an optional
    list of signed ``(coef, lit)`` terms to minimize.  ``original`` may hold
    the un-normalized input constraints, against which every model is
    re-checked.  ``on_solution(model, value)`` is called for each improving
    model during optimization.
    """

    def __init__(self, formula, num_vars=None, objective=None, config=None, original=None, on_solution=None):
        self.config = config or SolverConfig()
        self.formula = list(formula)
        self.objective = list(objective) if objective is not None else None
        self.original = original
        self.on_solution = on_solution
        if num_vars is None:
            num_vars = max(
                [var_of(l) for c in self.formula for l, _ in c.items]
                + [var_of(l) for _, l in (self.objective or ())]
                + [0]
            )
        self.num_vars = num_vars
        self.engine = Engine(num_vars)
        self.stats = Statistics()
        self.learned = []
        self.refutation = None
        self.activity = [0.0] * (num_vars + 1)
        self.phase = [0] * (num_vars + 1)
        if self.config.seed:
            rng = random.Random(self.config.seed)
            for v in range(1, num_vars + 1):
                self.activity[v] = rng.random() * 1e-6
        self._inc = 1.0
        self._learned_ids = []
        self._fresh = []
        self._baseline = {}
        self._last_prop = {}
        self._weaken_fractions = []
        self._learned_lengths = 0
        self._propagated_deleted = 0
        for c in self.formula:
            if not c.is_tautology():
                self.engine.add_constraint(c, c.origin or "input")
        if self.config.max_learned is not None:
            self.engine.on_propagate = self._touch

    def _touch(self, cid):
        self._last_prop[cid] = self.stats.conflicts

    def _save_phase(self, l):
        self.phase[abs(l)] = 1 if l > 0 else 0

    def _bump(self, c: PBConstraint):
        act = self.activity
        for l, _ in c.items:
            act[abs(l)] += self._inc
        self._inc /= ACTIVITY_DECAY
        if self._inc > 1e100:
            for v in range(len(act)):
                act[v] *= 1e-100
            self._inc *= 1e-100

    def decide_literal(self) -> int:
        e = self.engine
        value = e.value
        if self.config.heuristic == FIXED:
            for v in range(1, self.num_vars + 1):
                if value[v] < 0:
                    return -v
            raise ValueError("no free variable to decide on")
        best, best_act = 0, -1.0
        act = self.activity
        for v in range(1, self.num_vars + 1):
            if value[v] < 0 and act[v] > best_act:
                best, best_act = v, act[v]
        if not best:
            raise ValueError("no free variable to decide on")
        return best if self.phase[best] else -best

    def decide(self) -> int:
        l = self.decide_literal()
        self.engine.decide(l)
        self.stats.decisions += 1
        return l

    def _out_of_budget(self, start):
        cfg = self.config
        st = self.stats
        if cfg.conflict_limit is not None and st.conflicts > cfg.conflict_limit:
            return True
        if cfg.node_limit is not None and st.nodes >= cfg.node_limit:
            return True
        if cfg.time_limit is not None and time.perf_counter() - start > cfg.time_limit:
            return True
        return False

    def _learn(self, c: PBConstraint):
        cid = self.engine.add_constraint(c, "learned")
        self.learned.append(self.engine.constraints[cid])
        self._learned_ids.append(cid)
        self._fresh.append(cid)
        self._learned_lengths += len(c)
        self.stats.learned_count += 1
        if self.config.max_learned is not None:
            self._last_prop[cid] = self.stats.conflicts
            if len(self._learned_ids) > self.config.max_learned:
                self._reduce_db()

    def _reduce_db(self):
        e = self.engine
        cands = [cid for cid in self._learned_ids if not e.is_locked(cid) and cid not in self._fresh]
        cands.sort(key=lambda cid: (self._last_prop.get(cid, -1), cid))
        drop = set(cands[: len(cands) // 2])
        for cid in drop:
            if e.prop_count[cid] > self._baseline.get(cid, 0):
                self._propagated_deleted += 1
            e.remove_constraint(cid)
        self._learned_ids = [cid for cid in self._learned_ids if cid not in drop]

    def _verify(self, model):
        for c in self.formula:
            if not c.is_satisfied(model):
                raise RuntimeError(f"model violates input constraint {c}")
        for c in self.original or ():
            if not c.is_satisfied(model):
                raise RuntimeError(f"model violates original constraint {c}")

    def _finish(self, status, start, best, best_value, optimal=False):
        st = self.stats
        st.propagations = self.engine.propagations
        st.wall_time = time.perf_counter() - start
        st.mean_learned_length = self._learned_lengths / st.learned_count if st.learned_count else 0.0
        e = self.engine
        st.learned_propagated_at_least_once = self._propagated_deleted + sum(
            1 for cid in self._learned_ids if e.prop_count[cid] > self._baseline.get(cid, e.prop_count[cid])
        )
        if self._weaken_fractions:
            st.weakened_fraction = sum(self._weaken_fractions) / len(self._weaken_fractions)
        if best is not None and status == UNSAT:
            # the strengthened problem is infeasible: the incumbent is optimal
            return SolveOutcome(SAT, best, st, best_value, optimal=True)
        if best is not None and status == UNKNOWN:
            return SolveOutcome(SAT, best, st, best_value)
        if status == SAT:
            return SolveOutcome(SAT, best, st, best_value)
        return SolveOutcome(status, None, st)

    def solve(self) -> SolveOutcome:
        start = time.perf_counter()
        cfg = self.config
        e = self.engine
        strategy = cfg.strategy
        max_length = cfg.max_length(self.num_vars) if strategy is not None else None
        best, best_value = None, None
        since_restart, restart_idx = 0, 0
        while True:
            conflict = e.propagate()
            if self._fresh:
                for cid in self._fresh:
                    self._baseline[cid] = e.prop_count[cid]
                self._fresh.clear()
            if conflict is not None:
                self.stats.conflicts += 1
                if cfg.debug:
                    e.check_invariants()
                if strategy is None:
                    if e.decision_level == 0:
                        return self._finish(UNSAT, start, best, best_value)
                    if self._out_of_budget(start):
                        return self._finish(UNKNOWN, start, best, best_value)
                    dec = e.trail[e.trail_lim[-1]]
                    e.backjump_to(e.decision_level - 1, self._save_phase)
                    e.assign(-dec, FLIPPED)
                    continue
                res = analyze(e, conflict, strategy, max_length, cfg.debug)
                if res.weakening_candidates:
                    self._weaken_fractions.append(res.literals_weakened / res.weakening_candidates)
                if res.fallback:
                    self.stats.fallbacks += 1
                if res.outcome == INFEASIBLE:
                    self.refutation = res.learned
                    return self._finish(UNSAT, start, best, best_value)
                if self._out_of_budget(start):
                    return self._finish(UNKNOWN, start, best, best_value)
                e.backjump_to(res.backjump_level, self._save_phase)
                self._learn(res.learned)
                self._bump(res.learned)
                since_restart += 1
                if cfg.restarts and since_restart >= cfg.restart_interval * luby(restart_idx):
                    since_restart = 0
                    restart_idx += 1
                    self.stats.restarts += 1
                    e.backjump_to(0, self._save_phase)
                continue
            if cfg.debug:
                e.check_invariants(fixpoint=True)
            if len(e.trail) == self.num_vars:
                model = e.assignment()
                self._verify(model)
                self.stats.solutions += 1
                if self.objective is None:
                    return self._finish(SAT, start, model, None)
                value = objective_value(self.objective, model)
                best, best_value = model, value
                if self.on_solution is not None:
                    self.on_solution(model, value)
                bound = normalize(self.objective, LE, value - 1)
                e.backjump_to(0, self._save_phase)
                for c in bound:
                    e.add_constraint(c, "bound")
                continue
            if self._out_of_budget(start):
                return self._finish(UNKNOWN, start, best, best_value)
            self.decide()


def solve(formula, objective=None, config: SolverConfig | None = None, **kwargs) -> SolveOutcome:
    """Solve a list of normalized constraints; keyword arguments go to :class:`Solver`."""
    return Solver(formula, objective=objective, config=config, **kwargs).solve()
