"""First-UIP conflict analysis by repeated reduce-and-resolve along the trail."""

from __future__ import annotations

from dataclasses import dataclass

from .constraint import PBConstraint, lit_value, resolve, saturate, slack, weaken
from .engine import Engine
from .reduction import CLAUSAL, ReductionStrategy, WeakeningCounter, reduce

ASSERTING = "asserting"
INFEASIBLE = "infeasible"


@dataclass
class AnalysisResult:
    learned: PBConstraint
    backjump_level: int
    outcome: str
    resolution_steps: int = 0
    literals_weakened: int = 0
    weakening_candidates: int = 0
    # None, "weakened" (shortened by weakening) or "clausal" (replaced by the clausal conflict)
    fallback: str | None = None


def _top_level(engine: Engine, end: int) -> int:
    return engine.level[abs(engine.trail[end - 1])] if end else 0


def _level_start(engine: Engine, level: int) -> int:
    """Trail position of the first assignment made at ``level`` (>= 1)."""
    return engine.trail_lim[level - 1]


def _propagates(c: PBConstraint, rho) -> bool:
    s = slack(c, rho)
    if s < 0:
        return False
    return any(a > s and lit_value(l, rho) is None for l, a in c.items)


def is_asserting(c: PBConstraint, engine: Engine, end: int | None = None) -> bool:
    """Would ``c`` propagate once the current decision level is removed?

    The current level is the level of the last of the first ``end`` trail
    entries.  At level 0 nothing can be removed, so the answer is False.
    """
    if end is None:
        end = len(engine.trail)
    top = _top_level(engine, end)
    if top == 0:
        return False
    return _propagates(c, engine.view(_level_start(engine, top)))


def compute_backjump_level(c: PBConstraint, engine: Engine, end: int | None = None) -> int:
    """Smallest level at which ``c`` is not falsified and propagates something."""
    if end is None:
        end = len(engine.trail)
    top = _top_level(engine, end)
    rho = engine.view(end)
    # (coef, level or None when free, falsified) per literal
    info = []
    for l, a in c.items:
        v = lit_value(l, rho)
        info.append((a, None if v is None else engine.level[abs(l)], v == 0))
    base = sum(a for a, _, _ in info) - c.degree
    for k in range(top):
        s = base
        best = 0
        for a, lev, falsified in info:
            if lev is not None and lev <= k:
                if falsified:
                    s -= a
            elif a > best:
                best = a
        if s >= 0 and best > s:
            return k
    raise ValueError(f"{c} is not asserting below level {top}")


def _fuip(engine, c, strategy, counter, debug):
    end = len(engine.trail)
    rho = engine.view(end)
    if strategy.kind == CLAUSAL:
        learn = PBConstraint([(l, 1) for l, _ in c.items if lit_value(l, rho) == 0], 1)
    else:
        learn = c
    steps = 0
    trail, reason, constraints = engine.trail, engine.reason, engine.constraints
    while True:
        if learn.is_contradiction():
            return learn, INFEASIBLE, end, steps
        if is_asserting(learn, engine, end):
            return learn, ASSERTING, end, steps
        if end == 0:
            raise AssertionError(f"analysis ran out of trail with {learn}")
        l_r = trail[end - 1]
        rid = reason[abs(l_r)]
        if rid >= 0 and -l_r in learn:
            rho = engine.view(end)
            reduced = reduce(strategy, constraints[rid], learn, l_r, rho, counter)
            learn = resolve(learn, reduced, l_r)
            if strategy.kind == CLAUSAL:
                # keep the resolvent a clause: merged duplicates would get coefficient 2
                learn = saturate(learn)
            steps += 1
            if debug and slack(learn, rho) >= 0:
                raise AssertionError(f"resolvent {learn} is not falsified after resolving on {l_r}")
        end -= 1


def _shorten(learn, engine, end, max_length):
    """Weaken smallest-coefficient non-falsified literals (saturating after each)
    until fewer than ``max_length`` remain, skipping any step that would stop
    the constraint from being asserting."""
    rho = engine.view(end)
    cands = sorted(
        ((a, abs(l), l) for l, a in learn.items if lit_value(l, rho) != 0),
    )
    cur = learn
    for _, _, l in cands:
        if len(cur) < max_length:
            break
        if l not in cur:
            continue
        trial = saturate(weaken(cur, l))
        if trial.degree > 0 and is_asserting(trial, engine, end):
            cur = trial
    return cur if len(cur) < max_length else None


def analyze(
    engine: Engine,
    conflict_id: int,
    strategy: ReductionStrategy,
    max_length: int | None = None,
    debug: bool = False,
) -> AnalysisResult:
    """Derive a learned constraint from the falsified constraint ``conflict_id``.

    Walks the trail backwards, reducing and resolving each reason whose
    propagated literal appears negated in the running constraint, until the
    constraint is asserting or falsified under the empty assignment.  The
    engine is not modified.

    ``max_length`` caps the number of literals of learned constraints from
    non-clausal strategies (accepted only when strictly shorter).  Longer ones
    are shortened by weakening, and if that fails the clausal conflict is
    learned instead.
    """
    c = engine.constraints[conflict_id]
    if slack(c, engine.view()) >= 0:
        raise ValueError(f"constraint {conflict_id} is not falsified: {c}")
    counter = WeakeningCounter()
    learn, outcome, end, steps = _fuip(engine, c, strategy, counter, debug)
    fallback = None
    if (
        outcome == ASSERTING
        and max_length is not None
        and strategy.kind != CLAUSAL
        and len(learn) >= max_length
    ):
        short = _shorten(learn, engine, end, max_length)
        if short is not None:
            learn, fallback = short, "weakened"
        else:
            clausal = ReductionStrategy(CLAUSAL)
            learn, outcome, end, more = _fuip(engine, c, clausal, WeakeningCounter(), debug)
            steps += more
            fallback = "clausal"
    level = 0 if outcome == INFEASIBLE else compute_backjump_level(learn, engine, end)
    return AnalysisResult(
        learned=learn,
        backjump_level=level,
        outcome=outcome,
        resolution_steps=steps,
        literals_weakened=counter.weakened,
        weakening_candidates=counter.candidates,
        fallback=fallback,
    )
