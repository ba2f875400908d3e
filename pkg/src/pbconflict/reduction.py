"""Reason reduction: make a reason constraint strong enough that resolving it
with a falsified constraint stays falsified.

Every strategy weakens non-falsified literals of the reason (other than the
literal being resolved on) and then applies one cut: none for the clausal
extraction, saturation, division, or MIR with the resolved literal's
coefficient as divisor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .constraint import (
    PBConstraint,
    divide,
    lit_value,
    mir,
    resolve,
    saturate,
    slack,
    weaken,
    weaken_all,
)

CLAUSAL = "clausal"
SATURATION = "saturation"
DIVISION = "division"
MIR = "mir"
KINDS = (CLAUSAL, SATURATION, DIVISION, MIR)

ITERATIVE = "iterative"
ALL_AT_ONCE = "all-at-once"
WEAKENING_POLICIES = (ITERATIVE, ALL_AT_ONCE)


@dataclass(frozen=True)
class ReductionStrategy:
    kind: str
    weakening: str = ALL_AT_ONCE

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown reduction kind {self.kind!r}; expected one of {KINDS}")
        if self.weakening not in WEAKENING_POLICIES:
            raise ValueError(f"unknown weakening policy {self.weakening!r}")


class WeakeningCounter:
    """Accumulates weakened literals over candidate (true or free) literals."""

    def __init__(self):
        self.weakened = 0
        self.candidates = 0

    @property
    def fraction(self):
        return self.weakened / self.candidates if self.candidates else None


def _candidates(r: PBConstraint, l_r: int, rho: Mapping[int, int], only=None):
    """Non-falsified literals of ``r`` except ``l_r``: free ones first, then true ones,
    each group in ascending variable order."""
    free, true = [], []
    for l, a in r.items:
        if l == l_r or (only is not None and not only(a)):
            continue
        v = lit_value(l, rho)
        if v is None:
            free.append(l)
        elif v == 1:
            true.append(l)
    return free + true


def _count_candidates(r, l_r, rho, counter):
    if counter is not None:
        counter.candidates += len(_candidates(r, l_r, rho))


def _check_propagates(r: PBConstraint, l_r: int):
    if l_r not in r:
        raise ValueError(f"reason {r} does not contain the propagated literal {l_r}")


def reduce_clausal(r: PBConstraint, l_r: int, rho: Mapping[int, int], counter=None) -> PBConstraint:
    """The clause ``l_r + sum of r's falsified literals >= 1``."""
    _check_propagates(r, l_r)
    _count_candidates(r, l_r, rho, counter)
    lits = [l_r] + [l for l, _ in r.items if l != l_r and lit_value(l, rho) == 0]
    if counter is not None:
        counter.weakened += len(_candidates(r, l_r, rho))
    return PBConstraint([(l, 1) for l in lits], 1)


def reduce_saturation(r, c, l_r, rho, weakening=ALL_AT_ONCE, counter=None) -> PBConstraint:
    """Weaken non-falsified literals and saturate until the resolvent with ``c`` is falsified."""
    _check_propagates(r, l_r)
    cands = _candidates(r, l_r, rho)
    if counter is not None:
        counter.candidates += len(cands)
    if weakening == ALL_AT_ONCE:
        if counter is not None:
            counter.weakened += len(cands)
        return saturate(weaken_all(r, cands))
    cur = r
    it = iter(cands)
    while slack(resolve(c, cur, l_r), rho) >= 0:
        l = next(it, None)
        if l is None:
            # nothing left to weaken, but the reason may still be unsaturated
            sat = saturate(cur)
            if sat == cur:
                raise AssertionError(f"saturation reduction of {r} failed against {c}")
            cur = sat
            continue
        cur = saturate(weaken(cur, l))
        if counter is not None:
            counter.weakened += 1
    return cur


def _reduce_by_cut(cut, r, c, l_r, rho, weakening, counter):
    _check_propagates(r, l_r)
    d = r.coef(l_r)
    # only literals whose coefficient is not a multiple of d need weakening
    w = _candidates(r, l_r, rho, only=lambda a: a % d != 0)
    _count_candidates(r, l_r, rho, counter)
    if weakening == ALL_AT_ONCE:
        if counter is not None:
            counter.weakened += len(w)
        return cut(weaken_all(r, w), d)
    cur = r
    k = 0
    while True:
        reduced = cut(cur, d)
        if slack(resolve(c, reduced, l_r), rho) < 0:
            return reduced
        if k == len(w):
            raise AssertionError(f"{cut.__name__} reduction of {r} failed against {c}")
        cur = weaken(cur, w[k])
        k += 1
        if counter is not None:
            counter.weakened += 1


def reduce_division(r, c, l_r, rho, weakening=ALL_AT_ONCE, counter=None) -> PBConstraint:
    return _reduce_by_cut(divide, r, c, l_r, rho, weakening, counter)


def reduce_mir(r, c, l_r, rho, weakening=ALL_AT_ONCE, counter=None) -> PBConstraint:
    return _reduce_by_cut(mir, r, c, l_r, rho, weakening, counter)


def reduce(strategy: ReductionStrategy, r, c, l_r, rho, counter=None) -> PBConstraint:
    if strategy.kind == CLAUSAL:
        return reduce_clausal(r, l_r, rho, counter)
    if strategy.kind == SATURATION:
        return reduce_saturation(r, c, l_r, rho, strategy.weakening, counter)
    if strategy.kind == DIVISION:
        return reduce_division(r, c, l_r, rho, strategy.weakening, counter)
    return reduce_mir(r, c, l_r, rho, strategy.weakening, counter)
