"""Exhaustive ground truth: enumerate every 0-1 point of a small formula."""

from __future__ import annotations

import numpy as np

from .constraint import PBConstraint, var_of

DEFAULT_MAX_VARS = 20
_CHUNK_BITS = 16


class TooManyVariables(ValueError):
    pass


def _num_vars(constraints):
    return max((var_of(l) for c in constraints for l, _ in c.items), default=0)


def _points(n, lo, hi):
    """Rows ``lo..hi-1`` of the lexicographic enumeration of {0,1}^n, x1 most significant."""
    idx = np.arange(lo, hi, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.int8)


def _dtype_for(c: PBConstraint):
    # int64 is exact as long as no partial sum can exceed 2**62
    return np.int64 if c.coef_sum + c.degree < 2**62 else object


def satisfied(c: PBConstraint, points) -> np.ndarray:
    """Boolean mask of the rows of ``points`` (columns x1..xn) that satisfy ``c``."""
    dt = _dtype_for(c)
    const = 0
    cols, weights = [], []
    for l, a in c.items:
        cols.append(var_of(l) - 1)
        if l > 0:
            weights.append(a)
        else:
            # a * (1 - x)
            const += a
            weights.append(-a)
    if not cols:
        return np.full(len(points), const >= c.degree)
    sub = points[:, cols].astype(dt)
    lhs = sub @ np.array(weights, dtype=dt)
    return lhs + const >= c.degree


def _check_bound(n, max_vars):
    if n > max_vars:
        raise TooManyVariables(f"{n} variables exceed the oracle bound of {max_vars}")


def _chunks(n):
    total = 1 << n
    step = 1 << min(n, _CHUNK_BITS)
    for lo in range(0, total, step):
        yield lo, _points(n, lo, min(total, lo + step))


def solve_exhaustive(formula, num_vars=None, max_vars=DEFAULT_MAX_VARS):
    """Lexicographically smallest model as ``{var: 0/1}``, or None when unsatisfiable."""
    formula = list(formula)
    n = _num_vars(formula) if num_vars is None else num_vars
    _check_bound(n, max_vars)
    for lo, pts in _chunks(n):
        mask = np.ones(len(pts), dtype=bool)
        for c in formula:
            mask &= satisfied(c, pts)
            if not mask.any():
                break
        hit = np.flatnonzero(mask)
        if len(hit):
            row = pts[hit[0]]
            return {v + 1: int(row[v]) for v in range(n)}
    return None


def implies(formula, d: PBConstraint, num_vars=None, max_vars=DEFAULT_MAX_VARS) -> bool:
    """True iff every 0-1 point satisfying all of ``formula`` satisfies ``d``."""
    return Oracle(formula, num_vars, max_vars).implies(d)


def count_models(formula, num_vars=None, max_vars=DEFAULT_MAX_VARS) -> int:
    return Oracle(formula, num_vars, max_vars).count


class Oracle:
    """Caches the solution set of a formula for repeated implication checks.

    Variables mentioned by later queries but not by the formula are treated
    as free, so ``num_vars`` should cover both.
    """

    def __init__(self, formula, num_vars=None, max_vars=DEFAULT_MAX_VARS):
        formula = list(formula)
        n = _num_vars(formula) if num_vars is None else num_vars
        _check_bound(n, max_vars)
        self.num_vars = n
        self.max_vars = max_vars
        self.points = _points(n, 0, 1 << n)
        mask = np.ones(len(self.points), dtype=bool)
        for c in formula:
            mask &= satisfied(c, self.points)
        self.models = self.points[mask]

    @property
    def count(self) -> int:
        return len(self.models)

    @property
    def satisfiable(self) -> bool:
        return len(self.models) > 0

    def implies(self, d: PBConstraint) -> bool:
        if _num_vars([d]) > self.num_vars:
            # d mentions a variable the formula leaves free: widen the enumeration
            n = _num_vars([d])
            _check_bound(n, self.max_vars)
            extra = n - self.num_vars
            ext = _points(extra, 0, 1 << extra)
            models = np.repeat(self.models, len(ext), axis=0)
            models = np.hstack([models, np.tile(ext, (len(self.models), 1))])
            return bool(satisfied(d, models).all())
        if not len(self.models):
            return True
        return bool(satisfied(d, self.models).all())
