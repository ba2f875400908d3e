"""Instance families: uniform random PB, pigeonhole, and random 3-SAT written as PB."""

from __future__ import annotations

import math
import random

from .constraint import GE, LE, LinearConstraint, PBConstraint, normalize


def random_pb(num_vars, num_constraints, rng: random.Random, max_coef=20, max_len=8):
    """Random normalized constraints over ``num_vars`` variables.

    Each constraint picks 3..max_len distinct variables with random polarity.
    Coefficients are mostly small (1..5) with an occasional one up to
    ``max_coef``, and the degree is 25-40% of the coefficient sum; at 16
    variables and 32 constraints that lands near an even SAT/UNSAT split.
    """
    small = min(5, max_coef)
    out = []
    for _ in range(num_constraints):
        k = rng.randint(min(3, num_vars), min(max_len, num_vars))
        vs = rng.sample(range(1, num_vars + 1), k)
        terms = []
        for v in vs:
            a = rng.randint(1, small) if rng.random() < 0.8 else rng.randint(1, max_coef)
            terms.append((v if rng.random() < 0.5 else -v, a))
        total = sum(a for _, a in terms)
        degree = max(1, math.ceil(total * rng.uniform(0.25, 0.4)))
        out.append(PBConstraint(terms, degree))
    return out


def random_instance(rng: random.Random, max_vars=16, max_constraints=32, max_coef=20):
    """A random formula; returns ``(constraints, num_vars)`` with 2..max_vars variables."""
    n = rng.randint(2, max_vars)
    m = rng.randint(max(1, n // 2), max_constraints)
    return random_pb(n, m, rng, max_coef=max_coef), n


def php_var(pigeon, hole, holes):
    """Variable index of "pigeon sits in hole" (both 1-based)."""
    return (pigeon - 1) * holes + hole


def pigeonhole(pigeons, holes=None):
    """PHP(pigeons, holes): each pigeon in some hole, each hole holding at most one pigeon.

    The at-most-one side is a single cardinality constraint per hole, which
    normalizes to ``sum_i ~p_ij >= pigeons - 1``.
    """
    if holes is None:
        holes = pigeons - 1
    out = []
    for i in range(1, pigeons + 1):
        out += normalize([(1, php_var(i, j, holes)) for j in range(1, holes + 1)], GE, 1)
    for j in range(1, holes + 1):
        out += normalize([(1, php_var(i, j, holes)) for i in range(1, pigeons + 1)], LE, 1)
    return out


def pigeonhole_raw(pigeons, holes=None):
    """The same pigeonhole formula as un-normalized linear constraints."""
    if holes is None:
        holes = pigeons - 1
    out = []
    for i in range(1, pigeons + 1):
        out.append(LinearConstraint(tuple((1, php_var(i, j, holes)) for j in range(1, holes + 1)), GE, 1))
    for j in range(1, holes + 1):
        out.append(LinearConstraint(tuple((1, php_var(i, j, holes)) for i in range(1, pigeons + 1)), LE, 1))
    return out


def random_3sat(num_vars, num_clauses, rng: random.Random):
    """Uniform random 3-CNF with each clause written as ``l1 + l2 + l3 >= 1``."""
    out = []
    k = min(3, num_vars)
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), k)
        out.append(PBConstraint([(v if rng.random() < 0.5 else -v, 1) for v in vs], 1))
    return out
