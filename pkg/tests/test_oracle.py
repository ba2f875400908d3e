import itertools

import numpy as np
import pytest
from hypothesis import given

from pbconflict.constraint import PBConstraint, parse_constraint as P
from pbconflict.generators import pigeonhole
from pbconflict.oracle import Oracle, TooManyVariables, count_models, implies, satisfied, solve_exhaustive

from .conftest import constraints


def test_lexicographically_first_model():
    assert solve_exhaustive([P("x1 + x2 >= 1"), P("~x1 + ~x2 >= 1")]) == {1: 0, 2: 1}


def test_unsat():
    assert solve_exhaustive([P("x1 >= 1"), P("~x1 >= 1")]) is None


def test_pigeonhole_4_3_unsat():
    assert solve_exhaustive(pigeonhole(4)) is None


def test_bound():
    with pytest.raises(TooManyVariables):
        solve_exhaustive([P("x21 >= 1")])
    with pytest.raises(TooManyVariables):
        implies([], P("x1 >= 1"), num_vars=3, max_vars=2)


def test_implies_examples():
    f = [P("x1 + x2 + 2 x3 >= 2"), P("x1 + 2 ~x3 + x4 + x5 >= 3")]
    assert implies(f, P("3 x1 + x4 + x5 >= 3"))
    assert implies(f, PBConstraint([(1, 1)], 0))
    assert not implies([], P("x1 >= 1"), num_vars=1)


def test_implies_widens_to_new_variables():
    o = Oracle([P("x1 >= 1")])
    assert o.implies(P("x1 + x3 >= 1"))
    assert not o.implies(P("x3 >= 1"))


def test_count():
    assert count_models([P("x1 + x2 >= 1")]) == 3
    assert Oracle([P("x1 >= 1"), P("~x1 >= 1")]).satisfiable is False


@given(constraints(max_vars=5))
def test_satisfied_matches_python(c):
    pts = np.array(list(itertools.product((0, 1), repeat=5)), dtype=np.int8)
    mask = satisfied(c, pts)
    for row, ok in zip(pts, mask):
        assert ok == c.is_satisfied({v + 1: int(x) for v, x in enumerate(row)})


def test_huge_coefficients_use_exact_arithmetic():
    big = 2**70
    c = PBConstraint([(1, big), (2, big)], 2 * big)
    assert count_models([c]) == 1


def test_chunked_enumeration_finds_late_model():
    # only the all-ones point satisfies this, and it lies in the last chunk
    n = 17
    c = PBConstraint([(v, 1) for v in range(1, n + 1)], n)
    assert solve_exhaustive([c]) == {v: 1 for v in range(1, n + 1)}
