import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbconflict.constraint import divide, lit_value, mir, parse_constraint as P, resolve, saturate, slack, weaken_all
from pbconflict.oracle import implies
from pbconflict.reduction import (
    ALL_AT_ONCE,
    CLAUSAL,
    DIVISION,
    ITERATIVE,
    MIR,
    SATURATION,
    ReductionStrategy,
    WeakeningCounter,
    reduce,
    reduce_clausal,
    reduce_division,
    reduce_mir,
    reduce_saturation,
)

from .conftest import falsified_partner, propagation_scenario

R = P("x1 + x2 + 2 x3 >= 2")
C = P("x1 + 2 ~x3 + x4 + x5 >= 3")
RHO = {1: 0, 3: 1}


def scenario(seed, min_slack=0):
    rng = random.Random(seed)
    while True:
        s = propagation_scenario(rng, min_slack=min_slack)
        if s is None:
            continue
        r, rho, l_r = s
        c = falsified_partner(rng, r, rho, l_r)
        if c is not None:
            return r, c, rho, l_r


def test_strategy_validation():
    with pytest.raises(ValueError):
        ReductionStrategy("cutting")
    with pytest.raises(ValueError):
        ReductionStrategy(MIR, "sometimes")
    assert ReductionStrategy(MIR).weakening == ALL_AT_ONCE


class TestClausal:
    def test_example(self):
        assert reduce_clausal(R, 3, RHO) == P("x1 + x3 >= 1")

    def test_clause_unchanged(self):
        c = P("x1 + x2 + x3 >= 1")
        assert reduce_clausal(c, 3, {1: 0, 2: 0, 3: 1}) == c

    def test_no_falsified_literal(self):
        assert reduce_clausal(P("3 x1 + x2 >= 3"), 1, {1: 1}) == P("x1 >= 1")

    def test_literal_must_occur(self):
        with pytest.raises(ValueError):
            reduce_clausal(R, -3, RHO)


class TestSaturation:
    @pytest.mark.parametrize("policy", [ITERATIVE, ALL_AT_ONCE])
    def test_example(self, policy):
        out = reduce_saturation(R, C, 3, RHO, policy)
        assert out == P("x1 + x3 >= 1")
        assert resolve(C, out, 3) == P("3 x1 + x4 + x5 >= 3")
        assert slack(resolve(C, out, 3), RHO) == -1

    def test_clause_needs_no_iteration(self):
        r = P("x1 + x2 + x3 >= 1")
        c = P("~x3 + x4 >= 1")
        counter = WeakeningCounter()
        rho = {1: 0, 2: 0, 3: 1, 4: 0}
        assert reduce_saturation(r, c, 3, rho, ITERATIVE, counter) == r
        assert counter.weakened == 0

    def test_counter(self):
        counter = WeakeningCounter()
        reduce_saturation(R, C, 3, RHO, ITERATIVE, counter)
        assert (counter.weakened, counter.candidates) == (1, 1)
        assert counter.fraction == 1.0


class TestCutReductions:
    R6 = P("2 x1 + 6 x2 + 10 x3 >= 8")
    RHO6 = {1: 0, 2: 0, 3: 1}
    C6 = P("~x3 + x4 >= 2")

    @pytest.mark.parametrize("policy", [ITERATIVE, ALL_AT_ONCE])
    def test_division_example(self, policy):
        assert reduce_division(self.R6, self.C6, 3, self.RHO6, policy) == P("x1 + x2 + x3 >= 1")

    def test_mir_example(self):
        assert reduce_mir(self.R6, self.C6, 3, self.RHO6) == P("2 x1 + 6 x2 + 8 x3 >= 8")

    def test_multiples_need_no_weakening(self):
        r = P("2 x1 + 4 x2 + 2 x3 >= 4")
        counter = WeakeningCounter()
        out = reduce_division(r, P("~x3 + x4 >= 2"), 3, {1: 0, 3: 1}, ALL_AT_ONCE, counter)
        assert out == divide(r, 2)
        assert counter.weakened == 0

    def test_unit_coefficient(self):
        # a_r = 1: the cut is the identity and the reason already propagates tightly
        r = P("x1 + x2 >= 1")
        out = reduce_mir(r, P("~x2 + x3 >= 2"), 2, {1: 0, 2: 1})
        assert out == r


@pytest.mark.parametrize("kind", [CLAUSAL, SATURATION, DIVISION, MIR])
@pytest.mark.parametrize("policy", [ITERATIVE, ALL_AT_ONCE])
@given(seed=st.integers(0, 10**9))
def test_resolvent_stays_falsified(kind, policy, seed):
    r, c, rho, l_r = scenario(seed)
    out = reduce(ReductionStrategy(kind, policy), r, c, l_r, rho)
    assert slack(resolve(c, out, l_r), rho) < 0


@pytest.mark.parametrize("kind", [CLAUSAL, SATURATION, DIVISION, MIR])
@given(seed=st.integers(0, 10**9))
def test_reduced_reason_is_implied(kind, seed):
    # weakening only uses the valid bounds 0 <= x <= 1, so R alone implies the result
    r, c, rho, l_r = scenario(seed)
    assert implies([r], reduce(ReductionStrategy(kind), r, c, l_r, rho), num_vars=8)


@given(seed=st.integers(0, 10**9))
def test_saturation_reaches_zero_slack(seed):
    r, c, rho, l_r = scenario(seed, min_slack=1)
    before = {v: x for v, x in rho.items() if v != abs(l_r)}
    cands = [l for l, _ in r.items if l != l_r and lit_value(l, before) != 0]
    assert slack(saturate(weaken_all(r, cands)), before) == 0


@pytest.mark.parametrize("cut", [divide, mir])
@given(seed=st.integers(0, 10**9))
def test_cut_reaches_nonpositive_slack(cut, seed):
    r, c, rho, l_r = scenario(seed, min_slack=1)
    before = {v: x for v, x in rho.items() if v != abs(l_r)}
    d = r.coef(l_r)
    w = [l for l, a in r.items if l != l_r and lit_value(l, before) != 0 and a % d]
    assert slack(cut(weaken_all(r, w), d), before) <= 0
