import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pbconflict.constraint import PBConstraint, lit_value, propagated_literals, slack

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def constraints(draw, max_vars=8, max_coef=30, min_len=1, max_len=6):
    n = draw(st.integers(min_len, min(max_len, max_vars)))
    vs = draw(st.lists(st.integers(1, max_vars), min_size=n, max_size=n, unique=True))
    terms = [(v if draw(st.booleans()) else -v, draw(st.integers(1, max_coef))) for v in vs]
    total = sum(a for _, a in terms)
    degree = draw(st.integers(1, total + 2))
    return PBConstraint(terms, degree)


@st.composite
def assignments(draw, max_vars=8):
    vals = draw(st.lists(st.sampled_from([None, 0, 1]), min_size=max_vars, max_size=max_vars))
    return {v: x for v, x in enumerate(vals, 1) if x is not None}


def propagation_scenario(rng: random.Random, max_vars=8, max_coef=20, min_slack=1):
    """A reason R, a partial assignment rho and a literal it propagates, or None.

    ``rho`` already contains the propagated literal (as it would on a trail)
    and ``slack(R, rho_before) >= min_slack``.
    """
    k = rng.randint(2, max_vars)
    vs = rng.sample(range(1, max_vars + 1), k)
    r = PBConstraint([(v if rng.random() < 0.5 else -v, rng.randint(1, max_coef)) for v in vs], 1)
    r = PBConstraint(r.items, rng.randint(1, r.coef_sum))
    rho = {}
    for v in vs:
        x = rng.random()
        if x < 0.4:
            rho[v] = rng.randint(0, 1)
    s = slack(r, rho)
    if s < min_slack:
        return None
    props = sorted(propagated_literals(r, rho))
    if not props:
        return None
    l_r = props[0]
    rho[abs(l_r)] = 1 if l_r > 0 else 0
    return r, rho, l_r


def falsified_partner(rng, r, rho, l_r, max_vars=8, max_coef=20):
    """A constraint containing ~l_r that is falsified under rho, or None."""
    extra = [v for v in range(1, max_vars + 1) if v != abs(l_r)]
    chosen = rng.sample(extra, rng.randint(0, min(4, len(extra))))
    terms = [(-l_r, rng.randint(1, max_coef))]
    for v in chosen:
        terms.append((v if rng.random() < 0.5 else -v, rng.randint(1, max_coef)))
    c = PBConstraint(terms, 1)
    nonfalse = sum(a for l, a in c.items if lit_value(l, rho) != 0)
    c = PBConstraint(c.items, nonfalse + rng.randint(1, 3))
    if c.is_contradiction():
        return None
    return c


@pytest.fixture
def rng():
    return random.Random(12345)
