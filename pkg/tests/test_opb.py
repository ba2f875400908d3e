import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbconflict.constraint import EQ, GE, LE, LinearConstraint, parse_constraint as P
from pbconflict.opb import OpbHeaderWarning, OpbParseError, OpbProblem, from_constraints, parse_opb, write_opb


def test_constraint_line():
    p = parse_opb("+2 x1 +3 ~x2 >= 5 ;")
    assert p.constraints == [LinearConstraint(((2, 1), (3, -2)), GE, 5)]
    assert p.normalized() == [P("2 x1 + 3 ~x2 >= 5")]


def test_objective():
    assert parse_opb("min: +1 x1 +2 x2 ;").objective == [(1, 1), (2, 2)]


def test_negative_coefficient_normalizes():
    p = parse_opb("-2 x1 >= -1 ;")
    assert p.constraints == [LinearConstraint(((-2, 1),), GE, -1)]
    assert p.normalized() == [P("2 ~x1 >= 1")]


def test_relations_and_header():
    text = "* #variable= 3 #constraint= 3\n* a comment\n+1 x1 +1 x2 <= 1 ;\n+1 x2 +1 x3 = 1 ;\n1 x3 >= 0 ;\n"
    p = parse_opb(text)
    assert (p.num_vars, p.num_constraints) == (3, 3)
    assert [c.relation for c in p.constraints] == [LE, EQ, GE]


def test_arbitrary_magnitude():
    big = 10**30
    p = parse_opb(f"+{big} x1 +{big} x2 >= {big + 1} ;")
    assert p.constraints[0].rhs == big + 1


def test_constraint_spanning_lines_and_bare_literals():
    p = parse_opb("x1 +2 x2\n  >= 2\n;")
    assert p.constraints == [LinearConstraint(((1, 1), (2, 2)), GE, 2)]


@pytest.mark.parametrize(
    "text, line, col, fragment",
    [
        ("+2 x1 >= 2.5 ;", 1, 10, "non-integer"),
        ("+2.5 x1 >= 2 ;", 1, 1, "non-integer"),
        ("+2 x1 > 1 ;", 1, 7, "'>'"),
        ("+2 x1 x2 >= 1 ;", 1, 7, "nonlinear"),
        ("+1 x1 >= 1", 1, 11, "';'"),
        ("* c\n+1 y1 >= 1 ;", 2, 4, "literal"),
        ("+1 x0 >= 1 ;", 1, 4, "start at 1"),
        ("min: +1 x1 ;\nmin: +1 x2 ;", 2, 1, "objective"),
        ("+1 x1 >= 1 ;\nmin: +1 x1 ;", 2, 1, "objective"),
    ],
)
def test_structured_errors(text, line, col, fragment):
    with pytest.raises(OpbParseError) as info:
        parse_opb(text)
    assert (info.value.line, info.value.col) == (line, col)
    assert fragment in info.value.message


def test_header_mismatch_warns():
    with pytest.warns(OpbHeaderWarning):
        parse_opb("* #variable= 1 #constraint= 1\n+1 x2 >= 1 ;")
    with pytest.warns(OpbHeaderWarning):
        parse_opb("* #variable= 2 #constraint= 2\n+1 x2 >= 1 ;")


def test_variable_count_covers_usage():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p = parse_opb("* #variable= 1 #constraint= 1\n+1 x4 >= 1 ;")
    assert p.variable_count == 4


def test_from_constraints_round_trip():
    cons = [P("2 x1 + 3 ~x2 >= 4"), P("x2 + x3 >= 1")]
    p = parse_opb(write_opb(from_constraints(cons, [(1, 1)])))
    assert p.normalized() == cons and p.objective == [(1, 1)]


terms = st.lists(st.tuples(st.integers(-50, 50), st.integers(-9, 9).filter(bool)), min_size=1, max_size=5)
problems = st.builds(
    OpbProblem,
    st.lists(st.builds(lambda t, r, b: LinearConstraint(tuple(t), r, b), terms, st.sampled_from([GE, LE, EQ]),
                       st.integers(-100, 100)), max_size=5),
    st.one_of(st.none(), terms.map(list)),
)


@given(problems)
def test_round_trip(problem):
    again = parse_opb(write_opb(problem))
    assert again.constraints == problem.constraints
    assert again.objective == problem.objective


@given(st.text(alphabet="x~0123456789+-*=<>;: \nmin", max_size=60))
def test_fuzzed_input_never_crashes(text):
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            parse_opb(text)
    except OpbParseError as e:
        assert e.line >= 1 and e.col >= 1
