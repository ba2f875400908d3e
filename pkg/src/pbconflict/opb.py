"""Reading and writing the OPB text format of the pseudo-Boolean competitions.

Supported: ``*`` comment lines (the ``#variable= N #constraint= M`` header is
read from them), an optional ``min:`` objective, linear constraints with
``>=``, ``<=`` or ``=``, and ``~xN`` negated literals.  Products of literals
are rejected.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field

from .constraint import EQ, GE, LE, LinearConstraint, lit, var_of


class OpbParseError(ValueError):
    def __init__(self, message, line, col):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class OpbHeaderWarning(UserWarning):
    pass


@dataclass
class OpbProblem:
    constraints: list = field(default_factory=list)
    objective: list | None = None
    num_vars: int | None = None
    num_constraints: int | None = None

    @property
    def max_var(self) -> int:
        vs = [var_of(l) for c in self.constraints for _, l in c.terms]
        vs += [var_of(l) for _, l in self.objective or ()]
        return max(vs, default=0)

    @property
    def variable_count(self) -> int:
        """Declared variable count, widened to cover every variable actually used."""
        return max(self.num_vars or 0, self.max_var)

    def normalized(self) -> list:
        out = []
        for c in self.constraints:
            out += c.normalized()
        return out


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<semi>;)
  | (?P<rel>>=|<=|=)
  | (?P<min>min:)
  | (?P<num>[+-]?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)
  | (?P<lit>~?x\d+)
  | (?P<other>\S)
    """,
    re.VERBOSE,
)
_HEADER_VARS = re.compile(r"#variable=\s*(\d+)")
_HEADER_CONS = re.compile(r"#constraint=\s*(\d+)")


def _tokens(text):
    for line_no, line in enumerate(text.split("\n"), 1):
        if line.lstrip().startswith("*"):
            yield "comment", line, line_no, len(line) - len(line.lstrip()) + 1
            continue
        for m in _TOKEN_RE.finditer(line):
            if m.lastgroup != "ws":
                yield m.lastgroup, m.group(), line_no, m.start() + 1


class _Parser:
    def __init__(self, text):
        self.toks = list(_tokens(text))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def peek_kind(self):
        t = self.peek()
        return t[0] if t else "eof"

    def error(self, msg):
        t = self.peek()
        if t is None:
            line = self.toks[-1][2] if self.toks else 1
            col = self.toks[-1][3] + len(self.toks[-1][1]) if self.toks else 1
            return OpbParseError(msg, line, col)
        return OpbParseError(msg, t[2], t[3])

    def expect(self, kind, msg):
        if self.peek_kind() != kind:
            raise self.error(msg)
        t = self.toks[self.i]
        self.i += 1
        return t[1]

    def integer(self, what):
        tok = self.expect("num", f"expected an integer {what}")
        if not re.fullmatch(r"[+-]?\d+", tok):
            self.i -= 1
            raise self.error(f"non-integer {what} {tok!r}")
        return int(tok)

    def literal(self):
        tok = self.expect("lit", "expected a literal such as x3 or ~x3")
        neg = tok.startswith("~")
        v = int(tok[2:] if neg else tok[1:])
        if v < 1:
            self.i -= 1
            raise self.error("variable indices start at 1")
        return lit(v, neg)

    def terms(self):
        out = []
        while True:
            kind = self.peek_kind()
            if kind == "num":
                c = self.integer("coefficient")
                out.append((c, self.literal()))
            elif kind == "lit":
                out.append((1, self.literal()))
            elif kind == "comment":
                self.i += 1
                continue
            else:
                return out
            if self.peek_kind() == "lit":
                raise self.error("nonlinear terms (products of literals) are not supported")


def parse_opb(text: str) -> OpbProblem:
    """Parse OPB text.  Raises :class:`OpbParseError` with line and column on bad input."""
    problem = OpbProblem()
    p = _Parser(text)
    seen_constraint = False
    while p.peek() is not None:
        kind, tok, _, _ = p.peek()
        if kind == "comment":
            m = _HEADER_VARS.search(tok)
            if m and problem.num_vars is None:
                problem.num_vars = int(m.group(1))
            m = _HEADER_CONS.search(tok)
            if m and problem.num_constraints is None:
                problem.num_constraints = int(m.group(1))
            p.i += 1
            continue
        if kind == "min":
            if seen_constraint or problem.objective is not None:
                raise p.error("the objective must come once, before the constraints")
            p.i += 1
            terms = p.terms()
            p.expect("semi", "expected ';' to end the objective")
            problem.objective = terms
            continue
        terms = p.terms()
        if not terms:
            raise p.error(f"expected a term, got {tok!r}")
        if p.peek_kind() != "rel":
            t = p.peek()
            raise p.error(f"expected '>=', '<=' or '=', got {t[1]!r}" if t else "unexpected end of input")
        rel = {">=": GE, "<=": LE, "=": EQ}[p.expect("rel", "")]
        rhs = p.integer("right-hand side")
        p.expect("semi", "expected ';' to end the constraint")
        problem.constraints.append(LinearConstraint(tuple(terms), rel, rhs))
        seen_constraint = True
    _check_header(problem)
    return problem


def _check_header(problem):
    if problem.num_vars is not None and problem.max_var > problem.num_vars:
        warnings.warn(
            f"header declares {problem.num_vars} variables but x{problem.max_var} is used",
            OpbHeaderWarning,
            stacklevel=3,
        )
    if problem.num_constraints is not None and problem.num_constraints != len(problem.constraints):
        warnings.warn(
            f"header declares {problem.num_constraints} constraints, found {len(problem.constraints)}",
            OpbHeaderWarning,
            stacklevel=3,
        )


def _term_str(c, l):
    name = f"x{l}" if l > 0 else f"~x{-l}"
    return f"{c:+d} {name}"


def write_opb(problem: OpbProblem) -> str:
    nv = problem.num_vars if problem.num_vars is not None else problem.max_var
    nc = problem.num_constraints if problem.num_constraints is not None else len(problem.constraints)
    lines = [f"* #variable= {nv} #constraint= {nc}"]
    if problem.objective is not None:
        body = " ".join(_term_str(c, l) for c, l in problem.objective)
        lines.append(f"min: {body} ;" if body else "min: ;")
    for con in problem.constraints:
        body = " ".join(_term_str(c, l) for c, l in con.terms)
        lines.append(f"{body} {con.relation} {con.rhs} ;")
    return "\n".join(lines) + "\n"


def from_constraints(constraints, objective=None) -> OpbProblem:
    """Wrap normalized constraints as an OPB problem (all relations ``>=``)."""
    cons = [LinearConstraint(tuple((a, l) for l, a in c.items), GE, c.degree) for c in constraints]
    return OpbProblem(cons, list(objective) if objective is not None else None)


def read_opb(path) -> OpbProblem:
    with open(path, encoding="utf-8") as fh:
        return parse_opb(fh.read())
