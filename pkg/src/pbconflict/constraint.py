"""Normalized pseudo-Boolean constraints and the cut rules used in conflict analysis.

Literals follow the DIMACS convention: ``v`` stands for ``x_v`` and ``-v`` for
its negation ``~x_v = 1 - x_v``.  A constraint is ``sum a_i * l_i >= b`` with
integer coefficients ``a_i >= 1``, a degree ``b >= 0`` and at most one literal
per variable.  All arithmetic is on Python ints, so nothing ever overflows.

Partial assignments are plain mappings from variable index to 0/1; a variable
missing from the mapping is free.
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Mapping, NamedTuple

GE, LE, EQ = ">=", "<=", "="
RELATIONS = (GE, LE, EQ)


def lit(var: int, negated: bool = False) -> int:
    if var < 1:
        raise ValueError(f"variable index must be >= 1, got {var}")
    return -var if negated else var


def negate(l: int) -> int:
    return -l


def var_of(l: int) -> int:
    return l if l > 0 else -l


def lit_value(l: int, rho: Mapping[int, int]):
    """Value of literal ``l`` under ``rho``: 1, 0, or None when free."""
    v = rho.get(l if l > 0 else -l)
    if v is None:
        return None
    return v if l > 0 else 1 - v


def lit_str(l: int) -> str:
    return f"x{l}" if l > 0 else f"~x{-l}"


class PBConstraint:
    """Immutable normalized constraint ``sum coef * lit >= degree``.

    ``items`` holds the ``(lit, coef)`` pairs sorted by variable index, which
    is also the order propagation scans them in.  Equality and hashing ignore
    ``id`` and ``origin``.
    """

    __slots__ = ("items", "degree", "id", "origin", "_coef", "_hash")

    def __init__(self, terms, degree: int, id=None, origin: str = "input"):
        if isinstance(terms, Mapping):
            terms = terms.items()
        coef = {}
        for l, a in terms:
            _check_int(a, "coefficient")
            _check_int(l, "literal")
            if l == 0:
                raise ValueError("literal 0 is not a valid literal")
            if a < 1:
                raise ValueError(f"coefficient of {lit_str(l)} must be >= 1, got {a}")
            if l in coef or -l in coef:
                raise ValueError(f"variable {var_of(l)} occurs more than once")
            coef[l] = a
        _check_int(degree, "degree")
        if degree < 0:
            raise ValueError(f"degree must be >= 0, got {degree}")
        self._coef = coef
        self.items = tuple(sorted(coef.items(), key=lambda t: var_of(t[0])))
        self.degree = degree
        self.id = id
        self.origin = origin
        self._hash = None

    def with_id(self, id, origin=None) -> "PBConstraint":
        c = PBConstraint.__new__(PBConstraint)
        c._coef, c.items, c.degree, c._hash = self._coef, self.items, self.degree, self._hash
        c.id = id
        c.origin = self.origin if origin is None else origin
        return c

    def coef(self, l: int) -> int:
        return self._coef.get(l, 0)

    def __contains__(self, l: int) -> bool:
        return l in self._coef

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def literals(self) -> tuple:
        return tuple(l for l, _ in self.items)

    @property
    def variables(self) -> tuple:
        return tuple(var_of(l) for l, _ in self.items)

    @property
    def coef_sum(self) -> int:
        return sum(a for _, a in self.items)

    @property
    def max_coef(self) -> int:
        return max((a for _, a in self.items), default=0)

    def is_tautology(self) -> bool:
        return self.degree == 0

    def is_contradiction(self) -> bool:
        """True iff no assignment satisfies the constraint (slack under the empty assignment < 0)."""
        return self.coef_sum < self.degree

    def is_clause(self) -> bool:
        return self.degree == 1 and all(a == 1 for _, a in self.items)

    def is_satisfied(self, model: Mapping[int, int]) -> bool:
        return sum(a for l, a in self.items if lit_value(l, model) == 1) >= self.degree

    def __eq__(self, other):
        if not isinstance(other, PBConstraint):
            return NotImplemented
        return self.degree == other.degree and self.items == other.items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.items, self.degree))
        return self._hash

    def __str__(self):
        lhs = " + ".join(f"{a} {lit_str(l)}" for l, a in self.items) or "0"
        return f"{lhs} >= {self.degree}"

    def __repr__(self):
        return f"PBConstraint({self})"


def _check_int(x, what):
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"{what} must be an integer, got {x!r}")


def normalize(terms: Iterable, relation: str, rhs: int) -> list:
    """Turn ``sum c_i * l_i  <relation>  rhs`` with signed integer coefficients into
    normalized constraints with the same 0-1 solutions.

    ``terms`` are ``(coef, lit)`` pairs and may mention a variable several
    times or in both polarities.  ``=`` yields two constraints; a side that
    normalizes to degree <= 0 is a tautology and is dropped.
    """
    terms = list(terms)
    for c, l in terms:
        _check_int(c, "coefficient")
        _check_int(l, "literal")
        if l == 0:
            raise ValueError("literal 0 is not a valid literal")
    _check_int(rhs, "right-hand side")
    if relation == GE:
        return _normalize_ge(terms, rhs)
    if relation == LE:
        return _normalize_ge([(-c, l) for c, l in terms], -rhs)
    if relation == EQ:
        return _normalize_ge(terms, rhs) + _normalize_ge([(-c, l) for c, l in terms], -rhs)
    raise ValueError(f"unknown relation {relation!r}")


def _normalize_ge(terms, rhs):
    acc = {}
    degree = rhs
    for c, l in terms:
        v = var_of(l)
        if l > 0:
            acc[v] = acc.get(v, 0) + c
        else:
            # c * ~x = c - c * x
            acc[v] = acc.get(v, 0) - c
            degree -= c
    out = {}
    for v, a in acc.items():
        if a > 0:
            out[v] = a
        elif a < 0:
            # a * x = -a * ~x + a
            out[-v] = -a
            degree -= a
    if degree <= 0:
        return []
    return [PBConstraint(out, degree)]


class LinearConstraint(NamedTuple):
    """An un-normalized 0-1 linear constraint: signed ``(coef, lit)`` terms, relation, rhs."""

    terms: tuple
    relation: str
    rhs: int

    def lhs_value(self, model: Mapping[int, int]) -> int:
        return sum(c * lit_value(l, model) for c, l in self.terms)

    def is_satisfied(self, model: Mapping[int, int]) -> bool:
        v = self.lhs_value(model)
        if self.relation == GE:
            return v >= self.rhs
        if self.relation == LE:
            return v <= self.rhs
        return v == self.rhs

    def normalized(self) -> list:
        return normalize(self.terms, self.relation, self.rhs)


def objective_value(objective, model: Mapping[int, int]) -> int:
    return sum(c * lit_value(l, model) for c, l in objective)


_TERM_RE = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(~?)x(\d+)")


def parse_constraint(text: str) -> PBConstraint:
    """Parse a human-written constraint such as ``"2 ~x1 + 2 x2 + 3x3 >= 4"``.

    The result must be a single normalized constraint (no ``=``); a tautology
    comes back as the empty constraint ``0 >= 0``.
    """
    m = re.match(r"^(.*?)(>=|<=)\s*([+-]?\d+)\s*;?\s*$", text.strip())
    if not m:
        raise ValueError(f"cannot parse constraint {text!r}")
    lhs, rel, rhs = m.groups()
    terms = []
    pos = 0
    lhs = lhs.strip()
    while pos < len(lhs):
        tm = _TERM_RE.match(lhs, pos)
        if not tm:
            raise ValueError(f"cannot parse term at {lhs[pos:]!r}")
        sign, digits, neg, v = tm.groups()
        c = int(digits) if digits else 1
        terms.append((-c if sign == "-" else c, lit(int(v), neg == "~")))
        pos = tm.end()
        while pos < len(lhs) and lhs[pos] == " ":
            pos += 1
    out = normalize(terms, rel, int(rhs))
    return out[0] if out else PBConstraint({}, 0)


def slack(c: PBConstraint, rho: Mapping[int, int]) -> int:
    """Sum of coefficients of literals not falsified by ``rho``, minus the degree."""
    s = -c.degree
    for l, a in c.items:
        v = rho.get(l if l > 0 else -l)
        if v is None or (v == 1) == (l > 0):
            s += a
    return s


def is_falsified(c: PBConstraint, rho: Mapping[int, int]) -> bool:
    return slack(c, rho) < 0


def propagated_literals(c: PBConstraint, rho: Mapping[int, int]) -> set:
    """Free literals of ``c`` whose coefficient exceeds the slack under ``rho``."""
    s = slack(c, rho)
    if s < 0:
        raise ValueError(f"constraint is falsified (slack {s}): {c}")
    return {l for l, a in c.items if a > s and lit_value(l, rho) is None}


def weaken(c: PBConstraint, l: int) -> PBConstraint:
    """Drop literal ``l`` (i.e. add ``a * ~l >= 0``), lowering the degree by its coefficient."""
    a = c.coef(l)
    if not a:
        raise ValueError(f"{lit_str(l)} does not occur in {c}")
    return PBConstraint([(k, b) for k, b in c.items if k != l], max(c.degree - a, 0))


def weaken_all(c: PBConstraint, lits) -> PBConstraint:
    drop = set(lits)
    degree = c.degree
    kept = []
    for l, a in c.items:
        if l in drop:
            degree -= a
        else:
            kept.append((l, a))
    return PBConstraint(kept, max(degree, 0))


def saturate(c: PBConstraint) -> PBConstraint:
    b = c.degree
    if all(a <= b for _, a in c.items):
        return c
    return PBConstraint([(l, min(a, b)) for l, a in c.items if b > 0], b)


def _check_divisor(d):
    _check_int(d, "divisor")
    if d < 1:
        raise ValueError(f"divisor must be >= 1, got {d}")


def divide(c: PBConstraint, d: int) -> PBConstraint:
    """Division (Chvatal-Gomory) cut: ceiling-divide every coefficient and the degree by ``d``."""
    _check_divisor(d)
    if d == 1:
        return c
    return PBConstraint([(l, -(-a // d)) for l, a in c.items], -(-c.degree // d))


def mir(c: PBConstraint, d: int) -> PBConstraint:
    """Mixed integer rounding cut with divisor ``d``, scaled by ``b mod d`` so it stays integral.

    With ``r = b mod d`` and ``r_i = a_i mod d``, literals with ``r_i == 0`` or
    ``r_i >= r`` get ``ceil(a_i/d) * r``; the others get
    ``floor(a_i/d) * r + r_i``.  The degree is ``ceil(b/d) * r``.  When ``r`` is
    0 the rounding set is empty and the division cut is returned.
    """
    _check_divisor(d)
    r = c.degree % d
    if r == 0:
        return divide(c, d)
    terms = []
    for l, a in c.items:
        q, ra = divmod(a, d)
        if ra == 0:
            terms.append((l, q * r))
        elif ra >= r:
            terms.append((l, (q + 1) * r))
        else:
            terms.append((l, q * r + ra))
    return PBConstraint(terms, -(-c.degree // d) * r)


def combine(c1: PBConstraint, m1: int, c2: PBConstraint, m2: int) -> PBConstraint:
    """``m1 * c1 + m2 * c2`` with opposite literals merged and the degree clamped at 0."""
    coef = {}
    for l, a in c1.items:
        coef[l] = a * m1
    for l, a in c2.items:
        coef[l] = coef.get(l, 0) + a * m2
    degree = c1.degree * m1 + c2.degree * m2
    for l in [l for l in coef if l > 0 and -l in coef]:
        a, b = coef.pop(l), coef.pop(-l)
        # a x + b ~x = (a - b) x + b   (or the mirror image when b > a)
        if a > b:
            coef[l] = a - b
        elif b > a:
            coef[-l] = b - a
        degree -= min(a, b)
    return PBConstraint(coef, max(degree, 0))


def resolution_multipliers(c: PBConstraint, r: PBConstraint, l: int):
    """Smallest positive multipliers ``(lam_c, lam_r)`` that cancel ``l`` between ``r`` and ``c``."""
    a_r = r.coef(l)
    a_c = c.coef(-l)
    if not a_r:
        raise ValueError(f"{lit_str(l)} does not occur in reason {r}")
    if not a_c:
        raise ValueError(f"{lit_str(-l)} does not occur in {c}")
    m = a_r * a_c // math.gcd(a_r, a_c)
    return m // a_c, m // a_r


def resolve(c: PBConstraint, r: PBConstraint, l: int) -> PBConstraint:
    """Generalized resolution of ``c`` (containing ``~l``) with ``r`` (containing ``l``) on ``l``."""
    lam_c, lam_r = resolution_multipliers(c, r, l)
    return combine(c, lam_c, r, lam_r)
