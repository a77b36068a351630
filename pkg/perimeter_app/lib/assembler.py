"""
From proper-dimension tables G^(i) to lattice tables g^(d) and back, plus perimeter polynomials,
cluster densities and the polynomial-in-d form of g.
"""
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass, field
from math import comb

import sympy
from sympy import KroneckerDelta, Poly, Rational, binomial

from perimeter_app.lib.core_math import BigCount
from perimeter_app.lib.enumerator import enumerate_proper
from perimeter_app.lib.errors import FormulaDomainError, FormulaMisuseError, InvalidInputError
from perimeter_app.lib.logger import get_logger
from perimeter_app.lib.proper_counts import G2_MIN_N, g1, g2
from perimeter_app.lib.tables import PerimeterTable, Provenance, TableMode

logger = get_logger()

d_symbol, t_symbol, q_symbol = sympy.symbols("d t q", integer=True)


@dataclass
class ProperFamily:
    """G^(i)_{n,t} for every proper dimension i of one size n."""

    n: int
    tables: dict[int, PerimeterTable] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for i, table in self.tables.items():
            if table.mode is not TableMode.PROPER or table.n != self.n or table.dimension != i:
                raise InvalidInputError(f"table for i={i} does not belong to a size-{self.n} proper family")
            if not 1 <= i <= max(self.n - 1, 1):
                raise InvalidInputError(f"size-{self.n} polycubes are proper in 1..{max(self.n - 1, 1)} dimensions, got {i}")

    @property
    def dimensions(self) -> list[int]:
        return sorted(self.tables)

    def provenance(self) -> dict[int, str]:
        return {i: self.tables[i].provenance.value for i in self.dimensions}


@dataclass
class PerimeterPolynomial:
    n: int
    d: int
    coefficients: dict[int, BigCount]

    def as_poly(self) -> Poly:
        return Poly(sum((c * q_symbol ** t for t, c in self.coefficients.items()), sympy.Integer(0)), q_symbol)

    def evaluate(self, q: int | Rational) -> Rational:
        return sum((c * Rational(q) ** t for t, c in self.coefficients.items()), Rational(0))


def expand(family: ProperFamily, d: int) -> PerimeterTable:
    """g_{n,t}^(d) = sum_i C(d, i) G^(i)_{n, t - 2(d-i)n}."""
    if d < 1:
        raise InvalidInputError(f"lattice dimension must be >= 1, got {d}")
    n = family.n
    counts: Counter = Counter()
    for i, table in family.tables.items():
        weight = comb(d, i)
        if weight == 0:
            continue
        shift = 2 * (d - i) * n
        for t, c in table.counts.items():
            counts[t + shift] += weight * c
    provenance = Provenance.EXPANSION
    return PerimeterTable(n, d, TableMode.LATTICE, dict(counts), provenance)


def invert(g_tables: Mapping[int, PerimeterTable], i: int) -> PerimeterTable:
    """G^(i)_{n,t} = sum_{d=1..i} (-1)^(i-d) C(i, d) g^(d)_{n, t + 2(d-i)n}; needs every d in 1..i."""
    missing = [d for d in range(1, i + 1) if d not in g_tables]
    if missing:
        raise InvalidInputError(f"inverting to i={i} needs lattice tables for d={missing}")
    sizes = {table.n for table in g_tables.values()}
    if len(sizes) != 1:
        raise InvalidInputError(f"lattice tables mix sizes {sorted(sizes)}")
    n = sizes.pop()
    counts: Counter = Counter()
    for d in range(1, i + 1):
        sign = -1 if (i - d) % 2 else 1
        weight = sign * comb(i, d)
        shift = 2 * (d - i) * n
        for t, c in g_tables[d].counts.items():
            counts[t - shift] += weight * c
    leftover = {t: c for t, c in counts.items() if c < 0}
    if leftover:
        raise FormulaMisuseError(f"inversion to i={i} left negative counts {leftover}")
    return PerimeterTable(n, i, TableMode.PROPER, dict(counts), Provenance.INVERSION)


def invert_family(g_tables: Mapping[int, PerimeterTable]) -> ProperFamily:
    if not g_tables:
        raise InvalidInputError("no lattice tables to invert")
    n = next(iter(g_tables.values())).n
    top = min(max(g_tables), max(n - 1, 1))
    tables = {i: invert(g_tables, i) for i in range(1, top + 1)}
    return ProperFamily(n, {i: t for i, t in tables.items() if t.counts})


def perimeter_polynomial(family: ProperFamily, d: int) -> PerimeterPolynomial:
    return PerimeterPolynomial(family.n, d, dict(expand(family, d).counts))


def total_count(poly: PerimeterPolynomial) -> BigCount:
    """A_d(n), the number of fixed polycubes of size n in d dimensions."""
    return sum(poly.coefficients.values())


def evaluate_density(poly: PerimeterPolynomial, p: int | str | Rational) -> Rational:
    """sum_t g_{n,t} p^n (1-p)^t in exact rationals."""
    p = Rational(p)
    if not 0 <= p <= 1:
        raise InvalidInputError(f"occupation probability must lie in [0, 1], got {p}")
    return p ** poly.n * poly.evaluate(1 - p)


@dataclass(frozen=True)
class SymbolicTerm:
    i: int
    weight: sympy.Expr
    shift: sympy.Expr
    entries: tuple[tuple[int, BigCount], ...]

    def as_expr(self) -> sympy.Expr:
        return self.weight * sum(
            (c * KroneckerDelta(t_symbol, t + self.shift) for t, c in self.entries), sympy.Integer(0)
        )


def symbolic_in_d(family: ProperFamily) -> list[SymbolicTerm]:
    """One term per proper dimension: weight C(d, i) and a perimeter shift of 2(d-i)n."""
    n = family.n
    return [
        SymbolicTerm(
            i,
            binomial(d_symbol, i),
            sympy.expand(2 * (d_symbol - i) * n),
            tuple(family.tables[i].counts.items()),
        )
        for i in family.dimensions
    ]


def symbolic_expression(family: ProperFamily) -> sympy.Expr:
    return sum((term.as_expr() for term in symbolic_in_d(family)), sympy.Integer(0))


def evaluate_symbolic(terms: list[SymbolicTerm], d: int) -> dict[int, BigCount]:
    counts: Counter = Counter()
    for term in terms:
        weight = int(term.weight.subs(d_symbol, d))
        shift = int(term.shift.subs(d_symbol, d))
        for t, c in term.entries:
            if weight:
                counts[t + shift] += weight * c
    return {t: counts[t] for t in sorted(counts) if counts[t]}


def family_from_enumeration(n: int, **kwargs) -> ProperFamily:
    tables = {}
    for i in range(1, max(n - 1, 1) + 1):
        table = enumerate_proper(n, i, **kwargs).proper_table(n, i)
        if table.counts:
            tables[i] = table
    return ProperFamily(n, tables)


def hybrid_family(n: int, **kwargs) -> ProperFamily:
    """i = n-1 and (for n >= 6) i = n-2 from closed forms, lower dimensions from enumeration."""
    if n < 2:
        return family_from_enumeration(n, **kwargs)
    tables = {n - 1: g1(n)}
    formula_floor = n - 1
    if n >= G2_MIN_N:
        try:
            tables[n - 2] = g2(n)
            formula_floor = n - 2
        except FormulaDomainError:
            logger.warning("g2(%s) unavailable, falling back to enumeration", n)
    for i in range(1, formula_floor):
        table = enumerate_proper(n, i, **kwargs).proper_table(n, i)
        if table.counts:
            tables[i] = table
    return ProperFamily(n, tables)
