"""
Counts of merged-label trees per error pattern and degree sequence.

Every count uses the (distinct-label tree, merge choice) weight: (n-2) T(delta) objects per
degree sequence in total. Closed forms are multiplied out fully and divided once, exactly.
"""
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

from perimeter_app.lib.core_math import BigCount, DegreeSequence, exact_div
from perimeter_app.lib.errors import FormulaDomainError, FormulaMisuseError
from perimeter_app.lib.labeled_trees import XYX_GROUPS, XYZX_GROUPS, count_trees


@dataclass(frozen=True)
class XyxSlice:
    d0: int
    d: int
    count: BigCount


def _require(delta: DegreeSequence, minimum: int, what: str) -> None:
    if delta.n < minimum:
        raise FormulaDomainError(f"{what} is defined for n >= {minimum}, got n={delta.n}")


def _whole(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise FormulaMisuseError(f"{what} evaluated to the non-integer {value}")
    return value.numerator


def count_xx(delta: DegreeSequence) -> BigCount:
    """Trees whose two equal labels sit on adjacent edges.

    (n-2) T(delta) times the share of edge pairs meeting at a vertex.
    """
    _require(delta, 4, "T_xx")
    n, c = delta.n, delta.census
    pairs_at_vertices = sum(d * (d - 1) // 2 * a for d, a in enumerate(c.alpha, start=1))
    return exact_div((n - 2) * count_trees(delta) * pairs_at_vertices, (n - 1) * (n - 2) // 2, f"T_xx{delta}")


def xx_classes(delta: DegreeSequence) -> tuple[int, int, int, int, int]:
    """The five code classes of the xx pattern, label 0 merged with n-2, weighted by n-2."""
    _require(delta, 4, "T_xx classes")
    n, c = delta.n, delta.census
    t = count_trees(delta)
    a1 = c.alpha_of(1)
    q = sum((d - 1) * (d - 2) * a for d, a in enumerate(c.alpha, start=1))
    r = (n - 2) ** 2 - c.excess_moment(2)
    values = (
        Fraction(t * a1 * q, (n - 1) * (n - 3)),
        Fraction(t * a1 * r, (n - 1) * (n - 2) * (n - 3)),
        Fraction(t * r, (n - 1) * (n - 3)),
        Fraction(t * (n - 1 - a1) * q, (n - 1) * (n - 3)),
        Fraction(t * (n - 2 - a1) * r, (n - 1) * (n - 2) * (n - 3)),
    )
    return tuple(_whole(v, f"T_xx,{i}{delta}") for i, v in enumerate(values, start=1))  # type: ignore[return-value]


def count_xyx(delta: DegreeSequence, d0: int, d: int) -> BigCount:
    """xyx trees whose path ends have degrees d0 (beside the first x edge) and d.

    Slices are ordered and symmetric in (d0, d); an unordered pair of end degrees p != q
    splits evenly between (p, q) and (q, p).
    """
    _require(delta, 5, "T_xyx slices")
    n, c = delta.n, delta.census
    if not (1 <= d0 <= n - 1 and 1 <= d <= n - 1):
        return 0
    pairs = c.alpha_of(d0) * (c.alpha_of(d) - (1 if d0 == d else 0))
    if pairs == 0:
        return 0
    x2, x3 = c.x(2), c.x(3)
    body = (
        6 * d ** 3 + 2 * (3 * d - 10) * d0 ** 2 + 6 * d0 ** 3
        + (d + d0 - 10) * n ** 2
        - (3 * x2 - 8) * d - 20 * d ** 2
        + (6 * d ** 2 - 3 * x2 - 20 * d + 8) * d0
        - (4 * d ** 2 + (4 * d - 21) * d0 + 4 * d0 ** 2 - 2 * x2 - 21 * d + 18) * n
        + 10 * x2 - 2 * x3 + 16
    )
    return exact_div(
        count_trees(delta) * pairs * body,
        (n - 1) * (n - 2) * (n - 3) * (n - 4),
        f"T_xyx{delta}({d0},{d})",
    )


def xyx_slices(delta: DegreeSequence) -> list[XyxSlice]:
    n = delta.n
    slices = [XyxSlice(d0, d, count_xyx(delta, d0, d)) for d0 in range(1, n) for d in range(1, n)]
    return [s for s in slices if s.count]


def xyx_unordered_slices(delta: DegreeSequence) -> dict[tuple[int, int], BigCount]:
    """Slices folded onto unordered end-degree pairs, smaller degree first."""
    folded: dict[tuple[int, int], BigCount] = {}
    for s in xyx_slices(delta):
        key = (min(s.d0, s.d), max(s.d0, s.d))
        folded[key] = folded.get(key, 0) + s.count
    return folded


def count_xyx_total(delta: DegreeSequence) -> BigCount:
    _require(delta, 3, "T_xyx")
    n, c = delta.n, delta.census
    body = -6 * n ** 2 + 10 * n - 4 + 2 * c.x(2) * (n + 1) - 2 * c.x(3)
    return exact_div(count_trees(delta) * body, (n - 1) * (n - 2), f"T_xyx{delta}")


def count_xyzx(delta: DegreeSequence) -> BigCount:
    """Trees whose equal labels are two edges apart, from the expected number of 4-edge paths.

    With p_k the power sums of (degree - 1), a uniformly drawn labeled tree of degree sequence
    delta carries [2 E4 + 3(n-3)(F - E3)] / ((n-2)(n-3)(n-5)) paths of four edges on average.
    """
    _require(delta, 6, "T_xyzx")
    n, c = delta.n, delta.census
    p1, p2, p3, p4 = (c.excess_moment(k) for k in range(1, 5))
    e3 = p1 ** 3 - 3 * p1 * p2 + 2 * p3
    e4 = p1 ** 4 - 6 * p1 ** 2 * p2 + 3 * p2 ** 2 + 8 * p1 * p3 - 6 * p4
    f = p2 * (p1 ** 2 - p2) - 2 * p1 * p3 + 2 * p4
    return exact_div(
        count_trees(delta) * (2 * e4 + 3 * (n - 3) * (f - e3)),
        (n - 1) * (n - 2) * (n - 3) * (n - 5),
        f"T_xyzx{delta}",
    )


def count_free(delta: DegreeSequence) -> BigCount:
    """Merged-label trees with no error pattern; negative means a pattern count overshoots."""
    free = ((delta.n - 2) * count_trees(delta)
            - count_xx(delta) - count_xyx_total(delta) - count_xyzx(delta))
    if free < 0:
        raise FormulaMisuseError(f"pattern counts exceed the {delta} census by {-free}")
    return free


# Per-class closed forms as they were first published. They are evaluated exactly for the
# pattern report only; the counts above are the ones the tables are built from.

def _xyx_printed_1(n: int, c, dn1: int) -> Fraction:
    x2, x3 = c.x(2), c.x(3)
    inner = (4 * n ** 2 - 6 * n + 2 - x2 * (n + 2) + x3
             + (2 * dn1 ** 3 - dn1 ** 2 * n - x2 * (dn1 - n - 3) - 6 * dn1 ** 2
                + 7 * dn1 * n - 4 * n ** 2 - x3 - 2 * dn1 + 4) * c.alpha_of(dn1))
    return Fraction(c.alpha_of(1) * inner, (n - 1) * (n - 2) * (n - 3) * (n - 4))


def _xyx_printed_2(n: int, c, dn1: int) -> Fraction:
    return Fraction(
        c.alpha_of(1) * c.alpha_of(dn1) * (dn1 - 1) * (n ** 2 + (1 - 2 * dn1) * n - 2 + 2 * dn1 ** 2 - c.x(2)),
        (n - 1) * (n - 2) * (n - 3) * (n - 4),
    )


def _xyx_printed_4_5(n: int, c, d0: int, dn1: int) -> Fraction:
    x2, x3 = c.x(2), c.x(3)
    bracket = (4 * d0 ** 3 + 3 * d0 ** 2 * dn1 + 3 * d0 * dn1 ** 2 + 2 * dn1 ** 3 + (d0 - 5) * n ** 2
               - x2 * (2 * d0 + dn1 - n - 5) - 11 * d0 ** 2 - 10 * d0 * dn1 - 9 * dn1 ** 2
               - (3 * d0 ** 2 + 2 * d0 * dn1 + dn1 ** 2 - 12 * d0 - 9 * dn1 + 9) * n
               - x3 + 3 * d0 + 5 * dn1 + 8)
    inner = (-12 * d0 ** 3 - (d0 - 5) * n ** 2 + x2 * (3 * d0 - n - 5) + 30 * d0 ** 2
             + 3 * (2 * d0 ** 2 - 7 * d0 + 3) * n + bracket * c.alpha_of(dn1) + x3 - 8 * d0 - 8)
    return Fraction(c.alpha_of(d0) * inner, (n - 1) * (n - 2) * (n - 3) * (n - 4))


def _xyx_printed_6_8(n: int, c, d0: int, dn1: int) -> Fraction:
    x2, x3 = c.x(2), c.x(3)
    bracket = (2 * d0 ** 3 + d0 ** 2 * dn1 + d0 * dn1 ** 2 + 2 * dn1 ** 3 - x2 * (d0 + dn1 - n - 4)
               - 7 * d0 ** 2 - 6 * d0 * dn1 - 7 * dn1 ** 2
               - (d0 ** 2 + dn1 ** 2 - 7 * d0 - 7 * dn1 + 6) * n - 4 * n ** 2 - x3 + 3 * d0 + 3 * dn1 + 6)
    inner = (-6 * d0 ** 3 + x2 * (2 * d0 - n - 4) + 20 * d0 ** 2 + 2 * (d0 ** 2 - 7 * d0 + 3) * n + 4 * n ** 2
             + bracket * c.alpha_of(dn1) + x3 - 6 * d0 - 6)
    return Fraction(c.alpha_of(d0) * inner, (n - 1) * (n - 2) * (n - 3) * (n - 4))


def _xyx_printed_7_9(n: int, c, d0: int, dn2: int) -> Fraction:
    x2 = c.x(2)
    bracket = (2 * d0 ** 2 * dn2 + 2 * d0 * dn2 ** 2 + 2 * dn2 ** 3 + (dn2 - 1) * n ** 2 - 2 * d0 ** 2
               - x2 * (dn2 - 1) - 4 * d0 * dn2 - 4 * dn2 ** 2
               - (2 * d0 * dn2 + 2 * dn2 ** 2 - 2 * d0 - 5 * dn2 + 3) * n + 2 * d0 + 2)
    inner = (-6 * d0 ** 3 - (d0 - 1) * n ** 2 + x2 * (d0 - 1) + 10 * d0 ** 2 + (4 * d0 ** 2 - 7 * d0 + 3) * n
             + bracket * c.alpha_of(dn2) - 2 * d0 - 2)
    return Fraction(c.alpha_of(d0) * inner, (n - 1) * (n - 2) * (n - 3) * (n - 4))


def xyx_printed_groups(delta: DegreeSequence) -> dict[str, Fraction]:
    """Published xyx class groups, summed over their free degree arguments, times T(delta)."""
    _require(delta, 5, "T_xyx classes")
    n, c = delta.n, delta.census
    t = count_trees(delta)
    degrees = range(1, n)
    inner = range(2, n)
    groups = {
        "1=3": 2 * sum(_xyx_printed_1(n, c, dn1) for dn1 in degrees),
        "2": sum(_xyx_printed_2(n, c, dn1) for dn1 in degrees),
        "4+5": sum(_xyx_printed_4_5(n, c, d0, dn1) for d0 in degrees for dn1 in degrees),
        "6+8": sum(_xyx_printed_6_8(n, c, d0, dn1) for d0 in inner for dn1 in degrees),
        "7+9": sum(_xyx_printed_7_9(n, c, d0, dn2) for d0 in inner for dn2 in inner),
    }
    assert set(groups) == set(XYX_GROUPS)
    return {name: t * Fraction(value) for name, value in groups.items()}


def xyzx_printed_groups(delta: DegreeSequence) -> dict[str, Fraction]:
    _require(delta, 6, "T_xyzx classes")
    n, c = delta.n, delta.census
    t = count_trees(delta)
    a1, x2, x3, x4 = c.alpha_of(1), c.x(2), c.x(3), c.x(4)
    d4 = (n - 1) * (n - 2) * (n - 3) * (n - 5)
    d5 = d4 * (n - 4)
    u = 2 * n ** 3 + 3 * n ** 2 - 11 * n + 6
    v = n ** 2 + 11 * n - 4
    w = n ** 4 + 10 * n ** 3 - 5 * n ** 2 - 22 * n + 16
    single = Fraction(a1 * (-4 * n ** 3 - 6 * n ** 2 + 22 * n - 12 + x2 * v - 2 * x3 * (n + 3) + 2 * x4), d4)
    groups = {
        "1=3=4": 3 * single,
        "2": Fraction(a1 * (w - 6 * x2 * (n ** 2 + 3 * n - 2) + 8 * x3 * (n + 1) - 6 * x4), d5),
        "5-8": Fraction(
            -7 * n ** 4 + 22 * n ** 3 + 75 * n ** 2 + 4 * u * a1 - 178 * n + 88
            + 2 * (n ** 3 + 5 * n ** 2 - v * a1 - 46 * n + 18) * x2
            - 4 * (n ** 2 - (n + 3) * a1 - 2 * n - 11) * x3
            + 2 * x4 * (2 * n - 2 * a1 - 9),
            d4,
        ),
        "9-12": Fraction(
            -2 * u * (n - 3) + 2 * u * a1
            + (v * (n - 3) - v * a1) * x2
            - 2 * ((n + 3) * (n - 3) - (n + 3) * a1) * x3
            + 2 * x4 * (n - a1 - 3),
            d5,
        ),
        "13-16": Fraction(
            w * (n - 4) - w * a1
            - 6 * ((n ** 2 + 3 * n - 2) * (n - 4) - (n ** 2 + 3 * n - 2) * a1) * x2
            + 8 * ((n + 1) * (n - 4) - (n + 1) * a1) * x3
            - 6 * x4 * (n - a1 - 4),
            d4,
        ),
    }
    assert set(groups) == set(XYZX_GROUPS)
    return {name: t * value for name, value in groups.items()}


def xyzx_printed_total(delta: DegreeSequence) -> Fraction:
    _require(delta, 4, "printed T_xyzx")
    n, c = delta.n, delta.census
    x2, x3, x4 = c.x(2), c.x(3), c.x(4)
    body = (-10 * n ** 3 - 12 * n ** 2 + 50 * n - 28 + 3 * (n ** 2 + 9 * n - 4) * x2
            - 2 * x3 * (3 * n + 7) + 6 * x4)
    return Fraction(count_trees(delta) * body, (n - 1) * (n - 2) * (n - 3))


PATTERN_TOTALS: dict[str, Callable[[DegreeSequence], BigCount]] = {
    "xx": count_xx,
    "xyx": count_xyx_total,
    "xyzx": count_xyzx,
}
