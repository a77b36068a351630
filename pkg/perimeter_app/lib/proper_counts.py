"""
Closed-form tables of proper polycubes: G^(n-1) from tree degree sequences and G^(n-2) from the
merged-label pattern census.
"""
from collections import Counter
from dataclasses import dataclass
from itertools import product
from math import comb

from perimeter_app.lib.core_math import BigCount, DegreeSequence, degree_sequences, exact_div
from perimeter_app.lib.errors import FormulaDomainError, FormulaMisuseError, InvalidInputError
from perimeter_app.lib.logger import get_logger
from perimeter_app.lib.pattern_counts import count_free, count_xx, count_xyx_total, count_xyzx, xyx_slices
from perimeter_app.lib.perimeter_laws import t1_from_square_sum, t2, t_xx, t_xyx, t_xyzx
from perimeter_app.lib.tables import PerimeterTable, Provenance, TableMode

logger = get_logger()

G2_MIN_N = 6


def proper_tree_total(n: int) -> BigCount:
    """DX(n, n-1) = 2^(n-1) n^(n-3), exact for every n >= 2."""
    if n < 2:
        raise InvalidInputError(f"proper polycubes in n-1 dimensions need n >= 2, got {n}")
    return exact_div(2 ** (n - 1) * n ** (n - 2), n, f"DX({n},{n - 1})")


def _g1_bounds(n: int) -> tuple[int, int]:
    base = (2 * n - 1) * (n - 1)
    star = base - ((n - 1) + (n - 1) ** 2) // 2
    path = base - (2 * n - 3)
    return star, path


PartitionWeights = dict[tuple[int, int], BigCount]


def _build_partition_weights(bound: int) -> list[PartitionWeights]:
    """
    For every s <= bound, group the partitions of s by (number of parts k, sum of (part+1)^2) and
    sum k!/prod(multiplicity!) * s!/prod(part!) over each group: the ordered part sequences, each
    weighted by the multinomial of its parts.

    Built as a knapsack over part sizes, adding all m copies of a part p at once; sums are visited
    in decreasing order so a stage never extends its own output.
    """
    by_sum: list[PartitionWeights] = [{} for _ in range(bound + 1)]
    by_sum[0][(0, 0)] = 1
    for p in range(1, bound + 1):
        square = (p + 1) ** 2
        for s in range(bound - p, -1, -1):
            for (k, squares), weight in by_sum[s].items():
                arrangements = parts_multinomial = 1
                total = s
                for m in range(1, (bound - s) // p + 1):
                    total += p
                    arrangements = arrangements * (k + m) // m
                    parts_multinomial *= comb(total, p)
                    target = by_sum[total]
                    key = (k + m, squares + m * square)
                    target[key] = target.get(key, 0) + weight * arrangements * parts_multinomial
    return by_sum


_partition_weights_table: list[PartitionWeights] = []


def _partition_weights(s: int) -> PartitionWeights:
    global _partition_weights_table
    if s >= len(_partition_weights_table):
        # grow geometrically so an increasing sweep over n rebuilds only a few times
        bound = max(s, 3 * len(_partition_weights_table) // 2)
        logger.debug("building partition weights up to %s", bound)
        _partition_weights_table = _build_partition_weights(bound)
    return _partition_weights_table[s]


def g1(n: int) -> PerimeterTable:
    """
    G_{n,t}^(n-1): each degree sequence contributes 2^(n-1) T(delta) polycubes at t1(delta).

    A degree sequence is a partition of n-2 (internal degrees minus one) padded with n-k leaves,
    so 2^(n-1) T(delta) = 2^(n-1) C(n, k) W / n with W the partition weight above, and the sum of
    squared degrees is (n-k) + sum (part+1)^2. Sequences sharing k and that sum share t1 and are
    counted together.
    """
    if n < 2:
        raise InvalidInputError(f"g1 needs n >= 2, got {n}")
    counts: Counter = Counter()
    for (k, squares), weight in _partition_weights(n - 2).items():
        # each sequence's 2^(n-1) T(delta) is whole even where T is fractional (n = 2)
        counts[t1_from_square_sum(n, n - k + squares)] += exact_div(
            2 ** (n - 1) * comb(n, k) * weight, n, f"g1({n}) weight with {k} internal vertices"
        )

    table = PerimeterTable(n, n - 1, TableMode.PROPER, dict(counts), Provenance.FORMULA)
    logger.debug("g1(%s): %s perimeter buckets", n, len(counts))
    low, high = _g1_bounds(n)
    support = table.support
    assert support is not None and low <= support[0] and support[1] <= high, \
        f"g1({n}) support {support} outside [{low}, {high}]"
    if table.total != proper_tree_total(n):
        raise FormulaMisuseError(f"g1({n}) sums to {table.total}, expected {proper_tree_total(n)}")
    return table


@dataclass(frozen=True)
class CoefficientSet:
    """How many polycubes one merged-label tree stands for in each perimeter bucket.

    Every entry is an exponent e meaning 2^(n+e) polycubes per tree, or None for no contribution.
    XYX splits into the loop orientation (per ordered end-degree slice, at t_xyx) and the open
    orientation (whole count, at t2); XYZX into the orientation bringing the ends together
    (at t2-1) and the other one (at t2).
    """

    free: int | None = -2
    xx: int | None = -3
    xyx_open: int | None = -3
    xyx_loop: int | None = -5
    xyzx_close: int | None = -3
    xyzx_open: int | None = -3

    @property
    def label(self) -> str:
        def fmt(e: int | None) -> str:
            return "0" if e is None else f"2^(n{e:+d})"
        return ", ".join(f"{name}={fmt(getattr(self, name))}" for name in self.__dataclass_fields__)


FROZEN_COEFFICIENTS = CoefficientSet()


def candidate_sets() -> list[CoefficientSet]:
    """Orientation bookkeepings consistent with each merged tree standing for 2^(n-2) oriented trees."""
    candidates = []
    for xx, xyx_open, xyx_loop, xyzx in product(
            (-3, -2),
            (-3, -2),
            (-3, -4, -5, -6),
            ((-3, -3), (-2, None), (None, -2)),
    ):
        candidates.append(CoefficientSet(free=-2, xx=xx, xyx_open=xyx_open, xyx_loop=xyx_loop,
                                         xyzx_close=xyzx[0], xyzx_open=xyzx[1]))
    return candidates


def _times(n: int, exponent: int | None, count: BigCount) -> BigCount:
    if exponent is None or count == 0:
        return 0
    if n + exponent < 0:
        raise FormulaMisuseError(f"coefficient 2^({n}{exponent:+d}) is fractional")
    return 2 ** (n + exponent) * count


def g2_contributions(delta: DegreeSequence, coefficients: CoefficientSet = FROZEN_COEFFICIENTS
                     ) -> list[tuple[int, BigCount]]:
    """(t, count) pairs one degree sequence adds to G_{n,t}^(n-2)."""
    n = delta.n
    if n < G2_MIN_N:
        raise FormulaDomainError(f"G^(n-2) formulas are defined for n >= {G2_MIN_N}, got n={n}")
    base = t2(delta)
    xyx_total = count_xyx_total(delta)
    xyzx = count_xyzx(delta)
    pairs = [
        (base, _times(n, coefficients.free, count_free(delta))),
        (t_xx(delta), _times(n, coefficients.xx, count_xx(delta))),
        (base, _times(n, coefficients.xyx_open, xyx_total)),
        (t_xyzx(delta), _times(n, coefficients.xyzx_close, xyzx)),
        (base, _times(n, coefficients.xyzx_open, xyzx)),
    ]
    slices = xyx_slices(delta)
    if sum(s.count for s in slices) != xyx_total:
        raise FormulaMisuseError(f"xyx slices of {delta} do not add up to the xyx total {xyx_total}")
    pairs.extend((t_xyx(delta, s.d0, s.d), _times(n, coefficients.xyx_loop, s.count)) for s in slices)
    return [(t, c) for t, c in pairs if c]


def g2(n: int, coefficients: CoefficientSet = FROZEN_COEFFICIENTS) -> PerimeterTable:
    if n < G2_MIN_N:
        raise FormulaDomainError(
            f"G^(n-2) formulas are defined for n >= {G2_MIN_N}; n={n} is served by enumeration",
            route="enumerate",
        )
    pairs = []
    for delta in degree_sequences(n):
        pairs.extend(g2_contributions(delta, coefficients))
    table = PerimeterTable.from_pairs(n, n - 2, TableMode.PROPER, pairs, Provenance.FORMULA)
    logger.info("g2(%s): %s polycubes over t in %s", n, table.total, table.support)
    return table


def dx(n: int, i: int) -> BigCount:
    if i == n - 1:
        total = g1(n).total
        if total != proper_tree_total(n):
            raise FormulaMisuseError(f"DX({n},{i}) = {total} disagrees with 2^(n-1) n^(n-3)")
        return total
    if i == n - 2:
        return g2(n).total
    raise InvalidInputError(f"closed forms cover i = n-1 and i = n-2 only, got n={n}, i={i}")
