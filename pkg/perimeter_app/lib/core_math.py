from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property
from math import comb

from perimeter_app.lib.errors import FormulaMisuseError, InvalidInputError

# Counts are plain Python ints: arbitrary precision, signed while an inversion is in flight.
BigCount = int


def multinomial(parts: Iterable[int]) -> BigCount:
    """(sum parts)! / prod(parts!), or 0 if any part is negative.

    Evaluated as a product of binomials so no factorial larger than the result is built.
    """
    total = 0
    result = 1
    for part in parts:
        if part < 0:
            return 0
        total += part
        result *= comb(total, part)
    return result


def exact_div(numerator: int, denominator: int, what: str = "quotient") -> int:
    if denominator == 0:
        raise FormulaMisuseError(f"{what}: division by zero")
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise FormulaMisuseError(f"{what}: {numerator} is not divisible by {denominator}")
    return quotient


def integer_partitions(m: int) -> Iterator[tuple[int, ...]]:
    """
    Partitions of m in reverse lexicographic order, parts non-increasing (ZS1 algorithm).

    Zoghbi and Stojmenovic, Intern. J. Computer Math. 70 (1998), p. 319.
    """
    if m < 0:
        raise InvalidInputError(f"cannot partition a negative integer: {m}")
    if m <= 1:
        # ZS1's loop starts from x[0] == m and never yields for these
        yield (1,) * m
        return
    x = [1] * m
    x[0] = m
    k, h = 1, 1
    yield (m,)
    while x[0] != 1:
        if x[h - 1] == 2:
            k += 1
            x[h - 1] = 1
            h -= 1
        else:
            r = x[h - 1] - 1
            t = k - h + 1
            x[h - 1] = r
            while t >= r:
                h += 1
                x[h - 1] = r
                t -= r
            if t == 0:
                k = h
            else:
                k = h + 1
                if t > 1:
                    h += 1
                    x[h - 1] = t
        yield tuple(x[:k])


@dataclass(frozen=True)
class DegreeSequence:
    """Sorted vertex degrees of an n-vertex tree."""

    n: int
    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidInputError(f"a tree degree sequence needs n >= 2, got {self.n}")
        if len(self.degrees) != self.n:
            raise InvalidInputError(f"expected {self.n} degrees, got {len(self.degrees)}")
        if list(self.degrees) != sorted(self.degrees):
            raise InvalidInputError(f"degrees must be non-decreasing: {self.degrees}")
        if self.degrees[0] < 1 or self.degrees[-1] > self.n - 1:
            raise InvalidInputError(f"degrees must lie in 1..{self.n - 1}: {self.degrees}")
        if sum(self.degrees) != 2 * (self.n - 1):
            raise InvalidInputError(f"degrees of a tree sum to {2 * (self.n - 1)}: {self.degrees}")

    @classmethod
    def of(cls, degrees: Iterable[int]) -> "DegreeSequence":
        ordered = tuple(sorted(degrees))
        return cls(len(ordered), ordered)

    @cached_property
    def census(self) -> "DegreeCensus":
        return census(self)

    @property
    def square_sum(self) -> int:
        return sum(d * d for d in self.degrees)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.degrees)) + ")"


@dataclass(frozen=True)
class DegreeCensus:
    """alpha[d-1] vertices of degree d, and the power sums X_k = sum_d d^k alpha_d for k <= 4."""

    n: int
    alpha: tuple[int, ...]
    moments: tuple[int, int, int, int, int]

    def alpha_of(self, d: int) -> int:
        if 1 <= d <= len(self.alpha):
            return self.alpha[d - 1]
        return 0

    def x(self, k: int) -> int:
        return self.moments[k]

    def excess_moment(self, k: int) -> int:
        return excess_moment(self, k)


def census(delta: DegreeSequence) -> DegreeCensus:
    counts = Counter(delta.degrees)
    alpha = tuple(counts.get(d, 0) for d in range(1, delta.n))
    moments = tuple(sum(d ** k * a for d, a in enumerate(alpha, start=1)) for k in range(5))
    assert moments[0] == delta.n
    assert sum((d - 1) * a for d, a in enumerate(alpha, start=1)) == delta.n - 2
    return DegreeCensus(delta.n, alpha, moments)  # type: ignore[arg-type]


def excess_moment(c: DegreeCensus, k: int) -> int:
    # Power sums of (degree - 1); p_1 is always n - 2.
    return sum((d - 1) ** k * a for d, a in enumerate(c.alpha, start=1))


def degree_sequences(n: int) -> Iterator[DegreeSequence]:
    """Every sorted degree sequence of an n-vertex tree, once each.

    Order follows the partitions of n-2 in reverse lexicographic order, so the star comes first
    and the path last.
    """
    if n < 2:
        raise InvalidInputError(f"degree sequences need n >= 2, got {n}")
    for parts in integer_partitions(n - 2):
        inner = [p + 1 for p in parts]
        yield DegreeSequence(n, tuple(sorted([1] * (n - len(inner)) + inner)))
