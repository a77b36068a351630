from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum

from perimeter_app.lib.core_math import BigCount
from perimeter_app.lib.errors import FormulaMisuseError, InvalidInputError


class TableMode(str, Enum):
    PROPER = "proper"
    LATTICE = "lattice"


class Provenance(str, Enum):
    FORMULA = "formula"
    ENUMERATION = "enumeration"
    INVERSION = "inversion"
    EXPANSION = "expansion"


@dataclass
class PerimeterTable:
    """Counts of size-n polycubes by perimeter t.

    `dimension` is the proper dimension i for PROPER tables (G) and the lattice dimension d for
    LATTICE tables (g). Zero entries are dropped; negative entries are refused.
    """

    n: int
    dimension: int
    mode: TableMode
    counts: dict[int, BigCount] = field(default_factory=dict)
    provenance: Provenance = field(default=Provenance.FORMULA, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1 or self.dimension < 1:
            raise InvalidInputError(f"tables need n >= 1 and dimension >= 1, got n={self.n}, dim={self.dimension}")
        negative = {t: c for t, c in self.counts.items() if c < 0}
        if negative:
            raise FormulaMisuseError(f"negative counts in n={self.n} dim={self.dimension} table: {negative}")
        self.counts = {t: int(self.counts[t]) for t in sorted(self.counts) if self.counts[t]}

    @classmethod
    def from_pairs(cls, n: int, dimension: int, mode: TableMode, pairs: Iterable[tuple[int, BigCount]],
                   provenance: Provenance = Provenance.FORMULA) -> "PerimeterTable":
        counts: dict[int, BigCount] = {}
        for t, c in pairs:
            counts[t] = counts.get(t, 0) + c
        return cls(n, dimension, mode, counts, provenance)

    @property
    def total(self) -> BigCount:
        return sum(self.counts.values())

    @property
    def support(self) -> tuple[int, int] | None:
        if not self.counts:
            return None
        return min(self.counts), max(self.counts)

    def get(self, t: int) -> BigCount:
        return self.counts.get(t, 0)

    def rows(self) -> list[tuple[int, BigCount]]:
        return list(self.counts.items())

    def same_counts(self, other: "PerimeterTable") -> bool:
        return self.n == other.n and self.counts == other.counts

    def differences(self, other: "Mapping[int, BigCount] | PerimeterTable") -> dict[int, tuple[BigCount, BigCount]]:
        theirs = other.counts if isinstance(other, PerimeterTable) else dict(other)
        keys = sorted(set(self.counts) | set(theirs))
        return {t: (self.get(t), theirs.get(t, 0)) for t in keys if self.get(t) != theirs.get(t, 0)}
