"""
Redelmeier enumeration of fixed polycubes with perimeter and spanned-dimension tracking.

Cells are integer indices into a virtual box of side 2m+1 (m the largest size searched) with
the root cell at its centre, so no polycube reaches the box boundary. The root is the smallest
cell of every polycube it grows ("min" convention) or the largest ("max").
"""
import hashlib
import json
import os
from collections import Counter, defaultdict
from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import comb
from pathlib import Path

from perimeter_app.lib.core_math import BigCount, exact_div
from perimeter_app.lib.errors import BudgetExceededError, InvalidInputError
from perimeter_app.lib.logger import get_logger
from perimeter_app.lib.settings import dense_cell_limit, enumeration_budget
from perimeter_app.lib.tables import PerimeterTable, Provenance, TableMode

logger = get_logger()

ROOT_CONVENTIONS = ("min", "max")
PILOT_NODES = 20_000
CHECKPOINT_SCHEMA = 1


class PolycubeState:
    """Occupancy, per-site neighbour counts, perimeter and per-axis adjacencies of one polycube."""

    def __init__(self, d: int, max_size: int) -> None:
        if d < 1 or max_size < 1:
            raise InvalidInputError(f"enumeration needs d >= 1 and n >= 1, got d={d}, n={max_size}")
        self.d = d
        self.side = 2 * max_size + 1
        self.strides = tuple(self.side ** k for k in range(d))
        self.origin = sum(max_size * s for s in self.strides)
        volume = self.side ** d
        if volume <= dense_cell_limit():
            self.occupied = bytearray(volume)
            self.neighbours = bytearray(volume)
        else:
            self.occupied = defaultdict(int)
            self.neighbours = defaultdict(int)
        self.cells: list[int] = []
        self.perimeter = 0
        self.axis_edges = [0] * d

    @property
    def size(self) -> int:
        return len(self.cells)

    @property
    def spanned(self) -> int:
        return sum(1 for count in self.axis_edges if count)

    def add(self, cell: int) -> None:
        occupied, neighbours, axis_edges = self.occupied, self.neighbours, self.axis_edges
        if neighbours[cell]:
            self.perimeter -= 1
        for axis, stride in enumerate(self.strides):
            for u in (cell - stride, cell + stride):
                if occupied[u]:
                    axis_edges[axis] += 1
                elif not neighbours[u]:
                    self.perimeter += 1
                neighbours[u] += 1
        occupied[cell] = 1
        self.cells.append(cell)

    def remove(self) -> int:
        cell = self.cells.pop()
        occupied, neighbours, axis_edges = self.occupied, self.neighbours, self.axis_edges
        occupied[cell] = 0
        for axis, stride in enumerate(self.strides):
            for u in (cell - stride, cell + stride):
                neighbours[u] -= 1
                if occupied[u]:
                    axis_edges[axis] -= 1
                elif not neighbours[u]:
                    self.perimeter -= 1
        if neighbours[cell]:
            self.perimeter += 1
        return cell

    def coordinates(self, cell: int) -> tuple[int, ...]:
        return tuple((cell // stride) % self.side for stride in self.strides)

    def recount_perimeter(self) -> int:
        occupied = set(self.cells)
        sites = {
            u
            for cell in self.cells
            for stride in self.strides
            for u in (cell - stride, cell + stride)
            if u not in occupied
        }
        return len(sites)


@dataclass(frozen=True)
class WorkUnit:
    """One independent piece of a search.

    Along `prefix` only the listed loop iteration is followed at each level; the unit tallies
    polycubes whose size lies in [min_size, max_size].
    """

    d: int
    max_size: int
    prefix: tuple[int, ...] = ()
    min_size: int = 1
    root_convention: str = "min"

    @property
    def key(self) -> str:
        payload = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:24]


Visitor = Callable[[PolycubeState], None]


class RedelmeierSearch:
    def __init__(self, d: int, max_size: int, root_convention: str = "min") -> None:
        if root_convention not in ROOT_CONVENTIONS:
            raise InvalidInputError(f"root convention must be one of {ROOT_CONVENTIONS}, got {root_convention!r}")
        self.d = d
        self.max_size = max_size
        self.root_convention = root_convention
        self.state = PolycubeState(d, max_size)
        self.reached = bytearray(len(self.state.occupied)) if isinstance(self.state.occupied, bytearray) \
            else defaultdict(int)
        self.tally: Counter = Counter()
        self.visits = 0

    def _allowed(self, cell: int) -> bool:
        if self.root_convention == "min":
            return cell > self.state.origin
        return cell < self.state.origin

    def run(self, prefix: tuple[int, ...] = (), min_size: int = 1, visit: Visitor | None = None) -> Counter:
        """Tally (size, spanned axes, perimeter) for every polycube the prefix leads to."""
        origin = self.state.origin
        self.reached[origin] = 1
        self._search([origin], prefix, min_size, visit)
        self.reached[origin] = 0
        return self.tally

    def _search(self, untried: list[int], prefix: tuple[int, ...], min_size: int, visit: Visitor | None) -> None:
        state, reached = self.state, self.reached
        level = state.size
        fixed = prefix[level] if level < len(prefix) else None
        iteration = -1
        while untried:
            cell = untried.pop()
            iteration += 1
            if fixed is not None and iteration < fixed:
                continue
            state.add(cell)
            size = level + 1
            self.visits += 1
            if size >= min_size:
                self.tally[(size, state.spanned, state.perimeter)] += 1
                if visit is not None:
                    visit(state)
            if size < self.max_size:
                fresh = []
                for stride in state.strides:
                    for u in (cell - stride, cell + stride):
                        if not reached[u] and self._allowed(u):
                            reached[u] = 1
                            fresh.append(u)
                self._search(untried + fresh, prefix, min_size, visit)
                for u in fresh:
                    reached[u] = 0
            state.remove()
            if fixed is not None:
                break


def _prefixes(d: int, depth: int, root_convention: str) -> list[tuple[int, ...]]:
    """Iteration-index paths to every polycube of size `depth`, in search order."""
    found: list[tuple[int, ...]] = []

    def walk(search: RedelmeierSearch, untried: list[int], path: tuple[int, ...]) -> None:
        state, reached = search.state, search.reached
        iteration = -1
        while untried:
            cell = untried.pop()
            iteration += 1
            state.add(cell)
            if state.size == depth:
                found.append(path + (iteration,))
            else:
                fresh = []
                for stride in state.strides:
                    for u in (cell - stride, cell + stride):
                        if not reached[u] and search._allowed(u):
                            reached[u] = 1
                            fresh.append(u)
                walk(search, untried + fresh, path + (iteration,))
                for u in fresh:
                    reached[u] = 0
            state.remove()

    search = RedelmeierSearch(d, depth, root_convention)
    search.reached[search.state.origin] = 1
    walk(search, [search.state.origin], ())
    return found


def split_work(nmax: int, d: int, prefix_depth: int, root_convention: str = "min") -> list[WorkUnit]:
    """Cut the search tree at `prefix_depth` cells: one unit for everything shallower, one per prefix."""
    if prefix_depth < 0:
        raise InvalidInputError(f"prefix depth must be >= 0, got {prefix_depth}")
    depth = min(prefix_depth, nmax)
    if depth == 0:
        return [WorkUnit(d, nmax, (), 1, root_convention)]
    units = []
    if depth > 1:
        units.append(WorkUnit(d, depth - 1, (), 1, root_convention))
    units.extend(WorkUnit(d, nmax, p, depth, root_convention) for p in _prefixes(d, depth, root_convention))
    return units


def run_unit(unit: WorkUnit) -> Counter:
    search = RedelmeierSearch(unit.d, unit.max_size, unit.root_convention)
    tally = search.run(unit.prefix, unit.min_size)
    logger.debug("Unit %s (prefix %s) visited %s polycubes", unit.key, unit.prefix, search.visits)
    return tally


def _checkpoint_path(directory: Path, unit: WorkUnit) -> Path:
    return directory / f"unit-{unit.key}.json"


def _write_checkpoint(directory: Path, unit: WorkUnit, tally: Counter) -> None:
    path = _checkpoint_path(directory, unit)
    payload = {
        "schema": CHECKPOINT_SCHEMA,
        "unit": asdict(unit),
        "counts": [[n, s, t, str(c)] for (n, s, t), c in sorted(tally.items())],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload, sort_keys=True))
    os.replace(tmp, path)


def _read_checkpoint(directory: Path, unit: WorkUnit) -> Counter | None:
    path = _checkpoint_path(directory, unit)
    if not path.exists():
        return None
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError:
        logger.warning("Ignoring unreadable checkpoint %s", path)
        return None
    if payload.get("schema") != CHECKPOINT_SCHEMA or payload.get("unit") != json.loads(json.dumps(asdict(unit))):
        logger.warning("Ignoring checkpoint %s written for a different unit", path)
        return None
    return Counter({(n, s, t): int(c) for n, s, t, c in payload["counts"]})


def run_units(units: Iterable[WorkUnit], jobs: int = 1, checkpoint_dir: Path | None = None) -> Counter:
    """Run units (resuming from checkpoints), merging their tallies in unit order."""
    units = list(units)
    results: dict[int, Counter] = {}
    if checkpoint_dir is not None:
        checkpoint_dir.mkdir(parents=True, exist_ok=True)
        for index, unit in enumerate(units):
            cached = _read_checkpoint(checkpoint_dir, unit)
            if cached is not None:
                results[index] = cached
        if results:
            logger.info("Resuming: %s of %s units already checkpointed", len(results), len(units))

    pending = [index for index in range(len(units)) if index not in results]
    todo = [units[index] for index in pending]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            computed = list(executor.map(run_unit, todo))
    else:
        computed = [run_unit(unit) for unit in todo]
    for index, unit, tally in zip(pending, todo, computed):
        results[index] = tally
        if checkpoint_dir is not None:
            _write_checkpoint(checkpoint_dir, unit, tally)

    merged: Counter = Counter()
    for index in range(len(units)):
        merged.update(results[index])
    return merged


@dataclass
class GTable:
    """Enumerated counts keyed (size, spanned axes, perimeter) for one lattice dimension d."""

    d: int
    nmax: int
    counts: Counter = field(default_factory=Counter)

    def sizes(self) -> list[int]:
        return sorted({n for n, _, _ in self.counts})

    def total(self, n: int) -> BigCount:
        return sum(c for (size, _, _), c in self.counts.items() if size == n)

    def lattice_table(self, n: int) -> PerimeterTable:
        pairs = [(t, c) for (size, _, t), c in self.counts.items() if size == n]
        return PerimeterTable.from_pairs(n, self.d, TableMode.LATTICE, pairs, Provenance.ENUMERATION)

    def proper_table(self, n: int, i: int) -> PerimeterTable:
        """G^(i) from a d-dimensional run: each i-proper shape sits in C(d, i) axis choices and
        gains 2(d-i)n perimeter sites from the unused axes."""
        if not 1 <= i <= self.d:
            raise InvalidInputError(f"proper dimension must lie in 1..{self.d}, got {i}")
        choices = comb(self.d, i)
        shift = 2 * (self.d - i) * n
        summed: Counter = Counter()
        for (size, spanned, t), c in self.counts.items():
            if size == n and spanned == i:
                summed[t - shift] += c
        pairs = [(t, exact_div(c, choices, f"G({n},{t})^({i}) from d={self.d}")) for t, c in summed.items()]
        return PerimeterTable.from_pairs(n, i, TableMode.PROPER, pairs, Provenance.ENUMERATION)


def estimate_visits(nmax: int, d: int) -> int:
    """Pilot-run the search on small sizes and extrapolate the last growth ratio to nmax."""
    per_size: Counter = Counter()
    size = 0
    while size < nmax:
        size += 1
        search = RedelmeierSearch(d, size)
        tally = search.run()
        per_size = Counter()
        for (n, _, _), c in tally.items():
            per_size[n] += c
        if search.visits > PILOT_NODES:
            break
    estimate = sum(per_size.values())
    if size == nmax:
        return estimate
    ratio = per_size[size] / max(per_size[size - 1], 1)
    last = per_size[size]
    for _ in range(size + 1, nmax + 1):
        last *= ratio
        estimate += int(last)
    return estimate


def _guard(nmax: int, d: int) -> None:
    budget = enumeration_budget()
    estimate = estimate_visits(nmax, d)
    if estimate > budget:
        raise BudgetExceededError(f"enumeration of n <= {nmax} in d={d} refused", estimate, budget)
    logger.debug("Enumeration n<=%s d=%s: estimated %s visits within budget %s", nmax, d, estimate, budget)


def enumerate_g(nmax: int, d: int, jobs: int = 1, checkpoint_dir: Path | None = None,
                prefix_depth: int | None = None, root_convention: str = "min") -> GTable:
    if nmax < 1 or d < 1:
        raise InvalidInputError(f"enumeration needs n >= 1 and d >= 1, got n={nmax}, d={d}")
    _guard(nmax, d)
    if prefix_depth is None:
        prefix_depth = 0 if jobs <= 1 and checkpoint_dir is None else min(nmax, 3)
    units = split_work(nmax, d, prefix_depth, root_convention)
    logger.info("Enumerating n<=%s in d=%s over %s work unit(s), %s job(s)", nmax, d, len(units), jobs)
    return GTable(d, nmax, run_units(units, jobs, checkpoint_dir))


def enumerate_proper(nmax: int, i: int, **kwargs) -> GTable:
    """Run in d = i; proper_table(n, i) then keeps the polycubes spanning all i axes."""
    return enumerate_g(nmax, i, **kwargs)


def iter_polycubes(n: int, d: int, root_convention: str = "min") -> Iterator[tuple[tuple[tuple[int, ...], ...], int, int]]:
    """Each fixed polycube of exactly n cells as (cell coordinates, perimeter, spanned axes)."""
    _guard(n, d)
    found: list[tuple[tuple[tuple[int, ...], ...], int, int]] = []

    def collect(state: PolycubeState) -> None:
        if state.size == n:
            cells = tuple(sorted(state.coordinates(c) for c in state.cells))
            found.append((cells, state.perimeter, state.spanned))

    RedelmeierSearch(d, n, root_convention).run(min_size=n, visit=collect)
    yield from found
