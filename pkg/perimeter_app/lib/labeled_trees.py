"""
Edge-labeled trees and their Prüfer-like codes.

A tree on n vertices has n-1 edges carrying the labels 0..n-2 (distinct-label mode), or
0..n-3 with label 0 used twice (merged-label mode). Codes are sequences of length n-3 over
0..n-1 and are in bijection with distinct-label trees, so there are n^(n-3) of them.
"""
import itertools
import random
import re
from collections import Counter, defaultdict, deque
from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import Enum
from functools import cache, cached_property

import networkx as nx

from perimeter_app.lib.core_math import BigCount, DegreeSequence, exact_div, multinomial
from perimeter_app.lib.errors import BudgetExceededError, InvalidInputError
from perimeter_app.lib.logger import get_logger
from perimeter_app.lib.settings import merged_tree_limit

logger = get_logger()

Edge = tuple[int, int]


@dataclass(frozen=True)
class EdgeLabeledTree:
    n: int
    edges: tuple[Edge, ...]
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.edges) != self.n - 1 or len(self.labels) != self.n - 1:
            raise InvalidInputError(f"a tree on {self.n} vertices has {self.n - 1} labeled edges")
        if any(not (0 <= v < self.n) for edge in self.edges for v in edge):
            raise InvalidInputError(f"edge endpoints must lie in 0..{self.n - 1}: {self.edges}")
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        if not nx.is_tree(graph):
            raise InvalidInputError(f"edges do not form a tree: {self.edges}")

    @property
    def is_distinct(self) -> bool:
        return sorted(self.labels) == list(range(self.n - 1))

    @property
    def is_merged(self) -> bool:
        return self.n >= 3 and sorted(self.labels) == [0] + list(range(self.n - 2))

    @cached_property
    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(self.n)}
        for (a, b), label in zip(self.edges, self.labels):
            adj[a].append((b, label))
            adj[b].append((a, label))
        return adj

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degree_sequence(self) -> DegreeSequence:
        return DegreeSequence.of(self.degree(v) for v in range(self.n))

    def edge_with_label(self, label: int) -> Edge:
        return self.edges[self.labels.index(label)]

    def fingerprint(self) -> tuple:
        """Canonical form up to vertex renaming.

        Each vertex is replaced by the sorted labels of its incident edges, each edge by its label
        and the two endpoint descriptions.
        """
        incident = {v: tuple(sorted(label for _, label in self.adjacency[v])) for v in range(self.n)}
        return tuple(sorted(
            (label, tuple(sorted((incident[a], incident[b]))))
            for (a, b), label in zip(self.edges, self.labels)
        ))

    def relabeled(self, mapping: dict[int, int]) -> "EdgeLabeledTree":
        return EdgeLabeledTree(self.n, self.edges, tuple(mapping.get(label, label) for label in self.labels))

    def to_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        for (a, b), label in zip(self.edges, self.labels):
            graph.add_edge(a, b, label=label)
        return graph


@dataclass(frozen=True)
class PrueferCode:
    n: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 3:
            raise InvalidInputError(f"codes are defined for n >= 3, got {self.n}")
        if len(self.entries) != self.n - 3:
            raise InvalidInputError(f"a code for n={self.n} has length {self.n - 3}, got {len(self.entries)}")
        if any(not (0 <= e < self.n) for e in self.entries):
            raise InvalidInputError(f"code entries must lie in 0..{self.n - 1}: {self.entries}")

    @property
    def sequence(self) -> tuple[int, ...]:
        # S: the code with the implicit leading n-2 restored
        return (self.n - 2,) + self.entries


class PatternKind(str, Enum):
    FREE = "free"
    XX = "xx"
    XYX = "xyx"
    XYZX = "xyzx"


@dataclass(frozen=True)
class PatternClass:
    """Where the two equally labeled edges of a merged tree sit relative to each other.

    `gap` is the number of edges strictly between them on their connecting path. For XYX,
    `end_degrees` holds the tree degrees of the two far endpoints, smaller first.
    """

    kind: PatternKind
    gap: int
    end_degrees: tuple[int, int] | None = None

    @property
    def key(self) -> tuple[str, tuple[int, int] | None]:
        return self.kind.value, self.end_degrees


def _kind_for_gap(gap: int) -> PatternKind:
    if gap == 0:
        return PatternKind.XX
    if gap == 1:
        return PatternKind.XYX
    if gap == 2:
        return PatternKind.XYZX
    return PatternKind.FREE


def _distances(adjacency: dict[int, list[tuple[int, int]]], source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w, _ in adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _pattern_between(tree: EdgeLabeledTree, first: Edge, second: Edge,
                     dist_from: dict[int, dict[int, int]]) -> PatternClass:
    gap, near, far = min(
        (dist_from[u][w], u, w) for u in first for w in second
    )
    kind = _kind_for_gap(gap)
    if kind is not PatternKind.XYX:
        return PatternClass(kind, gap)
    end_a = first[1] if first[0] == near else first[0]
    end_b = second[1] if second[0] == far else second[0]
    degrees = sorted((tree.degree(end_a), tree.degree(end_b)))
    return PatternClass(kind, gap, (degrees[0], degrees[1]))


def classify(tree: EdgeLabeledTree) -> PatternClass:
    if not tree.is_merged:
        raise InvalidInputError("classify expects a merged-label tree (label 0 on exactly two edges)")
    first, second = (edge for edge, label in zip(tree.edges, tree.labels) if label == 0)
    dist_from = {u: _distances(tree.adjacency, u) for u in first}
    return _pattern_between(tree, first, second, dist_from)


def merge_patterns(tree: EdgeLabeledTree) -> list[PatternClass]:
    """Pattern of the merged tree obtained by identifying label n-2 with j, for j = 0..n-3."""
    if not tree.is_distinct:
        raise InvalidInputError("merge_patterns expects a distinct-label tree")
    shared = tree.edge_with_label(tree.n - 2)
    dist_from = {u: _distances(tree.adjacency, u) for u in shared}
    return [
        _pattern_between(tree, shared, tree.edge_with_label(j), dist_from)
        for j in range(tree.n - 2)
    ]


def merged_tree(tree: EdgeLabeledTree, choice: int) -> EdgeLabeledTree:
    # Label n-2 joins label `choice`; the pair is renamed 0 and the old 0 takes `choice`.
    return tree.relabeled({tree.n - 2: 0, choice: 0, 0: choice})


def _outgoing(tree: EdgeLabeledTree) -> tuple[dict[int, int], dict[int, int], int, int]:
    """Subdivide edge n-2 and orient every vertex toward the new vertex.

    Returns (parent, outgoing label, p, q): p keeps label n-2 toward the new vertex and lies on
    the side of the smallest leaf edge, q gets label n-1.
    """
    n = tree.n
    adj = tree.adjacency
    a, b = tree.edge_with_label(n - 2)
    smallest_leaf = min(
        (adj[v][0][1], v) for v in range(n) if len(adj[v]) == 1
    )[1]
    # the side of a (edge n-2 removed) either holds the smallest leaf or not
    side = {a}
    stack = [a]
    while stack:
        u = stack.pop()
        for w, label in adj[u]:
            if label != n - 2 and w not in side:
                side.add(w)
                stack.append(w)
    p, q = (a, b) if smallest_leaf in side else (b, a)

    hub = n  # the subdividing vertex
    parent = {p: hub, q: hub}
    out = {p: n - 2, q: n - 1}
    stack = [p, q]
    while stack:
        u = stack.pop()
        for w, label in adj[u]:
            if w not in parent and label != n - 2:
                parent[w] = u
                out[w] = label
                stack.append(w)
    return parent, out, p, q


def outgoing_labels(tree: EdgeLabeledTree) -> dict[int, int]:
    """Label of the edge each vertex uses on its way toward the subdivided edge n-2."""
    _, out, _, _ = _outgoing(tree)
    return out


def encode(tree: EdgeLabeledTree) -> PrueferCode:
    n = tree.n
    if n < 3:
        raise InvalidInputError(f"codes are defined for n >= 3, got {n}")
    if not tree.is_distinct:
        raise InvalidInputError(f"encode expects labels 0..{n - 2} each used once: {tree.labels}")
    parent, out, _, _ = _outgoing(tree)
    hub = n

    leaves = sorted((tree.adjacency[v][0][1], v) for v in range(n) if tree.degree(v) == 1)
    stops = {n - 1, n - 2}
    s: list[int] = []
    for _, leaf in leaves:
        u = parent[leaf]
        path: list[int] = []
        while u != hub:
            path.append(out[u])
            if out[u] in stops:
                break
            u = parent[u]
        # a leaf hanging directly off the subdividing vertex contributes nothing
        path.reverse()
        s.extend(path)
        stops.update(path)

    assert len(s) == n - 2 and s[0] == n - 2, f"malformed construction for {tree}: {s}"
    return PrueferCode(n, tuple(s[1:]))


def decode(code: PrueferCode) -> EdgeLabeledTree:
    n = code.n
    s = code.sequence
    present = set(s)
    leaves = [label for label in range(n) if label not in present]

    segments: list[list[int]] = []
    seen: set[int] = set()
    for entry in s:
        if entry in (n - 2, n - 1) or entry in seen:
            segments.append([entry])
        else:
            segments[-1].append(entry)
        seen.add(entry)

    if len(segments) == len(leaves) - 1 and leaves[-1] == n - 1:
        leaves = leaves[:-1]  # q is itself a leaf: the edge n-1 carries no path
    elif len(segments) != len(leaves) or n - 1 in leaves:
        raise InvalidInputError(f"{code.entries} is not a valid code for n={n}")

    # x -(n-1)- hub -(n-2)- y, every other edge hangs off the endpoint of its label away from hub
    x, y = 0, 1
    far_end = {n - 1: x, n - 2: y}
    edges: list[Edge] = []
    labels: list[int] = []
    next_vertex = 2
    for segment, leaf in zip(segments, leaves):
        anchor = far_end[segment[0]]
        for label in segment[1:] + [leaf]:
            if label in far_end:
                raise InvalidInputError(f"label {label} placed twice while decoding {code.entries}")
            edges.append((anchor, next_vertex))
            labels.append(label)
            far_end[label] = next_vertex
            anchor = next_vertex
            next_vertex += 1

    edges.insert(0, (x, y))
    labels.insert(0, n - 2)
    if next_vertex != n:
        raise InvalidInputError(f"{code.entries} is not a valid code for n={n}")
    return EdgeLabeledTree(n, tuple(edges), tuple(labels))


def degree_label_multiplicity(tree: EdgeLabeledTree) -> Counter:
    """How often each label occurs in S = (n-2,) + encode(tree).

    A vertex of degree d contributes its outgoing label d-1 times.
    """
    return Counter(encode(tree).sequence)


def count_trees(delta: DegreeSequence) -> BigCount:
    """Number of distinct-label trees whose sorted degree sequence is delta."""
    c = delta.census
    return exact_div(
        multinomial(c.alpha) * multinomial(d - 1 for d in delta.degrees),
        delta.n,
        f"T{delta}",
    )


def iter_codes(n: int, start: int = 0, stop: int | None = None) -> Iterator[PrueferCode]:
    """Codes in lexicographic order; [start, stop) slices the n^(n-3) code space."""
    total = n ** (n - 3)
    stop = total if stop is None else min(stop, total)
    codes = itertools.product(range(n), repeat=n - 3)
    for entries in itertools.islice(codes, start, stop):
        yield PrueferCode(n, entries)


def random_code(n: int, rng: random.Random) -> PrueferCode:
    return PrueferCode(n, tuple(rng.randrange(n) for _ in range(n - 3)))


def _check_oracle_size(n: int) -> None:
    if n < 3:
        raise InvalidInputError(f"merged-label trees need n >= 3, got {n}")
    limit = merged_tree_limit()
    if n > limit:
        raise BudgetExceededError(
            f"exhaustive merged-label census refused for n={n} (limit n={limit})",
            estimate=(n - 2) * n ** (n - 3),
            budget=(limit - 2) * limit ** (limit - 3),
        )


def all_merged_trees(n: int, start: int = 0, stop: int | None = None) -> Iterator[tuple[EdgeLabeledTree, int]]:
    """Every (distinct-label tree, merge choice) pair as a merged-label tree of weight 1."""
    _check_oracle_size(n)
    for code in iter_codes(n, start, stop):
        tree = decode(code)
        for choice in range(n - 2):
            yield merged_tree(tree, choice), 1


# Code restrictions describing where the merged label (0) sits relative to y=1 and z=2.
# Tokens are matched on "e1 e2 ... ek " strings.
_ANY = r"(?:\d+ )"
_NOT0 = r"(?:(?!0 )\d+ )"
_NOT01 = r"(?:(?![01] )\d+ )"
_NOT012 = r"(?:(?![012] )\d+ )"

_XYX_CLASSES = {
    1: r"1 {n2} {not0}*", 2: r"1 {n1} {not0}*", 3: r"1 1 {not0}*",
    4: r"1 0 {any}*", 5: r"1 {not0}*1 0 {any}*",
    6: r"{not01}*{n2} 1 0 {any}*", 7: r"{not01}*{n1} 1 0 {any}*",
    8: r"{not01}*{n2} 1 {not0}*1 0 {any}*", 9: r"{not01}*{n1} 1 {not0}*1 0 {any}*",
}
XYX_GROUPS = {"1=3": (1, 3), "2": (2,), "4+5": (4, 5), "6+8": (6, 8), "7+9": (7, 9)}

_XYZX_CLASSES = {
    1: r"1 2 {n2} {not0}*", 2: r"1 2 {n1} {not0}*", 3: r"1 2 1 {not0}*", 4: r"1 2 2 {not0}*",
    5: r"1 2 0 {any}*", 6: r"1 {not0}*1 2 0 {any}*",
    7: r"1 2 {not0}*2 0 {any}*", 8: r"1 {not0}*1 2 {not0}*2 0 {any}*",
}
for _offset, _end in ((8, "{n2}"), (12, "{n1}")):
    _XYZX_CLASSES.update({
        _offset + 1: r"{not012}*" + _end + r" 1 2 0 {any}*",
        _offset + 2: r"{not012}*" + _end + r" 1 {not0}*1 2 0 {any}*",
        _offset + 3: r"{not012}*" + _end + r" 1 2 {not0}*2 0 {any}*",
        _offset + 4: r"{not012}*" + _end + r" 1 {not0}*1 2 {not0}*2 0 {any}*",
    })
XYZX_GROUPS = {"1=3=4": (1, 3, 4), "2": (2,), "5-8": (5, 6, 7, 8), "9-12": (9, 10, 11, 12),
               "13-16": (13, 14, 15, 16)}


@cache
def _compiled_classes(kind: str, n: int) -> tuple[tuple[int, re.Pattern], ...]:
    table = _XYX_CLASSES if kind == "xyx" else _XYZX_CLASSES
    tokens = {"n1": str(n - 1), "n2": str(n - 2), "any": _ANY, "not0": _NOT0,
              "not01": _NOT01, "not012": _NOT012}
    return tuple((number, re.compile(pattern.format(**tokens))) for number, pattern in sorted(table.items()))


def _code_string(code: PrueferCode) -> str:
    return "".join(f"{e} " for e in code.entries)


def xx_code_class(code: PrueferCode) -> int | None:
    """Which of the five xx code classes (label 0 merged with n-2) the code falls in, if any."""
    n, c = code.n, code.entries
    if not c:
        return None
    if 0 not in c:
        return {n - 2: 1, n - 1: 2}.get(c[0])
    if c[0] == 0:
        return 3
    return {n - 2: 4, n - 1: 5}.get(c[c.index(0) - 1])


def xyx_code_class(code: PrueferCode) -> int | None:
    text = _code_string(code)
    return next((number for number, rx in _compiled_classes("xyx", code.n) if rx.fullmatch(text)), None)


def xyzx_code_class(code: PrueferCode) -> int | None:
    text = _code_string(code)
    return next((number for number, rx in _compiled_classes("xyzx", code.n) if rx.fullmatch(text)), None)


def _group_of(number: int | None, groups: dict[str, tuple[int, ...]]) -> str | None:
    if number is None:
        return None
    return next(name for name, members in groups.items() if number in members)


@dataclass
class MergedCensus:
    """Exhaustive weights over all (distinct-label tree, merge choice) pairs of size n."""

    n: int
    tree_counts: Counter = field(default_factory=Counter)
    pattern_weights: dict = field(default_factory=lambda: defaultdict(Counter))
    xx_class_weights: dict = field(default_factory=lambda: defaultdict(Counter))
    xyx_group_weights: dict = field(default_factory=lambda: defaultdict(Counter))
    xyzx_group_weights: dict = field(default_factory=lambda: defaultdict(Counter))

    def weight(self, delta: DegreeSequence, kind: PatternKind,
               end_degrees: tuple[int, int] | None = None) -> int:
        weights = self.pattern_weights.get(delta, Counter())
        if kind is PatternKind.XYX and end_degrees is None:
            return sum(w for (k, _), w in weights.items() if k == kind.value)
        return weights[(kind.value, end_degrees)]

    def xyx_end_weights(self, delta: DegreeSequence) -> dict[tuple[int, int], int]:
        weights = self.pattern_weights.get(delta, Counter())
        return {ends: w for (k, ends), w in weights.items() if k == PatternKind.XYX.value}

    @property
    def total_weight(self) -> int:
        return sum(sum(c.values()) for c in self.pattern_weights.values())


@cache
def merged_census(n: int) -> MergedCensus:
    _check_oracle_size(n)
    result = MergedCensus(n)
    xyx_factor = (n - 2) * (n - 3)
    xyzx_factor = (n - 2) * (n - 3) * (n - 4)
    for code in iter_codes(n):
        tree = decode(code)
        delta = tree.degree_sequence()
        result.tree_counts[delta] += 1
        for pattern in merge_patterns(tree):
            result.pattern_weights[delta][pattern.key] += 1
        xx_class = xx_code_class(code)
        if xx_class is not None:
            result.xx_class_weights[delta][xx_class] += n - 2
        xyx_group = _group_of(xyx_code_class(code), XYX_GROUPS)
        if xyx_group is not None:
            result.xyx_group_weights[delta][xyx_group] += xyx_factor
        if n >= 5:
            xyzx_group = _group_of(xyzx_code_class(code), XYZX_GROUPS)
            if xyzx_group is not None:
                result.xyzx_group_weights[delta][xyzx_group] += xyzx_factor
    logger.info("Merged-label census for n=%s: %s trees, total weight %s",
                n, sum(result.tree_counts.values()), result.total_weight)
    return result
