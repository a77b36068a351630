"""Perimeters of proper polycubes in n-1 and n-2 dimensions, read off their adjacency trees."""
from collections import Counter
from collections.abc import Iterable

import networkx as nx

from perimeter_app.lib.core_math import DegreeSequence
from perimeter_app.lib.errors import FormulaMisuseError, InvalidInputError
from perimeter_app.lib.labeled_trees import EdgeLabeledTree, PatternClass, PatternKind, classify


def _half(value: int, what: str) -> int:
    if value % 2:
        raise FormulaMisuseError(f"{what}: {value} is odd and cannot be halved")
    return value // 2


def t_star(n: int, d: int) -> int:
    """Perimeter of a polycube whose cells share no perimeter sites: 2dn - 2(n-1)."""
    if n < 1 or d < 1:
        raise InvalidInputError(f"t_star needs n >= 1 and d >= 1, got n={n}, d={d}")
    return 2 * d * n - 2 * (n - 1)


def t1(delta: DegreeSequence) -> int:
    return t1_from_square_sum(delta.n, delta.square_sum)


def t1_from_square_sum(n: int, square_sum: int) -> int:
    """t1 needs only the sum of squared degrees."""
    return (2 * n - 1) * (n - 1) - _half(square_sum, f"t1 for n={n}, sum of squares {square_sum}")


def t2(delta: DegreeSequence) -> int:
    """Perimeter of an (n-2)-dimensional proper polycube whose tree has no error pattern.

    Equals t_star(n, n-2) minus one shared site per pair of edges meeting at a vertex.
    """
    n = delta.n
    if n < 4:
        raise InvalidInputError(f"t2 is defined for n >= 4, got n={n}")
    return (2 * n * n - 5 * n + 1) - _half(delta.square_sum, f"t2{delta}")


def t_xx(delta: DegreeSequence) -> int:
    return t2(delta) + 1


def t_xyx(delta: DegreeSequence, degree_a: int, degree_b: int) -> int:
    # degrees are taken in the spanning tree, where the closing edge of the square is absent
    for degree in (degree_a, degree_b):
        if not 1 <= degree <= delta.n - 1:
            raise InvalidInputError(f"path-end degree {degree} outside 1..{delta.n - 1}")
    return t2(delta) - (degree_a - 1) - (degree_b - 1)


def t_xyzx(delta: DegreeSequence) -> int:
    return t2(delta) - 1


def predict(delta: DegreeSequence, pattern: PatternClass) -> int:
    """Perimeter of the polycube a merged tree describes when its repeated dimension is folded back.

    XYX and XYZX take the orientation that closes a loop or brings the path ends next to each other;
    the opposite orientation keeps the default t2.
    """
    if pattern.kind is PatternKind.FREE:
        return t2(delta)
    if pattern.kind is PatternKind.XX:
        return t_xx(delta)
    if pattern.kind is PatternKind.XYX:
        assert pattern.end_degrees is not None
        return t_xyx(delta, *pattern.end_degrees)
    return t_xyzx(delta)


Cell = tuple[int, ...]


def adjacency_graph(cells: Iterable[Cell]) -> nx.Graph:
    """Face-adjacency graph of a polycube; each edge records the axis it runs along."""
    cells = list(cells)
    graph = nx.Graph()
    graph.add_nodes_from(cells)
    occupied = set(cells)
    for cell in cells:
        for axis in range(len(cell)):
            neighbour = cell[:axis] + (cell[axis] + 1,) + cell[axis + 1:]
            if neighbour in occupied:
                graph.add_edge(cell, neighbour, axis=axis)
    return graph


def _spanning_tree_perimeter(tree: nx.Graph, axes: list[int]) -> int:
    order = sorted(tree.nodes)
    index = {cell: k for k, cell in enumerate(order)}
    edges = sorted(tree.edges(data="axis"), key=lambda e: (index[e[0]], index[e[1]]))
    n = len(order)
    repeated = [axis for axis, count in Counter(axis for _, _, axis in edges).items() if count > 1]
    if not repeated:
        rank = {axis: k for k, axis in enumerate(sorted(axes))}
        labeled = EdgeLabeledTree(n, tuple((index[a], index[b]) for a, b, _ in edges),
                                  tuple(rank[axis] for _, _, axis in edges))
        return t1(labeled.degree_sequence())

    if len(repeated) != 1 or len(axes) != n - 2:
        raise InvalidInputError(f"perimeter laws cover proper dimensions n-1 and n-2 only: {order}")
    x = repeated[0]
    rank = {axis: k for k, axis in enumerate([x] + sorted(a for a in axes if a != x))}
    labeled = EdgeLabeledTree(n, tuple((index[a], index[b]) for a, b, _ in edges),
                              tuple(rank[axis] for _, _, axis in edges))
    delta = labeled.degree_sequence()
    pattern = classify(labeled)
    if pattern.kind in (PatternKind.FREE, PatternKind.XX):
        return predict(delta, pattern)

    first, second = [(a, b) for a, b, axis in edges if axis == x]
    _, near1, near2 = min(
        (nx.shortest_path_length(tree, u, w), u, w) for u in first for w in second
    )
    far1 = first[1] if first[0] == near1 else first[0]
    far2 = second[1] if second[0] == near2 else second[0]
    # walking far1 -> near1 -> ... -> near2 -> far2, a fold reverses direction along x
    folded = (near1[x] - far1[x]) != (far2[x] - near2[x])
    return predict(delta, pattern) if folded else t2(delta)


def tree_perimeters(cells: Iterable[Cell]) -> set[int]:
    """Predicted perimeter from every spanning tree of a proper polycube in n-1 or n-2 dimensions.

    All spanning trees of one polycube must agree, so a healthy result has exactly one element.
    """
    graph = adjacency_graph(cells)
    axes = sorted({axis for _, _, axis in graph.edges(data="axis")})
    return {
        _spanning_tree_perimeter(tree, axes)
        for tree in nx.SpanningTreeIterator(graph)
    }
