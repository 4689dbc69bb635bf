"""
Distances in the Farey graph, through the Stern-Brocot ancestors of a slope.
"""

from typing import List, Tuple

import networkx as nx

Slope = Tuple[int, int]

INFINITY: Slope = (1, 0)


def normalise(slope: Slope) -> Slope:
    p, q = slope
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return p, q


def _egcd(a: int, b: int) -> Tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def to_infinity(origin: Slope, slope: Slope) -> Slope:
    """Image of ``slope`` under an element of SL(2, Z) sending ``origin`` to 1/0."""
    p, q = origin
    g, a, b = _egcd(p, q)
    assert g == 1, "slopes must be primitive"

    r, s = slope
    return normalise((a * r + b * s, p * s - q * r))


def ladder(target: Slope) -> List[Slope]:
    """Stern-Brocot descent from the two integers around ``target`` down to it."""
    x, y = normalise(target)
    assert y > 0

    n = x // y
    lower, upper = (n, 1), (n + 1, 1)
    path = [lower, upper]

    while (x, y) not in (lower, upper):
        mediant = (lower[0] + upper[0], lower[1] + upper[1])
        path.append(mediant)

        if x * mediant[1] > mediant[0] * y:
            lower = mediant
        else:
            upper = mediant

    return path


def adjacent(a: Slope, b: Slope) -> bool:
    return abs(a[0] * b[1] - a[1] * b[0]) == 1


def geodesic(a: Slope, b: Slope) -> List[Slope]:
    """A shortest Farey path from ``a`` to ``b``, in the coordinates sending ``a`` to 1/0."""
    x = to_infinity(a, b)

    if x == INFINITY:
        return [INFINITY]
    if x[1] == 1:
        return [INFINITY, x]

    graph = nx.Graph()
    nodes = [INFINITY] + ladder(x)
    graph.add_nodes_from(nodes)

    for i, u in enumerate(nodes):
        for v in nodes[i + 1 :]:
            if adjacent(u, v):
                graph.add_edge(u, v)

    return nx.shortest_path(graph, INFINITY, x)


def distance(a: Slope, b: Slope) -> int:
    return len(geodesic(normalise(a), normalise(b))) - 1
