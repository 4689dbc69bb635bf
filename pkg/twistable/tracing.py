"""
Normal coordinates: corner counts, tracing weights into component paths and
cutting the surface along a multicurve.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx
from networkx.utils import UnionFind

from twistable.classes.surface import MARKED, Triangulation
from twistable.exceptions import MatchingViolation
from twistable.paths import canonical_cycle, is_left

logger = logging.getLogger(__name__)

Region = Tuple


@dataclass(frozen=True)
class TracedCurve:
    """
    Attributes
    ----------
    crossings: Tuple[int, ...]
        canonical cyclic path of the component.
    left: Region
        complementary region touching the curve on its left.
    right: Region
        complementary region touching the curve on its right.
    """

    crossings: Tuple[int, ...]
    left: Region
    right: Region


@dataclass(frozen=True)
class Piece:
    """
    One complementary component of a multicurve.

    Attributes
    ----------
    regions: FrozenSet[Region]
        normal regions making up the component.
    euler_characteristic: int
        of the component with its forgotten point filled in.
    labels: FrozenSet[str]
        boundary labels of the surface lying in the component.
    sides: Tuple[Tuple[int, bool], ...]
        (curve index, left side) for every curve side bounding the component.
    """

    regions: FrozenSet[Region]
    euler_characteristic: int
    labels: FrozenSet[str]
    sides: Tuple[Tuple[int, bool], ...]

    @property
    def boundary(self) -> int:
        return len(self.labels) + len(self.sides)

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic - self.boundary) // 2

    @property
    def complexity(self) -> int:
        return 3 * self.genus + self.boundary - 3

    @property
    def curves(self) -> Tuple[int, ...]:
        return tuple(sorted({curve for curve, _ in self.sides}))


def corner_counts(weights: Sequence[int], triangulation: Triangulation) -> List[int]:
    """Number of normal arcs cutting off every corner, indexed like corners."""
    if len(weights) != triangulation.edge_count:
        raise MatchingViolation(weights, "one weight per edge expected")

    if any(w < 0 for w in weights):
        raise MatchingViolation(weights, "negative weight")

    edge_of = triangulation.edge_of
    counts = []

    for t in range(triangulation.triangle_count):
        w = [weights[edge_of[3 * t + k]] for k in range(3)]
        for k in range(3):
            doubled = w[k - 1] + w[k] - w[(k + 1) % 3]
            if doubled < 0 or doubled % 2:
                raise MatchingViolation(weights)
            counts.append(doubled // 2)

    return counts


def _region_of_segment(side: int, s: int, width: int, counts: Sequence[int]) -> Region:
    t, k = divmod(side, 3)
    c = counts[3 * t + k]

    if s < c:
        return ("R", t, k, s)
    if s == c:
        return ("C", t)
    return ("R", t, (k + 1) % 3, width - s)


def trace(weights: Sequence[int], triangulation: Triangulation) -> List[TracedCurve]:
    """Split normal coordinates into their components, sorted by canonical path."""
    counts = corner_counts(weights, triangulation)
    gluing = triangulation.gluing
    edge_of = triangulation.edge_of

    def width(side):
        return weights[edge_of[side]]

    used = set()
    traced = []

    for side, _ in triangulation.edges:
        for p in range(width(side)):
            if (side, p) in used:
                continue

            xs = []
            left = right = None
            current = (side, p)

            while True:
                out_side, point = current
                used.add(current)
                xs.append(out_side)

                entered = gluing[out_side]
                q = width(entered) - 1 - point
                used.add((entered, q))

                t, k = divmod(entered, 3)
                w = [width(3 * t + j) for j in range(3)]

                if q < counts[3 * t + k]:
                    corner, r = k, q
                    out_local = (k + 2) % 3
                    next_point = w[out_local] - 1 - q
                else:
                    corner = (k + 1) % 3
                    r = w[k] - 1 - q
                    out_local = corner
                    next_point = r

                if left is None:
                    inner = ("R", t, corner, r)
                    if r + 1 < counts[3 * t + corner]:
                        outer = ("R", t, corner, r + 1)
                    else:
                        outer = ("C", t)

                    if is_left(k, out_local):
                        left, right = inner, outer
                    else:
                        left, right = outer, inner

                current = (3 * t + out_local, next_point)
                if current == (side, p):
                    break

            xs = tuple(xs)
            canonical = canonical_cycle(xs, gluing)
            doubled = xs + xs
            same_way = any(
                doubled[i : i + len(xs)] == canonical for i in range(len(xs))
            )

            if not same_way:
                left, right = right, left

            traced.append(TracedCurve(canonical, left, right))

    traced.sort(key=lambda curve: curve.crossings)
    logger.debug("traced %d components from %s", len(traced), weights)

    return traced


def cut(
    weights: Sequence[int],
    triangulation: Triangulation,
    merge: Iterable[int] = (),
) -> List[Piece]:
    """
    Complementary components of the multicurve with the given coordinates;
    curves listed in ``merge`` are glued back rather than cut.
    """
    counts = corner_counts(weights, triangulation)
    curves = trace(weights, triangulation)
    edge_of = triangulation.edge_of

    graph = nx.Graph()
    gluings: Dict[Region, int] = {}

    for t in range(triangulation.triangle_count):
        graph.add_node(("C", t))
        for k in range(3):
            for r in range(counts[3 * t + k]):
                graph.add_node(("R", t, k, r))

    for side, other in triangulation.edges:
        w = weights[edge_of[side]]
        for s in range(w + 1):
            a = _region_of_segment(side, s, w, counts)
            b = _region_of_segment(other, w - s, w, counts)
            graph.add_edge(a, b)
            gluings[a] = gluings.get(a, 0) + 1

    components = [frozenset(c) for c in nx.connected_components(graph)]
    owner = {region: i for i, component in enumerate(components) for region in component}

    union = UnionFind(range(len(components)))
    merge = set(merge)

    for index in merge:
        union.union(owner[curves[index].left], owner[curves[index].right])

    groups: Dict[int, List[int]] = {}
    for i in range(len(components)):
        groups.setdefault(union[i], []).append(i)

    pieces = []

    for members in groups.values():
        regions = frozenset().union(*(components[i] for i in members))
        chi = len(regions) - sum(gluings.get(region, 0) for region in regions)

        labels = set()
        for t in range(triangulation.triangle_count):
            for k in range(3):
                corner = 3 * t + k
                home = ("R", t, k, 0) if counts[corner] else ("C", t)
                if home in regions:
                    labels.add(triangulation.labels[corner])

        if MARKED in labels:
            labels.discard(MARKED)
            chi += 1

        sides = []
        for index, curve in enumerate(curves):
            if index in merge:
                continue
            if curve.left in regions:
                sides.append((index, True))
            if curve.right in regions:
                sides.append((index, False))

        pieces.append(Piece(regions, chi, frozenset(labels), tuple(sides)))

    pieces.sort(key=lambda piece: min(piece.regions))
    return pieces
