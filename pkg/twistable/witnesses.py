"""
Witness subsurfaces of each graph family, and the search for pairwise
disjoint witnesses that decides rank and hyperbolicity.
"""

import logging
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product
from typing import FrozenSet, Iterable, List, Tuple, Union

import networkx as nx

from twistable.classes.decomposition import (
    AbstractDecomposition,
    AbstractPiece,
    WitnessPredicate,
    canonical,
    labels_of,
)
from twistable.classes.graph import FAMILIES, GraphSpec
from twistable.classes.multicurve import Subsurface
from twistable.classes.surface import SurfaceType
from twistable.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

Family = Union[str, GraphSpec]


def _resolve(family: Family, delta: Iterable[str] = ()) -> Tuple[str, FrozenSet[str]]:
    if isinstance(family, GraphSpec):
        return family.witness_family, family.delta

    name = family.replace(" ", "")
    if name.startswith("k_of"):
        name = name[4:].strip("():")
    if name.startswith("arc_companion"):
        inside = name[len("arc_companion") :].strip("():")
        labels = [x for x in inside.split(",") if x]
        return "arc_companion", frozenset(labels or delta)

    if name not in FAMILIES:
        raise ConfigurationError(f"unknown family {family!r}", family=family)

    return name, frozenset(delta)


def predicate(family: Family, genus: int, delta: Iterable[str] = ()) -> WitnessPredicate:
    name, labels = _resolve(family, delta)
    return WitnessPredicate(name, genus, len(labels))


def is_witness(family: Family, x: Subsurface, delta: Iterable[str] = ()) -> bool:
    """
    Whether the subsurface ``x`` belongs to the witness set of ``family``;
    a k_of(G) graph has the witnesses of G.
    """
    name, labels = _resolve(family, delta)
    rule = WitnessPredicate(name, x.surface.stype.genus, len(labels))

    if name == "arc_companion" and not labels <= x.labels:
        return False

    complement = []
    if not x.is_whole:
        for piece in x.boundary.pieces():
            if piece.regions != x.piece.regions:
                complement.append((piece.genus, labels_of(labels, piece.labels)))

    return rule(x.genus, len(x.piece.sides), labels_of(labels, x.labels), sorted(complement))


def _piece_types(chi: int, genus: int, k: int, smallest=(0, 0)) -> List[List[Tuple[int, int]]]:
    """Non-decreasing k-tuples of (genus, boundary) with complexity >= 1 and total Euler characteristic chi."""
    if k == 0:
        return [[]] if chi == 0 else []

    result = []
    for g in range(smallest[0], genus + 1):
        b_min = smallest[1] if g == smallest[0] else 0
        # the other k - 1 pieces need at least -1 each
        for b in range(b_min, 3 - 2 * g - chi - k + 1):
            piece_chi = 2 - 2 * g - b
            if 3 * g + b - 3 < 1:
                continue
            for rest in _piece_types(chi - piece_chi, genus, k - 1, (g, b)):
                result.append([(g, b)] + rest)

    return result


def _connected(k: int, edges) -> bool:
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(k))
    graph.add_edges_from(edges)
    return nx.is_connected(graph)


@lru_cache(maxsize=None)
def _configs(name: str, stype: SurfaceType, k: int, delta: int) -> Tuple[AbstractDecomposition, ...]:
    rule = WitnessPredicate(name, stype.genus, delta)
    chi = stype.euler_characteristic
    slots = [(i, j) for i in range(k) for j in range(i, k)]
    found = set()

    for types in _piece_types(chi, stype.genus, k):
        count = stype.genus - sum(g for g, _ in types) + k - 1
        if count < k - 1:
            continue

        for edges in combinations_with_replacement(slots, count):
            degree = [0] * k
            for i, j in edges:
                degree[i] += 1
                degree[j] += 1

            free = [b - d for (_, b), d in zip(types, degree)]
            if min(free) < 0 or sum(free) != stype.boundary:
                continue
            if not _connected(k, edges):
                continue

            for split in product(*(range(n + 1) for n in free)):
                if sum(split) != delta:
                    continue

                pieces = [
                    AbstractPiece(g, degree[i], (split[i], free[i] - split[i]))
                    for i, (g, _) in enumerate(types)
                ]
                decomposition = AbstractDecomposition(tuple(pieces), tuple(edges))

                if all(rule.holds(decomposition, i) for i in range(k)):
                    found.add(canonical(pieces, list(edges), permutations(range(k))))

    return tuple(sorted(found, key=lambda d: (d.pieces, d.edges)))


def disjoint_witness_configs(family: Family, s: SurfaceType, k: int, delta: Iterable[str] = ()) -> List[AbstractDecomposition]:
    """
    Every way, up to relabeling, of cutting ``s`` into ``k`` pieces that are
    all witnesses. Witness sets are closed under enlargement, so k pairwise
    disjoint witnesses exist exactly when such a cut exists; an empty list is
    a proof that they do not.
    """
    assert k >= 1
    name, labels = _resolve(family, delta)

    if k > -s.euler_characteristic:
        return []

    result = list(_configs(name, s, k, len(labels)))
    logger.debug("%s on %s: %d configurations of %d witnesses", name, s.name, len(result), k)

    return result


def rank(family: Family, s: SurfaceType, delta: Iterable[str] = ()) -> int:
    """Largest number of pairwise disjoint witnesses."""
    k = 1
    while disjoint_witness_configs(family, s, k + 1, delta):
        k += 1

    logger.info("rank of %s on %s: %d", family, s.name, k)
    return k


def hyperbolicity_criterion(family: Family, s: SurfaceType, delta: Iterable[str] = ()) -> bool:
    """No two disjoint witnesses, hence the family graph on ``s`` is Gromov hyperbolic."""
    if s.is_sporadic:
        logger.warning("%s is sporadic; witness set read with the general rule", s.name)
    return rank(family, s, delta) == 1
