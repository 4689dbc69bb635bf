"""
Kernel operations on multicurves and subsurfaces of atlas surfaces.
"""

import logging
from enum import Enum
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence

from twistable.classes.multicurve import CurvePool, NormalMulticurve, Subsurface
from twistable.classes.surface import Surface, SurfaceType
from twistable.exceptions import (
    BudgetExceeded,
    FillsSurface,
    MatchingViolation,
    PeripheralComponent,
    UnknownGenerator,
)
from twistable.paths import (
    Arrangement,
    around_vertex,
    Strand,
    canonical_cycle,
    intersection_count,
    is_left,
    is_peripheral,
    is_primitive,
    reduce_cycle,
    self_intersects,
    twist,
)

logger = logging.getLogger(__name__)


class Relation(str, Enum):
    """How two subsurfaces sit relative to each other."""

    EQUAL = "equal"
    NESTED = "nested"
    CONTAINS = "contains"
    DISJOINT = "disjoint"
    TRANSVERSE = "transverse"

    def __str__(self):  # pragma: no cover
        return self.value


def complexity(s: SurfaceType) -> int:
    return s.complexity


def _circled_label(strand: Strand, surface: Surface) -> str:
    triangulation = surface.triangulation
    t, side_in, side_out = strand.steps(triangulation.gluing)[0]
    vertex = side_in if is_left(side_in, side_out) else side_out
    return triangulation.labels[3 * t + vertex]


def validate_multicurve(
    surface: Surface, weights: Sequence[int], allow_empty: bool = False
) -> NormalMulticurve:
    """
    Accept normal coordinates of a multicurve and return its canonical value.

    Raises
    ------
    MatchingViolation
        corner counts are negative or odd, or two components are parallel.
    PeripheralComponent
        some component bounds a once-punctured disk or a disk.
    """
    multicurve = NormalMulticurve(surface, weights)

    if multicurve.is_empty:
        if allow_empty:
            return multicurve
        raise MatchingViolation(weights, "empty multicurve")

    traced = multicurve.traced
    gluing = surface.triangulation.gluing

    keys = [curve.crossings for curve in traced]
    if len(set(keys)) != len(keys):
        raise MatchingViolation(weights, "parallel components")

    for strand in multicurve.strands:
        if is_peripheral(strand, gluing):
            raise PeripheralComponent(weights, _circled_label(strand, surface))

    return multicurve


def components(m: NormalMulticurve) -> List[NormalMulticurve]:
    return list(m.components)


@lru_cache(maxsize=1 << 16)
def intersection_number(a: NormalMulticurve, b: NormalMulticurve) -> int:
    gluing = a.surface.triangulation.gluing
    return sum(intersection_count(u, v, gluing) for u in a.strands for v in b.strands)


def is_simple_path(crossings, surface: Surface) -> bool:
    """Reduced closed path that is primitive, embedded and neither trivial nor peripheral."""
    gluing = surface.triangulation.gluing
    if not crossings or not is_primitive(crossings):
        return False
    strand = Strand(tuple(crossings))
    return not is_peripheral(strand, gluing) and not self_intersects(strand, gluing)


def curves_from_paths(surface: Surface, paths: Iterable) -> List[NormalMulticurve]:
    """Distinct essential simple curves among reduced closed paths."""
    gluing = surface.triangulation.gluing
    seen = set()
    result = []

    for path in paths:
        if not is_simple_path(path, surface):
            continue
        key = canonical_cycle(tuple(path), gluing)
        if key not in seen:
            seen.add(key)
            result.append(NormalMulticurve.from_crossings(surface, key))

    return sorted(result)


def cut_along(m: NormalMulticurve) -> List[Subsurface]:
    """Complementary components of ``m``, each normalised to its own boundary."""
    result = [Subsurface.from_piece(m, piece) for piece in m.pieces()]

    return sorted(
        result,
        key=lambda x: (x.top_type, sorted(sum(c.weights) for c in x.boundary.components)),
    )


def spanned_subsurface(curves: Iterable[NormalMulticurve]) -> NormalMulticurve:
    """
    Boundary of a regular neighbourhood of the union of ``curves``, without
    its trivial and peripheral components.

    Raises
    ------
    FillsSurface
        nothing essential is left, the curves fill.
    """
    curves = list(curves)
    surface = curves[0].surface

    strands = {}
    for curve in curves:
        for strand in curve.strands:
            strands.setdefault(strand.crossings, strand)

    arrangement = Arrangement([strands[k] for k in sorted(strands)], surface.triangulation)
    boundary = curves_from_paths(surface, arrangement.boundary_walks())

    if not boundary:
        raise FillsSurface("curves fill the surface", curves=[c.to_dict() for c in curves])

    return NormalMulticurve.union(surface, boundary)


def boundary_of(x: Subsurface) -> NormalMulticurve:
    return x.boundary


def apply_twist(word: Sequence[int], m: NormalMulticurve) -> NormalMulticurve:
    """
    Apply a twist word letter by letter: ``k`` is a left twist about generator
    ``k`` (1-based), ``-k`` its inverse.

    Raises
    ------
    UnknownGenerator
        a letter points outside the generator atlas.
    """
    surface = m.surface
    generators = surface.generators

    for letter in word:
        if letter == 0 or abs(letter) > len(generators):
            raise UnknownGenerator(letter, len(generators))

    if m.is_empty:
        return m

    strands = list(m.strands)
    for letter in word:
        core = generators[abs(letter) - 1].strand
        power = 1 if letter > 0 else -1
        strands = [Strand(twist(strand, core, power, surface.triangulation)) for strand in strands]

    return NormalMulticurve.from_strands(surface, strands)


def generate_pool(
    seeds: Iterable[NormalMulticurve],
    word_length: int,
    intersection_cap: int,
    size_cap: int,
    strict: bool = False,
) -> CurvePool:
    """
    Close the seeds under generator twists up to ``word_length`` letters,
    keeping images that meet every generator at most ``intersection_cap`` times.
    """
    seeds = sorted(set(seeds))
    assert seeds
    assert word_length >= 0

    surface = seeds[0].surface
    generators = surface.generators
    letters = [k for i in range(1, len(generators) + 1) for k in (i, -i)]
    budget = {"word_length": word_length, "intersection_cap": intersection_cap, "size_cap": size_cap}

    pool = set(seeds)
    frontier = list(seeds)
    complete = True

    for depth in range(word_length):
        following = set()

        for curve in frontier:
            for letter in letters:
                image = apply_twist([letter], curve)
                if image in pool or image in following:
                    continue
                if any(intersection_number(image, g) > intersection_cap for g in generators):
                    continue
                following.add(image)

        if len(pool) + len(following) > size_cap:
            room = size_cap - len(pool)
            following = set(sorted(following)[: max(room, 0)])
            complete = False

        pool |= following
        frontier = sorted(following)
        logger.debug("pool depth %d: %d new curves", depth + 1, len(following))

        if not complete:
            break

    if not complete:
        logger.warning("%s: pool size cap %d reached", surface.name, size_cap)
        if strict:
            raise BudgetExceeded("pool size cap reached", size_cap=size_cap, surface=surface.name)

    logger.info("%s: pool of %d curves", surface.name, len(pool))
    return CurvePool(surface, pool, budget, complete)


def _regions(x: Subsurface, union: NormalMulticurve) -> Optional[FrozenSet]:
    if x.is_whole:
        return None

    own = {strand.crossings for strand in x.boundary.strands}
    keys = [strand.crossings for strand in union.strands]
    merge = [i for i, key in enumerate(keys) if key not in own]
    wanted = {(keys.index(key), left) for key, left in x.sides}

    for piece in union.pieces(merge):
        if wanted & set(piece.sides):
            return piece.regions

    raise AssertionError("subsurface not found in the refined cut")


def relation(x: Subsurface, y: Subsurface) -> Relation:
    if x == y:
        return Relation.EQUAL
    if x.is_whole:
        return Relation.CONTAINS
    if y.is_whole:
        return Relation.NESTED

    if intersection_number(x.boundary, y.boundary):
        return Relation.TRANSVERSE

    union = NormalMulticurve.union(x.surface, [x.boundary, y.boundary])
    rx, ry = _regions(x, union), _regions(y, union)

    if rx == ry:
        return Relation.EQUAL
    if rx <= ry:
        return Relation.NESTED
    if ry <= rx:
        return Relation.CONTAINS
    if not rx & ry:
        return Relation.DISJOINT

    return Relation.TRANSVERSE


def contains_curve(x: Subsurface, c: NormalMulticurve) -> bool:
    """Whether the curve ``c`` is essential and non-peripheral inside ``x``."""
    if x.is_whole:
        return True
    if c in x.boundary or intersection_number(c, x.boundary):
        return False

    union = NormalMulticurve.union(x.surface, [x.boundary, c])
    index = union.index_of(c)

    return union.traced[index].left in _regions(x, union)


def complement_of(a: NormalMulticurve, curve: NormalMulticurve) -> Subsurface:
    """The component of S minus (a without ``curve``) that contains ``curve``."""
    index = a.index_of(curve)
    assert index is not None

    for piece in a.pieces(merge=[index]):
        if a.traced[index].left in piece.regions:
            return Subsurface.from_piece(a, piece)

    raise AssertionError("curve lost while merging")


def _positions(arrangement: Arrangement, a: int) -> Dict[int, int]:
    return {index: position for position, (_, index) in enumerate(arrangement.along[a])}


def _inverse(crossings: Sequence[int], gluing: Sequence[int]) -> List[int]:
    return [gluing[x] for x in reversed(crossings)]


def _end_loops(arrangement: Arrangement, u: Strand, x: Subsurface) -> List[List[int]]:
    """Bands from the punctures an arc ends at to the boundary of X."""
    boundary = x.boundary
    gluing = arrangement.gluing
    xs = list(u.crossings)
    along = arrangement.along[0]
    paths = []

    ends = [
        (along[0][1], xs[: along[0][0]], u.start, 1),
        (along[-1][1], _inverse(xs[along[-1][0] :], gluing), u.end, -1),
    ]

    for index, head, corner, sign in ends:
        g = arrangement.other_at(index, 0)
        facing = x.faces(boundary.components[g - 1])
        if (sign * arrangement.sign_at(index, 0) > 0) not in facing:
            continue

        for direction in (1, -1):
            for clockwise in (True, False):
                paths.append(
                    head
                    + arrangement.loop_from(g, index, direction)
                    + _inverse(head, gluing)
                    + list(around_vertex(corner, gluing, clockwise))
                )

    return paths


def surgery_paths(u: Strand, x: Subsurface) -> List[List[int]]:
    """
    Closed paths obtained by banding arcs of ``u`` inside X to the boundary
    of X. For an arc, the end segments are banded around their punctures too.
    """
    boundary = x.boundary
    triangulation = x.surface.triangulation
    gluing = triangulation.gluing

    arrangement = Arrangement([u] + list(boundary.strands), triangulation)
    order = arrangement.order_on(0)
    k = len(order)
    positions = [_positions(arrangement, a) for a in range(len(arrangement.strands))]
    paths = [] if u.cyclic or not k else _end_loops(arrangement, u, x)

    for start in range(k if u.cyclic else k - 1):
        stop = (start + 1) % k
        p, q = order[start], order[stop]
        g1, g2 = arrangement.other_at(p, 0), arrangement.other_at(q, 0)

        facing = x.faces(boundary.components[g1 - 1])
        if (arrangement.sign_at(p, 0) < 0) not in facing:
            continue

        delta = arrangement.partial(0, start, stop, 1)

        if g1 == g2:
            for direction in (1, -1):
                back = arrangement.partial(g1, positions[g1][q], positions[g1][p], direction)
                paths.append(delta + back)
        else:
            for d1 in (1, -1):
                for d2 in (1, -1):
                    paths.append(
                        delta
                        + arrangement.loop_from(g2, q, d2)
                        + _inverse(delta, gluing)
                        + arrangement.loop_from(g1, p, d1)
                    )

    return [list(reduce_cycle(path, gluing)) for path in paths]


def project_curves(a: NormalMulticurve, x: Subsurface) -> List[NormalMulticurve]:
    """
    Curves of X obtained from ``a``: components lying in X are kept, arcs of
    ``a`` in X are banded to the boundary of X.
    """
    if x.is_whole:
        return list(a.components)

    result = []
    for component in a.components:
        if not intersection_number(component, x.boundary):
            if contains_curve(x, component):
                result.append(component)
            continue

        for curve in curves_from_paths(x.surface, surgery_paths(component.strand, x)):
            if not intersection_number(curve, x.boundary) and contains_curve(x, curve):
                result.append(curve)

    logger.debug("projected %s to %s: %d curves", a, x, len(result))
    return sorted(set(result))
