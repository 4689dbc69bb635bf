"""
Graphs of multicurves: vertex and adjacency rules per family, flip moves,
pool-restricted balls and distances, tight geodesics and pants completion.
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from twistable import farey
from twistable.atlas import decode_slope
from twistable.classes.graph import Ball, Distance, GraphSpec, TightGeodesic
from twistable.classes.multicurve import CurvePool, NormalMulticurve, Subsurface
from twistable.classes.surface import Surface
from twistable.exceptions import (
    CompletionFailed,
    Disconnected,
    FillsSurface,
    OracleFailure,
    PoolTooSmall,
    SpanDegenerate,
)
from twistable.paths import Arrangement, reduce_cycle, twist
from twistable.surface_core import (
    Relation,
    complement_of,
    contains_curve,
    curves_from_paths,
    cut_along,
    generate_pool,
    intersection_number,
    project_curves,
    relation,
    spanned_subsurface,
)
from twistable.witnesses import is_witness

logger = logging.getLogger(__name__)

SPORADIC_SEP = ("S1,2", "S2,0", "S2,1")

_min_sep: Dict[str, int] = {}


def _union(surface: Surface, curves: Iterable[NormalMulticurve]) -> NormalMulticurve:
    return NormalMulticurve.union(surface, curves)


def is_separating(curve: NormalMulticurve) -> bool:
    return len(curve.pieces()) == 2


def minimal_intersection(x: Subsurface) -> int:
    """Intersection of Farey neighbours in a complexity one subsurface."""
    return 1 if x.genus == 1 else 2


def _curve_adjacent(x: Subsurface, alpha: NormalMulticurve, beta: NormalMulticurve) -> bool:
    if alpha == beta:
        return False
    crossing = intersection_number(alpha, beta)
    if x.complexity == 1:
        return crossing == minimal_intersection(x)
    return crossing == 0


def _arc_companion_vertex(spec: GraphSpec, m: NormalMulticurve) -> bool:
    if len(m) not in (1, 2):
        return False

    for x in cut_along(m):
        if x.is_pants and len(x.piece.curves) == len(m) and x.labels & spec.delta:
            return True
    return False


def is_vertex(spec: GraphSpec, m: NormalMulticurve) -> bool:
    if m.is_empty:
        return False

    family = spec.family
    genus = spec.surface.stype.genus

    if family == "curve_graph":
        return m.is_curve
    if family == "sep":
        return m.is_curve and is_separating(m)
    if family == "nonsep":
        return m.is_curve and not is_separating(m)
    if family == "pants":
        return all(x.is_pants for x in cut_along(m))
    if family == "cut_system":
        pieces = m.pieces()
        return len(m) == genus and len(pieces) == 1 and pieces[0].genus == 0
    if family == "k_of":
        return not any(is_witness(spec, x) for x in cut_along(m))
    if family == "arc_companion":
        return _arc_companion_vertex(spec, m)

    raise AssertionError(f"unknown family {family}")


def min_sep_intersection(surface: Surface, pool: Optional[CurvePool] = None) -> int:
    """Least positive intersection between separating curves of the pool, cached per surface."""
    if surface.name in _min_sep:
        return _min_sep[surface.name]

    if pool is None:
        pool = generate_pool(surface.generators, 2, 12, 400)

    separating = [c for c in pool if is_separating(c)]
    counts = [
        intersection_number(a, b)
        for i, a in enumerate(separating)
        for b in separating[i + 1 :]
    ]
    positive = [n for n in counts if n > 0]

    if not positive:
        raise OracleFailure("no intersecting separating curves in pool", surface=surface.name)

    _min_sep[surface.name] = min(positive)
    logger.info("%s: minimal separating intersection %d", surface.name, _min_sep[surface.name])

    return _min_sep[surface.name]


def _differ_by_one(a: NormalMulticurve, b: NormalMulticurve):
    removed = [c for c in a.components if c not in b]
    added = [c for c in b.components if c not in a]
    if len(a) == len(b) and len(removed) == 1 and len(added) == 1:
        return removed[0], added[0]
    return None


def adjacent(spec: GraphSpec, a: NormalMulticurve, b: NormalMulticurve) -> bool:
    if a == b:
        return False

    family = spec.family
    surface = spec.surface

    if family in ("curve_graph", "sep", "nonsep", "arc_companion"):
        crossing = intersection_number(a, b)

        if family == "arc_companion":
            return crossing <= spec.bound
        if family == "nonsep" and surface.stype.genus == 1:
            return crossing <= 1
        if family == "sep" and surface.name in SPORADIC_SEP:
            return crossing <= min_sep_intersection(surface)
        if surface.complexity == 1:
            return crossing == minimal_intersection(Subsurface.whole(surface))
        return crossing == 0

    if family == "k_of":
        small, large = (a, b) if len(a) < len(b) else (b, a)
        if len(large) == len(small) + 1 and all(c in large for c in small):
            return True

    swap = _differ_by_one(a, b)
    if swap is None:
        return False

    alpha, beta = swap
    if family == "cut_system":
        return intersection_number(alpha, beta) == 1

    x = complement_of(a, alpha)
    return contains_curve(x, beta) and _curve_adjacent(x, alpha, beta)


def _flips(spec: GraphSpec, a: NormalMulticurve, pool: CurvePool) -> Set[NormalMulticurve]:
    surface = spec.surface
    result = set()

    for alpha in a.components:
        others = [c for c in a.components if c != alpha]
        x = complement_of(a, alpha)

        for beta in pool:
            if beta in a or not contains_curve(x, beta) or not _curve_adjacent(x, alpha, beta):
                continue
            b = _union(surface, others + [beta])
            if is_vertex(spec, b):
                result.add(b)

    return result


def flip_neighbors(spec: GraphSpec, a: NormalMulticurve, pool: CurvePool) -> Set[NormalMulticurve]:
    """
    Neighbours of a vertex of K_G inside the pool: curves added, curves
    removed and flips of one curve inside its complementary component.
    """
    surface = spec.surface
    result = _flips(spec, a, pool)

    for c in pool:
        if c not in a and intersection_number(c, a) == 0:
            result.add(_union(surface, list(a.components) + [c]))

    if len(a) > 1:
        for alpha in a.components:
            b = _union(surface, [c for c in a.components if c != alpha])
            if is_vertex(spec, b):
                result.add(b)

    return result


def _replacements(spec: GraphSpec, a: NormalMulticurve, pool: CurvePool) -> Set[NormalMulticurve]:
    surface = spec.surface
    result = set()

    for alpha in a.components:
        others = [c for c in a.components if c != alpha]
        for beta in pool:
            if beta in a or intersection_number(alpha, beta) != 1:
                continue
            if any(intersection_number(beta, c) for c in others):
                continue
            b = _union(surface, others + [beta])
            if is_vertex(spec, b):
                result.add(b)

    return result


def curve_vertices(spec: GraphSpec, pool: CurvePool) -> List[NormalMulticurve]:
    """Vertices of a curve-like family that the pool offers."""
    singles = [c for c in pool if is_vertex(spec, c)]

    if spec.family != "arc_companion":
        return singles

    curves = list(pool)
    pairs = []
    for i, c in enumerate(curves):
        for d in curves[i + 1 :]:
            if intersection_number(c, d) == 0:
                pair = _union(spec.surface, [c, d])
                if is_vertex(spec, pair):
                    pairs.append(pair)

    return sorted(set(singles) | set(pairs))


def neighbors(
    spec: GraphSpec,
    v: NormalMulticurve,
    pool: CurvePool,
    candidates: Optional[Sequence[NormalMulticurve]] = None,
) -> List[NormalMulticurve]:
    if spec.family == "k_of":
        found = flip_neighbors(spec, v, pool)
    elif spec.family == "pants":
        found = _flips(spec, v, pool)
    elif spec.family == "cut_system":
        found = _replacements(spec, v, pool)
    else:
        if candidates is None:
            candidates = curve_vertices(spec, pool)
        found = [c for c in candidates if adjacent(spec, v, c)]

    return sorted(set(found))


def ball(
    spec: GraphSpec,
    center: NormalMulticurve,
    radius: int,
    pool: CurvePool,
    strict: bool = False,
    cap: Optional[int] = None,
) -> Ball:
    """
    Breadth first exploration of the pool-restricted graph around ``center``.

    A vertex is complete when it was expanded, its neighbour list was not
    cut at ``cap`` and the pool itself was not cut at its size cap.
    Vertices on the last sphere are never expanded.
    """
    assert radius >= 0
    assert cap is None or cap >= 1
    assert is_vertex(spec, center), "center is not a vertex"

    candidates = None
    if spec.family not in ("k_of", "pants", "cut_system"):
        candidates = curve_vertices(spec, pool)

    graph = nx.Graph()
    graph.add_node(center)
    complete = {center: False}
    frontier = [center]

    for depth in range(radius):
        following = []

        for v in frontier:
            found = neighbors(spec, v, pool, candidates)
            truncated = cap is not None and len(found) > cap
            if truncated:
                found = found[:cap]
            complete[v] = pool.complete and not truncated

            if v == center and not found:
                logger.warning("%s: center has no neighbours in the pool", spec)
                if strict:
                    raise PoolTooSmall("center has no pool neighbours", center=center.to_dict())

            for u in found:
                if u not in graph:
                    following.append(u)
                    complete[u] = False
                graph.add_edge(v, u)

        frontier = sorted(set(following))
        logger.debug("ball depth %d: %d new vertices", depth + 1, len(frontier))

        if not frontier:
            break

    distances = nx.single_source_shortest_path_length(graph, center)
    budget = {**pool.budget, "complete": pool.complete, "neighbour_cap": cap}
    return Ball(spec, center, radius, graph, dict(distances), complete, budget)


def _atlas_slope(curve: NormalMulticurve) -> farey.Slope:
    return farey.normalise(decode_slope(curve.surface, curve.weights))


def _dual_candidates(mu: NormalMulticurve, other: NormalMulticurve, x: Subsurface) -> List[NormalMulticurve]:
    """Curves of X meeting ``mu`` minimally, closed up from arcs of ``other`` along ``mu``."""
    surface = x.surface
    triangulation = surface.triangulation
    arrangement = Arrangement([other.strand, mu.strand], triangulation)
    order = arrangement.order_on(0)
    on_mu = {index: position for position, (_, index) in enumerate(arrangement.along[1])}
    k = len(order)
    paths = []

    for start in range(k):
        for span in (1, 2):
            stop = (start + span) % k
            delta = arrangement.partial(0, start, stop, 1)
            for direction in (1, -1):
                back = arrangement.partial(1, on_mu[order[stop]], on_mu[order[start]], direction)
                paths.append(reduce_cycle(delta + back, triangulation.gluing))

    m = minimal_intersection(x)
    return [
        c
        for c in curves_from_paths(surface, paths)
        if intersection_number(c, mu) == m and contains_curve(x, c)
    ]


def relative_slopes(x: Subsurface, curves: Sequence[NormalMulticurve]) -> List[farey.Slope]:
    """
    Slopes of curves of a complexity one subsurface against a reference pair
    built from the first curve: mu = curves[0] is 1/0, a dual curve lambda is
    0/1 and its image under the twist about mu, of slope k/1 with k = 1 on
    one-holed tori and k = 2 on four-holed spheres, fixes the sign.
    """
    assert x.complexity == 1
    mu = curves[0]
    m = minimal_intersection(x)

    crossing = [c for c in curves if intersection_number(c, mu)]
    if not crossing:
        return [farey.INFINITY for _ in curves]

    duals = _dual_candidates(mu, crossing[0], x)
    if not duals:
        raise OracleFailure("no dual curve found", subsurface=x.to_dict())

    lam = min(duals)
    nu = NormalMulticurve.from_crossings(
        x.surface, twist(lam.strand, mu.strand, 1, x.surface.triangulation)
    )

    slopes = []
    for c in curves:
        q = intersection_number(c, mu) // m
        p = intersection_number(c, lam) // m
        if q == 0:
            slopes.append(farey.INFINITY)
            continue
        if intersection_number(c, nu) != m * abs(p - m * q):
            p = -p
        slopes.append(farey.normalise((p, q)))

    return slopes


def farey_geodesic(a: NormalMulticurve, b: NormalMulticurve, x: Subsurface) -> List[NormalMulticurve]:
    """
    Curves of a geodesic from ``a`` to ``b`` in a complexity one subsurface,
    stepping each time to a neighbour produced by banding ``b`` along the
    current curve.
    """
    path = [a]
    remaining = farey.distance(*relative_slopes(x, [a, b]))

    while remaining > 1:
        current = path[-1]
        steps = _dual_candidates(current, b, x)
        slopes = relative_slopes(x, [a, b] + steps)
        target = slopes[1]

        closer = [c for c, s in zip(steps, slopes[2:]) if farey.distance(s, target) == remaining - 1]
        if not closer:
            raise OracleFailure("no neighbour closer to the target", remaining=remaining)

        path.append(min(closer))
        remaining -= 1

    if a != b:
        path.append(b)
    return path


def _pieces_inside(x: Subsurface, curve: NormalMulticurve) -> List[Subsurface]:
    carrier = _union(x.surface, [x.boundary, curve]) if not x.is_whole else curve
    return [
        y
        for y in cut_along(carrier)
        if y.complexity >= 1 and relation(y, x) in (Relation.NESTED, Relation.EQUAL)
    ]


def _near(a: NormalMulticurve, b: NormalMulticurve, x: Subsurface) -> Optional[Tuple[int, Tuple]]:
    """Exact distance in C(X) when it is at most two, with a witnessing path."""
    if a == b:
        return 0, (a,)
    if intersection_number(a, b) == 0:
        return 1, (a, b)

    try:
        span = spanned_subsurface([a, b])
    except FillsSurface:
        return None

    for c in span.components:
        if contains_curve(x, c):
            return 2, (a, c, b)
    return None


def curve_distance(
    a: NormalMulticurve,
    b: NormalMulticurve,
    x: Subsurface,
    depth: int = 3,
    with_path: bool = False,
) -> Distance:
    """
    Distance between two curves of X in the curve graph of X. Exact up to
    two and on complexity one subsurfaces; otherwise a lower bound of three
    with the best path found through projections of ``b``. On complexity
    one subsurfaces the full geodesic is built only when ``with_path`` is set.

    When the search finds no path within ``depth`` the upper bound comes
    from the intersection number, 2 log2 i(a, b) + 2, and the path is empty.
    """
    assert x.complexity >= 1

    if a == b:
        return Distance(0, 0, "equal", (a,))

    if x.complexity == 1:
        if x.is_whole and x.surface.name in ("S1,1", "S0,4"):
            slopes = [_atlas_slope(a), _atlas_slope(b)]
        else:
            slopes = relative_slopes(x, [a, b])
        d = farey.distance(*slopes)
        path = tuple(farey_geodesic(a, b, x)) if with_path else (a, b)
        return Distance(d, d, "farey", path)

    near = _near(a, b, x)
    if near is not None:
        d, path = near
        return Distance(d, d, "disjointness" if d == 1 else "filling", path)

    frontier = [(a,)]
    for level in range(1, depth + 1):
        following = []
        for path in frontier:
            for y in _pieces_inside(x, path[-1]):
                for c in project_curves(b, y):
                    found = _near(c, b, x)
                    if found is not None:
                        d, tail = found
                        upper = level + d
                        return Distance(upper, 3, "filling" if upper == 3 else None, path + tail)
                    following.append(path + (c,))
        frontier = following[:64]

    upper = max(3, 2 * intersection_number(a, b).bit_length())
    logger.warning("no path within depth %d in %s, distance at most %d", depth, x, upper)
    return Distance(upper, 3, None, ())


def _pool_distance(spec: GraphSpec, a, b, pool: CurvePool) -> Tuple[Optional[int], Tuple, int]:
    """Length and path of a shortest pool path, or ``None`` with the radius explored."""
    candidates = None
    if spec.family not in ("k_of", "pants", "cut_system"):
        candidates = curve_vertices(spec, pool)

    graph = nx.Graph()
    graph.add_node(a)
    frontier, seen, radius = [a], {a}, 0

    while frontier and b not in seen:
        radius += 1
        following = []
        for v in frontier:
            for u in neighbors(spec, v, pool, candidates):
                graph.add_edge(v, u)
                if u not in seen:
                    seen.add(u)
                    following.append(u)
        frontier = sorted(following)

    if b not in seen:
        return None, (), radius

    path = nx.shortest_path(graph, a, b)
    return len(path) - 1, tuple(path), radius


def distance(
    spec: GraphSpec,
    a: NormalMulticurve,
    b: NormalMulticurve,
    pool: CurvePool,
    certify: bool = False,
    strict: bool = False,
) -> Distance:
    """
    Pool-restricted distance. Exact on complexity one curve graphs, when the
    path is short enough to certify directly, or (``certify``) when growing
    the pool twice in a row leaves it unchanged.

    Endpoints the pool does not connect get an open upper bound (``None``)
    and an empty path.

    Raises
    ------
    Disconnected
        ``strict`` is set and the pool does not connect the endpoints.
    """
    if a == b:
        return Distance(0, 0, "equal", (a,))

    surface = spec.surface
    whole = Subsurface.whole(surface)

    if spec.family == "curve_graph" and surface.complexity == 1:
        return curve_distance(a, b, whole)

    upper, path, radius = _pool_distance(spec, a, b, pool)
    lower = 1
    if spec.family == "curve_graph":
        lower = curve_distance(a, b, whole).lower

    if upper is None:
        if strict:
            raise Disconnected(radius)
        logger.warning("%s: endpoints disconnected within radius %d of the pool", spec, radius)
        return Distance(None, lower, None, ())

    lower = min(lower, upper)
    if upper == lower:
        return Distance(upper, lower, "disjointness" if upper == 1 else "filling", path)

    if certify:
        current, unchanged = pool, 0
        while unchanged < 2:
            seeds = list(current) + list(a.components) + list(b.components)
            budget = current.budget
            current = generate_pool(
                seeds, 1, budget.get("intersection_cap", 12), 2 * budget.get("size_cap", len(seeds))
            )
            again, again_path, _ = _pool_distance(spec, a, b, current)
            if again is not None and again < upper:
                upper, path, unchanged = again, again_path, 0
            else:
                unchanged += 1
        logger.info("%s: distance %d certified by saturation", spec, upper)
        return Distance(upper, upper, "saturation", path)

    logger.warning("%s: distance %d is an upper bound only", spec, upper)
    return Distance(upper, lower, None, path)


def tighten(path: Sequence[NormalMulticurve], x: Subsurface) -> TightGeodesic:
    """Replace interior terms by the boundary in X of the span of their neighbours."""
    assert x.complexity >= 1
    terms = list(path)

    for u, v in zip(terms, terms[1:]):
        assert intersection_number(u, v) == 0, "consecutive terms must be disjoint"

    if x.complexity == 1 or len(terms) <= 2:
        return TightGeodesic(x, tuple(terms))

    for i in range(1, len(terms) - 1):
        try:
            span = spanned_subsurface([terms[i - 1], terms[i + 1]])
        except FillsSurface:
            raise SpanDegenerate("neighbours fill the surface", position=i)

        inside = [c for c in span.components if contains_curve(x, c)]
        if not inside:
            raise SpanDegenerate("span has no boundary inside the subsurface", position=i)

        terms[i] = _union(x.surface, inside)

    return TightGeodesic(x, tuple(terms))


def pants_completion(m: NormalMulticurve, pool: CurvePool, strict: bool = True) -> NormalMulticurve:
    """Greedy extension of ``m`` to a pants decomposition, projecting pool curves into pieces on demand."""
    surface = m.surface
    chosen = list(m.components)
    sources = list(pool) + list(surface.generators)

    while len(chosen) < surface.complexity:
        current = _union(surface, chosen) if chosen else None
        pieces = cut_along(current) if current else [Subsurface.whole(surface)]
        pieces = [y for y in pieces if y.complexity >= 1]

        candidate = None
        for y in pieces:
            inside = [c for c in pool if c not in chosen and contains_curve(y, c)]
            if not inside:
                for source in sources:
                    inside = project_curves(source, y)
                    if inside:
                        break
            if inside:
                candidate = min(inside)
                break

        if candidate is None:
            if strict:
                raise CompletionFailed("pool exhausted", chosen=[c.to_dict() for c in chosen])
            logger.warning("%s: pants completion stopped at %d curves", surface.name, len(chosen))
            break

        chosen.append(candidate)

    return _union(surface, chosen)


def _cut_system_from(c: NormalMulticurve, pool: CurvePool) -> Optional[NormalMulticurve]:
    surface = pool.surface
    chosen = [c]

    for d in pool:
        if len(chosen) == surface.stype.genus:
            break
        if d in chosen or any(intersection_number(d, e) for e in chosen):
            continue
        if len(_union(surface, chosen + [d]).pieces()) == 1:
            chosen.append(d)

    return _union(surface, chosen)


def seed_vertices(spec: GraphSpec, pool: CurvePool, count: int) -> List[NormalMulticurve]:
    """Up to ``count`` vertices built from pool curves, in pool order."""
    if spec.family in ("curve_graph", "sep", "nonsep", "arc_companion"):
        return curve_vertices(spec, pool)[:count]

    found = []
    for c in pool:
        if spec.family == "cut_system":
            v = _cut_system_from(c, pool)
        else:
            v = pants_completion(c, pool, strict=False)

        if v not in found and is_vertex(spec, v):
            found.append(v)
        if len(found) >= count:
            break

    return found


def graph_vertices(spec: GraphSpec, pool: CurvePool, count: int) -> List[NormalMulticurve]:
    """
    Vertices of G the pool offers. Curve-like families take every single
    curve; pants decompositions and cut systems grow breadth first from
    the seed vertices through their pool neighbours until ``count``.
    """
    if spec.family in ("curve_graph", "sep", "nonsep", "arc_companion"):
        return curve_vertices(spec, pool)

    found = seed_vertices(spec, pool, count)
    seen, frontier = set(found), list(found)

    while frontier and len(found) < count:
        following = []
        for v in frontier:
            for u in neighbors(spec, v, pool):
                if u not in seen:
                    seen.add(u)
                    found.append(u)
                    following.append(u)
        frontier = following

    return sorted(found[:count])
