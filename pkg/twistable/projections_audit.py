"""
Subsurface projections and the empirical audits built on them.
"""

import logging
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from tqdm import tqdm

from twistable.classes.graph import Distance, GraphSpec
from twistable.classes.multicurve import CurvePool, NormalMulticurve, Subsurface
from twistable.classes.report import AuditReport, ProjectionSet, describe, weight_lists
from twistable.exceptions import AnnularTarget, Disjoint, EmptyProjection, OracleFailure, UncertifiedGeodesic
from twistable.graph_families import (
    adjacent,
    curve_distance,
    distance,
    flip_neighbors,
    graph_vertices,
    is_vertex,
    neighbors,
    pants_completion,
)
from twistable.surface_core import (
    Relation,
    contains_curve,
    cut_along,
    intersection_number,
    project_curves,
    relation,
)
from twistable.witnesses import hyperbolicity_criterion, is_witness

logger = logging.getLogger(__name__)


def project(a: NormalMulticurve, x: Subsurface) -> ProjectionSet:
    """
    Raises
    ------
    AnnularTarget
        X carries no curve graph.
    """
    if x.complexity < 1:
        raise AnnularTarget(f"{x} has no curve graph", subsurface=x.to_dict())

    return ProjectionSet(x, tuple(project_curves(a, x)))


def diameter(curves: Sequence[NormalMulticurve], x: Subsurface) -> int:
    curves = sorted(set(curves))
    return max((curve_distance(c, d, x).upper for c, d in combinations(curves, 2)), default=0)


def set_distance(first: Iterable[NormalMulticurve], second: Iterable[NormalMulticurve], x: Subsurface) -> int:
    """d_X of two projections: diameter of their union."""
    first, second = list(first), list(second)
    if not first or not second:
        raise EmptyProjection("empty projection", subsurface=x.to_dict())
    return diameter(first + second, x)


def proj_distance(a: NormalMulticurve, b: NormalMulticurve, x: Subsurface) -> int:
    return set_distance(project(a, x), project(b, x), x)


def boundary_projection(x: Subsurface, y: Subsurface) -> ProjectionSet:
    """Projection of X to Y: the boundary of X in Y when nested, the projection of its boundary when transverse."""
    kind = relation(x, y)

    if kind == Relation.DISJOINT:
        raise Disjoint("subsurfaces are disjoint", x=x.to_dict(), y=y.to_dict())
    assert kind in (Relation.NESTED, Relation.TRANSVERSE), f"{kind} has no projection"

    if kind == Relation.NESTED:
        curves = [c for c in x.boundary.components if contains_curve(y, c)]
        return ProjectionSet(y, tuple(sorted(curves)))

    return project(x.boundary, y)


def witness_pool(pool: CurvePool, limit: int = 60) -> List[Subsurface]:
    """
    The whole surface first, then the essential subsurfaces cut out by
    single pool curves and disjoint pairs. Pants carry no curve graph and
    are left out.
    """
    whole = Subsurface.whole(pool.surface)
    found = set()
    curves = list(pool)

    for c in curves:
        found.update(x for x in cut_along(c) if x.complexity >= 1)

    for c, d in combinations(curves[:limit], 2):
        if len(found) >= limit:
            break
        if c != d and intersection_number(c, d) == 0:
            carrier = NormalMulticurve.union(pool.surface, [c, d])
            found.update(x for x in cut_along(carrier) if x.complexity >= 1)

    found.discard(whole)
    return [whole] + sorted(found)[: limit - 1]


def _pairs(items: Sequence, count: int, rng: np.random.Generator, keep) -> List[Tuple]:
    candidates = [(p, q) for p, q in combinations(items, 2) if keep(p, q)]
    if len(candidates) <= count:
        return candidates
    chosen = rng.choice(len(candidates), size=count, replace=False)
    return [candidates[i] for i in sorted(chosen)]


def transverse_triples(
    pool: CurvePool, witnesses: Sequence[Subsurface], count: int, seed: int = 0
) -> List[Tuple[NormalMulticurve, Subsurface, Subsurface]]:
    rng = np.random.default_rng(seed)
    pairs = _pairs(witnesses, count, rng, lambda x, y: relation(x, y) == Relation.TRANSVERSE)
    curves = list(pool)
    triples = []

    for x, y in pairs:
        for i in rng.permutation(len(curves)):
            a = curves[i]
            if project_curves(a, x) and project_curves(a, y):
                triples.append((a, x, y))
                break

    return triples


def behrstock_audit(
    samples: Sequence[Tuple[NormalMulticurve, Subsurface, Subsurface]],
    ceiling: float = 10,
    pool: Optional[CurvePool] = None,
) -> AuditReport:
    """For transverse X, Y the smaller of d_X(a, Y) and d_Y(a, X) stays below the ceiling."""
    surface = samples[0][0].surface.name if samples else ""
    report = AuditReport("behrstock", surface, pool=pool.budget if pool else {}, ceiling=ceiling)
    measured = []

    for a, x, y in tqdm(samples, desc="behrstock", disable=len(samples) < 10):
        d_x = set_distance(project(a, x), boundary_projection(y, x), x)
        d_y = set_distance(project(a, y), boundary_projection(x, y), y)
        value = min(d_x, d_y)
        measured.append(value)
        report.add(describe(a=a, x=x, y=y), {"d_x": d_x, "d_y": d_y, "min": value}, value <= ceiling)

    report.constants["kappa"] = max(measured, default=0)
    logger.info("behrstock: kappa %s over %d samples", report.constants["kappa"], len(measured))

    return report


def bgi_audit(
    samples: Sequence[Tuple[Distance, Subsurface, Subsurface]],
    ceiling: float = 100,
) -> AuditReport:
    """
    A geodesic of C(X) either projects to Y with small diameter or passes
    within distance one of the boundary of Y.
    """
    surface = samples[0][1].surface.name if samples else ""
    report = AuditReport("bounded_geodesic_image", surface, ceiling=ceiling)
    measured = []

    for geodesic, x, y in samples:
        if not geodesic.exact:
            raise UncertifiedGeodesic("geodesic is not certified", path=weight_lists(geodesic.path))
        assert relation(y, x) == Relation.NESTED

        boundary = boundary_projection(y, x).curves
        near = any(intersection_number(v, c) == 0 for v in geodesic.path for c in boundary)
        missing = any(not project_curves(v, y) for v in geodesic.path)

        images = [c for v in geodesic.path for c in project_curves(v, y)]
        spread = diameter(images, y) if images else 0
        measured.append(spread)

        if missing:
            verdict = near
        else:
            verdict = spread <= ceiling or near

        values = {"diameter": spread, "near_boundary": near, "misses": missing}
        report.add(describe(x=x, y=y, path=weight_lists(geodesic.path)), values, verdict)

    report.constants["M"] = max(measured, default=0)
    return report


def partial_realization(
    witnesses: Sequence[Subsurface],
    curves: Sequence[NormalMulticurve],
    pool: CurvePool,
    checked: Sequence[Subsurface] = (),
) -> Tuple[NormalMulticurve, AuditReport]:
    """
    A pants decomposition containing the chosen curves and the boundaries
    of the disjoint witnesses, with its projection bounds checked.
    """
    surface = pool.surface
    assert len(witnesses) == len(curves)

    for x, y in combinations(witnesses, 2):
        assert relation(x, y) == Relation.DISJOINT, "witnesses must be pairwise disjoint"
    for x, c in zip(witnesses, curves):
        assert contains_curve(x, c), "chosen curve must lie in its witness"

    parts = list(curves) + [x.boundary for x in witnesses if not x.is_whole]
    seed = NormalMulticurve.union(surface, parts) if parts else NormalMulticurve(surface, [0] * surface.triangulation.edge_count)
    a = pants_completion(seed, pool)

    report = AuditReport("partial_realization", surface.name, pool=pool.budget)

    for x, c in zip(witnesses, curves):
        d = set_distance(project(a, x), [c], x)
        report.add(describe(x=x, curve=c), {"distance": d}, d <= 1)

    for z in checked:
        for x in witnesses:
            if relation(x, z) in (Relation.NESTED, Relation.TRANSVERSE):
                side = boundary_projection(x, z)
                if side.is_empty:
                    continue
                d = set_distance(project(a, z), side, z)
                report.add(describe(x=x, z=z), {"distance": d}, d <= 2)

    report.constants["vertex"] = list(a.weights)
    return a, report


def _cut(value: int, cutoff: int) -> int:
    return value if value >= cutoff else 0


def fit_constants(lhs: Sequence[float], rhs: Sequence[float]) -> Tuple[float, float]:
    """
    Least K1, then least K2, such that lhs <= K1 rhs + K2 and
    rhs <= K1 lhs + K2 on every sample. K1 ranges over 1 and the ratios of
    the samples.
    """
    lhs, rhs = np.asarray(lhs, dtype=float), np.asarray(rhs, dtype=float)
    if not len(lhs):
        return 1.0, 0.0

    ratios = np.concatenate([lhs[rhs > 0] / rhs[rhs > 0], rhs[lhs > 0] / lhs[lhs > 0], [1.0]])
    candidates = np.unique(np.maximum(ratios, 1.0))

    best = None
    for k1 in candidates:
        k2 = max(float(np.max(lhs - k1 * rhs)), float(np.max(rhs - k1 * lhs)), 0.0)
        key = (float(k1), k2)
        if best is None or key < best:
            best = key

    return best


def distance_formula_report(
    spec: GraphSpec,
    pairs: Sequence[Tuple[NormalMulticurve, NormalMulticurve]],
    cutoff: int,
    witnesses: Sequence[Subsurface],
    pool: CurvePool,
    certify: bool = False,
) -> AuditReport:
    """
    Graph distance against the sum of cut-off projection distances over the
    witnesses of the pool, with fitted constants per cutoff.

    Only pairs with an exact graph distance enter the fit. The constants are
    fitted on every other certified pair and checked on the remaining ones.
    C0 is the first cutoff whose constants exceed those of cutoff one.
    """
    assert cutoff >= 1
    chosen = [x for x in witnesses if is_witness(spec, x)]
    report = AuditReport("distance_formula", spec.surface.name, spec.family_id, pool.budget)
    report.notes.append("witnesses restricted to the pool, the sum under-approximates")

    table, rows = [], []
    for a, b in tqdm(pairs, desc="distance formula", disable=len(pairs) < 10):
        lhs = distance(spec, a, b, pool, certify=certify)
        projected = []
        for x in chosen:
            pa, pb = project_curves(a, x), project_curves(b, x)
            if pa and pb:
                projected.append(set_distance(pa, pb, x))

        values = {"lhs": lhs.upper, "exact": lhs.exact, "terms": projected}
        sample = report.add(describe(a=a, b=b), values, None)
        if lhs.exact:
            table.append((lhs.upper, projected))
            rows.append(sample)

    excluded = len(pairs) - len(table)
    if excluded:
        report.notes.append(f"{excluded} pairs without a certified distance left out of the fit")

    fits = []
    for c in range(1, cutoff + 1):
        lhs = [row[0] for row in table]
        rhs = [sum(_cut(d, c) for d in row[1]) for row in table]
        k1, k2 = fit_constants(lhs, rhs)
        fits.append({"cutoff": c, "K1": k1, "K2": k2})

    baseline = (fits[0]["K1"], fits[0]["K2"])
    degraded = [f["cutoff"] for f in fits if (f["K1"], f["K2"]) > baseline]
    final = fits[-1]

    training = [row for i, row in enumerate(table) if i % 2 == 0]
    k1, k2 = fit_constants([row[0] for row in training], [sum(_cut(d, cutoff) for d in row[1]) for row in training])

    for i, (sample, row) in enumerate(zip(rows, table)):
        rhs = sum(_cut(d, cutoff) for d in row[1])
        sample.values["rhs"] = rhs
        if i % 2:
            sample.verdict = row[0] <= k1 * rhs + k2 and rhs <= k1 * row[0] + k2

    if len(table) < 2:
        report.add({"check": "certified_pairs"}, {"count": len(table)}, False)

    report.constants.update(
        {
            "K1": final["K1"],
            "K2": final["K2"],
            "fits": fits,
            "C0": degraded[0] if degraded else None,
            "held_out": {"K1": k1, "K2": k2},
            "certified": len(table),
        }
    )
    logger.info("distance formula: K1 %.3f, K2 %.3f at cutoff %d", final["K1"], final["K2"], cutoff)

    return report


def _four_point(d: Dict, quadruple) -> float:
    x, y, z, w = quadruple
    sums = sorted([d[x][y] + d[z][w], d[x][z] + d[y][w], d[x][w] + d[y][z]])
    return (sums[2] - sums[1]) / 2


def _delta(graph: nx.Graph, samples: int, rng: np.random.Generator) -> float:
    nodes = sorted(graph.nodes)
    if len(nodes) < 4:
        return 0.0

    d = dict(nx.all_pairs_shortest_path_length(graph))
    quadruples = list(combinations(range(len(nodes)), 4))
    if len(quadruples) > samples:
        quadruples = [tuple(rng.choice(len(nodes), size=4, replace=False)) for _ in range(samples)]

    return max(_four_point(d, [nodes[i] for i in q]) for q in quadruples)


def delta_estimate(ball, samples: int = 2000, seed: int = 0) -> AuditReport:
    """Four point defect over quadruples of the ball, overall and per radius."""
    rng = np.random.default_rng(seed)
    spec = ball.spec
    report = AuditReport("delta", spec.surface.name, spec.family_id, ball.pool)

    trend = []
    for r in tqdm(range(1, ball.radius + 1), desc="delta", disable=ball.radius < 3):
        inner = [v for v, d in ball.distances.items() if d <= r]
        value = _delta(ball.graph.subgraph(inner), samples, rng)
        trend.append({"radius": r, "delta": value, "vertices": len(inner)})

    overall = trend[-1]["delta"] if trend else 0.0
    report.add({"center": ball.center.to_dict(), "radius": ball.radius}, {"trend": trend}, None)

    verdict = hyperbolicity_criterion(spec, spec.surface.stype)

    report.constants.update({"delta": overall, "trend": trend, "hyperbolicity_criterion": verdict})
    return report


def _first_vertex(kspec: GraphSpec, gspec: GraphSpec, v: NormalMulticurve, pool: CurvePool, radius: int = 4) -> Optional[int]:
    """K_G distance from ``v`` to the nearest single vertex of G, searching the pool."""
    seen, frontier = {v}, [v]
    for depth in range(radius + 1):
        if any(is_vertex(gspec, u) for u in frontier):
            return depth
        following = []
        for u in frontier:
            for w in neighbors(kspec, u, pool):
                if w not in seen:
                    seen.add(w)
                    following.append(w)
        frontier = sorted(following)
    return None


def phi_audit(gspec: GraphSpec, pool: CurvePool, samples: int = 20, seed: int = 0) -> AuditReport:
    """
    Inclusion of G into K_G: images of G-edges stay close, K_G vertices lie
    near G, and vertices of G meeting a K_G vertex boundedly form a bounded set.
    """
    rng = np.random.default_rng(seed)
    surface = gspec.surface
    kspec = GraphSpec("k_of", surface, base=gspec.family, delta=gspec.delta)
    report = AuditReport("phi", surface.name, gspec.family_id, pool.budget)

    vertices = graph_vertices(gspec, pool, max(2 * samples, 20))
    graph = nx.Graph()
    graph.add_nodes_from(vertices)
    graph.add_edges_from((a, b) for a, b in combinations(vertices, 2) if adjacent(gspec, a, b))

    edge_lengths = []
    for a, b in _pairs(vertices, samples, rng, lambda p, q: graph.has_edge(p, q)):
        if intersection_number(a, b) == 0 and is_vertex(kspec, NormalMulticurve.union(surface, [a, b])):
            length = 2
        else:
            length = distance(kspec, a, b, pool).upper
        if length is not None:
            edge_lengths.append(length)
        report.add(describe(a=a, b=b, kind="edge"), {"distance": length}, None)

    sampled = set()
    for a in vertices[:samples]:
        sampled.add(pants_completion(a, pool, strict=False))
        sampled.update(sorted(flip_neighbors(kspec, a, pool))[:2])
    sampled = sorted(v for v in sampled if is_vertex(kspec, v))[:samples]

    reach, crossings = [], []
    for v in sampled:
        r = _first_vertex(kspec, gspec, v, pool)
        reach.append(r)
        crossings.append(min((intersection_number(v, c) for c in vertices), default=None))
        report.add(describe(v=v, kind="coarse_surjectivity"), {"distance": r}, r is not None)

    bound = max((n for n in crossings if n is not None), default=0)
    lengths = dict(nx.all_pairs_shortest_path_length(graph))
    spreads = []

    for v in sampled:
        near = [c for c in vertices if intersection_number(v, c) <= bound]
        spread = 0
        for c, d in combinations(near, 2):
            if d not in lengths.get(c, {}):
                spread = None
                break
            spread = max(spread, lengths[c][d])
        spreads.append(spread)
        report.add(describe(v=v, kind="retraction"), {"diameter": spread, "size": len(near)}, spread is not None)

    if not edge_lengths or not sampled:
        counts = {"vertices": len(vertices), "edges": len(edge_lengths), "kg": len(sampled)}
        report.add({"kind": "samples"}, counts, False)
        logger.warning("phi: nothing to measure in the pool, %s", counts)

    report.constants.update(
        {
            "D": max(edge_lengths, default=0),
            "R": max((r for r in reach if r is not None), default=0),
            "N": bound,
            "N_prime": max((s for s in spreads if s is not None), default=0),
            "vertices": len(vertices),
            "edges": graph.number_of_edges(),
        }
    )
    return report


def kg_edges(kspec: GraphSpec, pool: CurvePool, count: int, seed: int = 0) -> List[Tuple[NormalMulticurve, NormalMulticurve]]:
    rng = np.random.default_rng(seed)
    edges = []
    for c in list(pool)[: max(count, 1)]:
        a = pants_completion(c, pool, strict=False)
        for b in sorted(flip_neighbors(kspec, a, pool)):
            edges.append((a, b))

    if len(edges) <= count:
        return edges
    return [edges[i] for i in sorted(rng.choice(len(edges), size=count, replace=False))]


def lipschitz_audit(edges, witnesses: Sequence[Subsurface], bound: int = 4) -> AuditReport:
    """Adjacent vertices project close together in every witness."""
    surface = witnesses[0].surface.name if witnesses else ""
    report = AuditReport("lipschitz", surface, ceiling=bound)
    measured = []

    for a, b in edges:
        for x in witnesses:
            pa, pb = project_curves(a, x), project_curves(b, x)
            if not pa or not pb:
                continue
            d = diameter(pa + pb, x)
            measured.append(d)
            report.add(describe(a=a, b=b, x=x), {"diameter": d}, d <= bound)

    report.constants["lipschitz"] = max(measured, default=0)
    return report


def projection_diameter_audit(multicurves: Sequence[NormalMulticurve], witnesses: Sequence[Subsurface]) -> AuditReport:
    """Projections of a multicurve have diameter at most two."""
    surface = witnesses[0].surface.name if witnesses else ""
    report = AuditReport("projection_diameter", surface, ceiling=2)
    measured = []

    for a in multicurves:
        for x in witnesses:
            image = project_curves(a, x)
            if image:
                d = diameter(image, x)
                measured.append(d)
                report.add(describe(a=a, x=x), {"diameter": d}, d <= 2)

    report.constants["diameter"] = max(measured, default=0)
    return report


def nested_pairs(witnesses: Sequence[Subsurface]) -> List[Tuple[Subsurface, Subsurface]]:
    return [(x, y) for x in witnesses for y in witnesses if x != y and relation(x, y) == Relation.NESTED]


def consistency_audit(samples, kappa: float) -> AuditReport:
    """For X nested in Y, a projects near the boundary of X in Y or consistently to X."""
    surface = samples[0][1].surface.name if samples else ""
    report = AuditReport("consistency", surface, ceiling=kappa)

    for a, x, y in samples:
        py = project_curves(a, y)
        boundary = boundary_projection(x, y).curves
        px = project_curves(a, x)
        if not py or not boundary or not px:
            continue

        first = set_distance(py, boundary, y)
        through = sorted({c for curve in py for c in project_curves(curve, x)})
        second = set_distance(px, through, x) if through else 0
        value = min(first, second)
        report.add(describe(a=a, x=x, y=y), {"d_y": first, "d_x": second}, value <= kappa)

    return report


def nesting_audit(witnesses: Sequence[Subsurface]) -> AuditReport:
    """For X nested in Y, any Z meeting both sees their boundaries within two."""
    surface = witnesses[0].surface.name if witnesses else ""
    report = AuditReport("nesting", surface, ceiling=2)

    for x, y in nested_pairs(witnesses):
        for z in witnesses:
            if z in (x, y):
                continue
            if relation(x, z) not in (Relation.NESTED, Relation.TRANSVERSE):
                continue
            if relation(y, z) not in (Relation.NESTED, Relation.TRANSVERSE):
                continue
            px, py = boundary_projection(x, z).curves, boundary_projection(y, z).curves
            if px and py:
                d = set_distance(px, py, z)
                report.add(describe(x=x, y=y, z=z), {"distance": d}, d <= 2)

    return report


def large_links_audit(samples, witnesses: Sequence[Subsurface], threshold: float) -> AuditReport:
    """
    Subsurfaces of X where a and b project far apart sit inside a component
    of X minus some vertex of a geodesic from a to b.
    """
    surface = samples[0][0].surface.name if samples else ""
    report = AuditReport("large_links", surface, ceiling=threshold)

    for x, a, b in samples:
        pa, pb = project_curves(a, x), project_curves(b, x)
        if not pa or not pb:
            continue

        geodesic = curve_distance(pa[0], pb[0], x)
        if not geodesic.path:
            logger.warning("large links: no geodesic found in %s", x)
            continue
        total = set_distance(pa, pb, x)
        pieces = []
        for gamma in geodesic.path:
            carrier = gamma if x.is_whole else NormalMulticurve.union(x.surface, [x.boundary, gamma])
            pieces.extend(
                y for y in cut_along(carrier) if relation(y, x) in (Relation.NESTED, Relation.EQUAL)
            )

        for y in witnesses:
            if relation(y, x) != Relation.NESTED:
                continue
            qa, qb = project_curves(a, y), project_curves(b, y)
            if not qa or not qb or set_distance(qa, qb, y) <= threshold:
                continue

            homes = [p for p in pieces if relation(y, p) in (Relation.NESTED, Relation.EQUAL)]
            close = all(
                set_distance(pa, boundary_projection(p, x).curves, x) <= total + 1
                for p in homes
                if p != x and boundary_projection(p, x).curves
            )
            report.add(describe(x=x, y=y, a=a, b=b), {"homes": len(homes)}, bool(homes) and close)

    return report


def uniqueness_audit(kspec: GraphSpec, pairs, bound: int, pool: CurvePool, witnesses, m: int) -> AuditReport:
    """Vertices whose projections all agree up to ``bound`` are joined by a path of controlled length."""
    from twistable.ladders import build_path, recursion_bounds

    report = AuditReport("uniqueness", kspec.surface.name, kspec.family_id, pool.budget)
    limit = recursion_bounds(bound, kspec.surface.complexity, m)[1][0]
    report.constants["T1"] = limit

    for a, b in pairs:
        spread = 0
        for x in witnesses:
            pa, pb = project_curves(a, x), project_curves(b, x)
            if pa and pb:
                spread = max(spread, set_distance(pa, pb, x))
        if spread > bound:
            continue

        try:
            path, certificate = build_path(kspec, a, b, bound, pool, witnesses=witnesses, m=m)
        except OracleFailure as e:
            report.add(describe(a=a, b=b), {"error": e.message}, None)
            continue
        length = len(path) - 1
        report.add(describe(a=a, b=b), {"length": length, "stages": len(certificate["stages"])}, length <= limit)

    return report
