"""
The arc graph A(S, Δ), its companion graph G(S, Δ) of curves cutting off
pants that meet Δ, and the maps ψ (arc to neighbourhood boundary) and η
(vertex to the arc inside its pants) relating them.
"""

import logging
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence

import networkx as nx
from tqdm import tqdm

from twistable.classes.arc import GSDeltaVertex, NormalArcSystem
from twistable.classes.graph import GraphSpec
from twistable.classes.multicurve import CurvePool, NormalMulticurve, Subsurface
from twistable.classes.report import AuditReport, describe
from twistable.exceptions import OracleFailure
from twistable.graph_families import adjacent, is_vertex
from twistable.paths import around_vertex, intersection_count, reduce_cycle, self_intersects, turn
from twistable.projections_audit import set_distance, witness_pool
from twistable.surface_core import (
    contains_curve,
    curves_from_paths,
    cut_along,
    generate_pool,
    intersection_number,
    project_curves,
    surgery_paths,
)
from twistable.witnesses import is_witness

logger = logging.getLogger(__name__)

MAX_LENGTH = 14


def _gluing(surface) -> Sequence[int]:
    return surface.triangulation.gluing


def _inverse(crossings: Sequence[int], gluing: Sequence[int]) -> List[int]:
    return [gluing[x] for x in reversed(crossings)]


def arc_pool(surface, delta: Iterable[str], length: int = 8, limit: Optional[int] = None) -> List[NormalArcSystem]:
    """Simple essential arcs with both ends in Δ whose reduced path crosses at most ``length`` edges."""
    delta = frozenset(delta)
    triangulation = surface.triangulation
    gluing, labels = triangulation.gluing, triangulation.labels
    found = set()

    def walk(start: int, path: List[int]):
        entered = gluing[path[-1]]
        t, j = divmod(entered, 3)

        end = 3 * t + (j + 2) % 3
        if labels[end] in delta:
            arc = NormalArcSystem.from_path(surface, start, path, end)
            if arc is not None and not self_intersects(arc.strand, gluing):
                found.add(arc)

        if len(path) < length:
            for out in ((j + 1) % 3, (j + 2) % 3):
                path.append(3 * t + out)
                walk(start, path)
                path.pop()

    for start, label in enumerate(labels):
        if label not in delta:
            continue

        t, k = divmod(start, 3)
        for other in range(3 * t, 3 * t + 3):
            if other != start and labels[other] in delta:
                arc = NormalArcSystem.from_path(surface, start, [], other)
                if arc is not None:
                    found.add(arc)

        if length:
            walk(start, [3 * t + (k + 1) % 3])

    arcs = sorted(found)
    logger.info("%s: %d arcs with ends in %s", surface.name, len(arcs), sorted(delta))

    return arcs[:limit] if limit is not None else arcs


def arc_adjacent(a: NormalArcSystem, b: NormalArcSystem) -> bool:
    """Distinct arcs with disjoint representatives."""
    if a == b:
        return False
    return intersection_count(a.strand, b.strand, _gluing(a.surface)) == 0


def arc_curve_intersection(a: NormalArcSystem, m: NormalMulticurve) -> int:
    gluing = _gluing(a.surface)
    return sum(intersection_count(a.strand, s, gluing) for s in m.strands)


def arc_graph(arcs: Sequence[NormalArcSystem]) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(arcs)
    for i, a in enumerate(arcs):
        for b in arcs[i + 1 :]:
            if arc_adjacent(a, b):
                graph.add_edge(a, b)
    return graph


def _neighbourhood_paths(alpha: NormalArcSystem) -> List[List[int]]:
    gluing = _gluing(alpha.surface)
    labels = alpha.surface.triangulation.labels
    strand = alpha.strand
    xs, s, e = list(strand.crossings), strand.start, strand.end

    if labels[s] == labels[e]:
        return [xs + list(turn(e, s, gluing, clockwise)) for clockwise in (True, False)]

    return [
        xs + list(around_vertex(e, gluing, cw_end)) + _inverse(xs, gluing) + list(around_vertex(s, gluing, cw_start))
        for cw_end in (True, False)
        for cw_start in (True, False)
    ]


def companion_pants(m: NormalMulticurve, delta: FrozenSet[str]) -> Optional[Subsurface]:
    """Canonical pants cut off by all of ``m`` and meeting Δ."""
    for x in cut_along(m):
        if x.is_pants and len(x.piece.curves) == len(m) and x.labels & delta:
            return x
    return None


@lru_cache(maxsize=1 << 14)
def neighbourhood_boundary(alpha: NormalArcSystem) -> NormalMulticurve:
    """Non-peripheral boundary of a regular neighbourhood of the arc and the punctures it ends at."""
    surface = alpha.surface
    gluing = _gluing(surface)

    paths = [reduce_cycle(path, gluing) for path in _neighbourhood_paths(alpha)]
    curves = curves_from_paths(surface, paths)
    if not curves:
        raise OracleFailure("arc neighbourhood has no essential boundary", arc=alpha.to_dict())

    return NormalMulticurve.union(surface, curves)


def psi(alpha: NormalArcSystem, delta: Iterable[str]) -> GSDeltaVertex:
    delta = frozenset(delta)
    m = neighbourhood_boundary(alpha)
    pants = companion_pants(m, delta)
    if pants is None:
        raise OracleFailure("neighbourhood boundary cuts off no pants meeting Δ", arc=alpha.to_dict())

    return GSDeltaVertex(m, pants, delta)


def _lies_in(alpha: NormalArcSystem, v: GSDeltaVertex) -> bool:
    if arc_curve_intersection(alpha, v.multicurve):
        return False

    inside = v.delta_labels
    if len(inside) >= 2:
        return alpha.endpoint_labels <= inside and len(alpha.endpoint_labels) == 2
    return alpha.endpoint_labels == inside


def _meets(m: NormalMulticurve, x: Subsurface) -> bool:
    return any(contains_curve(x, c) or intersection_number(c, x.boundary) for c in m.components)


def eta(v: GSDeltaVertex, arcs: Optional[Sequence[NormalArcSystem]] = None) -> NormalArcSystem:
    """
    The arc inside the pants of ``v``: both ends on its Δ boundary, or one
    end on each when two of its boundaries are in Δ.

    Raises
    ------
    OracleFailure
        no such arc within the longest enumerated length.
    """
    surface = v.multicurve.surface
    lengths = [None] if arcs is not None else range(4, MAX_LENGTH + 1, 2)

    for length in lengths:
        candidates = arcs if arcs is not None else arc_pool(surface, v.delta, length)
        inside = [a for a in candidates if _lies_in(a, v)]
        if inside:
            return min(inside)

    raise OracleFailure("no arc found in the cut-off pants", vertex=v.to_dict())


def project_arc(alpha: NormalArcSystem, x: Subsurface) -> List[NormalMulticurve]:
    """Curves of X obtained from an arc by banding its pieces in X to the boundary of X."""
    boundary = x.boundary

    if x.is_whole or not arc_curve_intersection(alpha, boundary):
        if not alpha.endpoint_labels <= x.labels and not x.is_whole:
            return []
        m = neighbourhood_boundary(alpha)
        return [c for c in m.components if contains_curve(x, c)]

    result = [
        curve
        for curve in curves_from_paths(x.surface, surgery_paths(alpha.strand, x))
        if not intersection_number(curve, boundary) and contains_curve(x, curve)
    ]

    return sorted(set(result))


def appendix_audit(
    surface,
    delta: Iterable[str],
    arcs: Optional[Sequence[NormalArcSystem]] = None,
    pool: Optional[CurvePool] = None,
    length: int = 8,
) -> AuditReport:
    """
    Compare A(S, Δ) with G(S, Δ) on an arc pool: ψ is 1-Lipschitz, ψ∘η is
    the identity, η∘ψ moves arcs at most one step, η images of adjacent
    vertices meet at most four times, witnesses are the subsurfaces holding
    Δ, and ψ(α) projects within two of α.
    """
    delta = frozenset(delta)
    spec = GraphSpec("arc_companion", surface, delta=delta)
    arcs = list(arcs) if arcs is not None else arc_pool(surface, delta, length)
    pool = pool or generate_pool(surface.generators, 2, 12, 200)

    report = AuditReport("appendix", surface.name, spec.family_id, {"arcs": len(arcs), **pool.budget})
    images: Dict[NormalArcSystem, GSDeltaVertex] = {}

    for alpha in tqdm(arcs, desc="psi", disable=len(arcs) < 50):
        v = psi(alpha, delta)
        images[alpha] = v
        report.add(describe(arc=alpha.to_dict()), {"vertex": v.to_dict()}, is_vertex(spec, v.multicurve))

    graph = arc_graph(arcs)
    report.notes.append(f"arc pool connected: {nx.is_connected(graph)}" if arcs else "empty arc pool")

    for a, b in graph.edges:
        va, vb = images[a].multicurve, images[b].multicurve
        report.add(describe(check="psi_lipschitz", a=a.to_dict(), b=b.to_dict()), {}, va == vb or adjacent(spec, va, vb))

    vertices = sorted(set(images.values()), key=lambda v: v.multicurve)
    back = {v: eta(v, arcs) for v in vertices}

    for v, arc in back.items():
        report.add(describe(check="psi_eta", vertex=v.multicurve), {}, images[arc] == v)

    for alpha, v in images.items():
        returned = back[v]
        report.add(describe(check="eta_psi", arc=alpha.to_dict()), {}, returned == alpha or arc_adjacent(returned, alpha))

    worst = 0
    for i, v in enumerate(vertices):
        for w in vertices[i + 1 :]:
            if not adjacent(spec, v.multicurve, w.multicurve):
                continue
            crossing = max(
                arc_curve_intersection(back[w], v.multicurve),
                intersection_count(back[v].strand, back[w].strand, surface.triangulation.gluing),
            )
            worst = max(worst, crossing)
            report.add(describe(check="eta_lipschitz", v=v.multicurve, w=w.multicurve), {"i": crossing}, crossing <= 4)

    witnesses = [x for x in witness_pool(pool) if x.complexity >= 1]
    spread = 0
    for x in witnesses:
        witness = is_witness(spec, x)
        missed = [v for v in vertices if not _meets(v.multicurve, x)]
        # a vertex missing X shows X is no witness; the pool may hold none
        verdict = not missed if witness else (True if missed else None)
        report.add(describe(check="witness", x=x), {"witness": witness, "missed_by": len(missed)}, verdict)
        if not witness:
            continue

        for alpha in arcs:
            pa, pv = project_arc(alpha, x), project_curves(images[alpha].multicurve, x)
            if not pa or not pv:
                report.add(describe(check="projection", arc=alpha.to_dict(), x=x), {"empty": True}, False)
                continue
            d = set_distance(pa, pv, x)
            spread = max(spread, d)
            report.add(describe(check="projection", arc=alpha.to_dict(), x=x), {"d": d}, d <= 2)

    report.constants.update(eta_intersection=worst, projection_spread=spread, vertices=len(vertices))
    logger.info("%s: appendix audit over %d arcs, verdict %s", surface.name, len(arcs), report.verdict)

    return report
