"""
Paths in K_G built from annulus systems: bricks, ladders inserted along
tight geodesics, and the K-complexity that the insertion lowers until every
brick is small and the cross-sections read off as a path.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from twistable.classes.annulus import Annulus, AnnulusSystem, Brick, KComplexity, Smallness
from twistable.classes.graph import GraphSpec, TightGeodesic
from twistable.classes.multicurve import CurvePool, NormalMulticurve, Subsurface
from twistable.exceptions import (
    EndpointMismatch,
    NotMaximalComplexity,
    OracleFailure,
    SpanDegenerate,
    Type2PlacementViolation,
)
from twistable.graph_families import adjacent, curve_distance, is_vertex, minimal_intersection, tighten
from twistable.projections_audit import diameter
from twistable.surface_core import contains_curve, cut_along, intersection_number, project_curves
from twistable.witnesses import is_witness

logger = logging.getLogger(__name__)

Oracle = Callable[[NormalMulticurve, NormalMulticurve, Subsurface], TightGeodesic]

MAX_STAGES = 256


def recursion_bounds(K: int, xi: int, M: int) -> Dict[int, Tuple[int, int]]:
    """
    Length bounds (T_i, L_i) for i = xi .. 1, where T_i bounds paths whose
    non-small witness bricks all have complexity at most i.
    """
    assert xi >= 1

    table = {xi: ((2 * K + 2) * xi, 1)}
    for i in range(xi - 1, 0, -1):
        t, l = table[i + 1]
        table[i] = (t + 4 * t * (K + 2 * M * l) * xi + 8 * M * t * t * xi, l + 2 * t)

    return table


def initial_system(a: NormalMulticurve, b: NormalMulticurve) -> AnnulusSystem:
    """The components of ``a`` end one by one, then those of ``b`` start one by one."""
    alpha, beta = a.components, b.components
    final = len(alpha) + len(beta) + 1

    annuli = [Annulus(c, 0, i + 1) for i, c in enumerate(alpha)]
    annuli += [Annulus(c, len(alpha) + 1 + j, final) for j, c in enumerate(beta)]

    return AnnulusSystem(a.surface, tuple(range(final + 1)), tuple(annuli))


def _pieces(w: AnnulusSystem, gap: int) -> List[Subsurface]:
    m = w.cross_section(gap)
    if m.is_empty:
        return [Subsurface.whole(w.surface)]
    return cut_along(m)


def _changing_inside(w: AnnulusSystem, event: int, y: Subsurface, ending: bool) -> Optional[NormalMulticurve]:
    for annulus in w.annuli:
        if (annulus.end if ending else annulus.start) == event and contains_curve(y, annulus.curve):
            return annulus.curve
    return None


def _smallness(y: Subsurface, witness: bool, minus, plus) -> Smallness:
    if not witness:
        return Smallness.TYPE1
    if y.complexity == 1 and minus is not None and plus is not None:
        if intersection_number(minus, plus) == minimal_intersection(y):
            return Smallness.TYPE2
    return Smallness.NOT_SMALL


def bricks(w: AnnulusSystem, spec: GraphSpec) -> List[Brick]:
    """Maximal runs of consecutive gaps over which a subsurface stays a complementary component."""
    per_gap = [_pieces(w, g) for g in range(w.gap_count)]
    result = []

    for g, pieces in enumerate(per_gap):
        for y in pieces:
            if g > 0 and y in per_gap[g - 1]:
                continue

            stop = g
            while stop + 1 < len(per_gap) and y in per_gap[stop + 1]:
                stop += 1

            start, end = w.events[g], w.events[stop + 1]
            witness = is_witness(spec, y)
            minus = _changing_inside(w, start, y, ending=True)
            plus = _changing_inside(w, end, y, ending=False)

            result.append(
                Brick(
                    base=y,
                    start=start,
                    end=end,
                    gaps=stop - g + 1,
                    witness=witness,
                    smallness=_smallness(y, witness, minus, plus),
                    gamma_minus=minus,
                    gamma_plus=plus,
                )
            )

    return result


def k_complexity(w: AnnulusSystem, spec: GraphSpec, current: Optional[List[Brick]] = None) -> KComplexity:
    top = w.surface.complexity
    counts = [0] * top

    for brick in current if current is not None else bricks(w, spec):
        if brick.witness and not brick.is_small:
            counts[top - brick.base.complexity] += 1

    return KComplexity(tuple(counts))


def select_brick(w: AnnulusSystem, current: List[Brick]) -> Optional[Brick]:
    """Non-small witness brick of largest complexity; earliest start, then base order, on ties."""
    candidates = [b for b in current if b.witness and not b.is_small]
    if not candidates:
        return None

    top = max(b.base.complexity for b in candidates)
    return min(
        (b for b in candidates if b.base.complexity == top),
        key=lambda b: (w.position(b.start), b.base),
    )


def insert_ladder(
    w: AnnulusSystem,
    brick: Brick,
    geodesic: TightGeodesic,
    spec: GraphSpec,
    current: Optional[List[Brick]] = None,
) -> AnnulusSystem:
    """
    Replace the brick by a ladder of annuli over the interior terms of
    ``geodesic``, which runs from the curve ending where the brick starts
    to the curve starting where it ends.

    Raises
    ------
    NotMaximalComplexity
        a non-small witness brick of larger complexity exists, or the brick
        has no changing curve inside it at one of its ends.
    EndpointMismatch
        the geodesic does not join those two curves.
    """
    current = current if current is not None else bricks(w, spec)
    y = brick.base
    top = max((b.base.complexity for b in current if b.witness and not b.is_small), default=0)

    if y.complexity < top:
        raise NotMaximalComplexity(f"a brick of complexity {top} is still present", complexity=y.complexity)
    if brick.gamma_minus is None or brick.gamma_plus is None:
        raise NotMaximalComplexity("brick ends are not changes inside its base", base=y.to_dict())
    if geodesic.start != brick.gamma_minus or geodesic.end != brick.gamma_plus:
        raise EndpointMismatch("geodesic does not join the brick ends", length=len(geodesic))

    events = list(w.events)
    position = events.index(brick.start)
    events.remove(brick.start)
    events.remove(brick.end)

    n = len(geodesic)
    if n == 0:
        # the same curve ends and starts again: join the two annuli
        annuli = [a for a in w.annuli if a.start != brick.end]
        annuli = [
            Annulus(a.curve, a.start, _end_of(w, brick.end)) if a.end == brick.start else a
            for a in annuli
        ]
        return AnnulusSystem(w.surface, tuple(events), tuple(annuli))

    starts: Dict[int, List[int]] = {n: [brick.end]}
    ends: Dict[int, List[int]] = {0: [brick.start]}
    added = []
    following = w.next_event

    for i in range(1, n):
        starts[i], ends[i] = [], []
        for c in geodesic.terms[i].components:
            starts[i].append(following)
            ends[i].append(following + 1)
            added.append(Annulus(c, following, following + 1))
            following += 2

    sequence = []
    for i in range(n):
        if y.complexity >= 2:
            sequence += starts[i + 1] + ends[i]
        else:
            sequence += ends[i] + starts[i + 1]

    events[position:position] = sequence
    logger.debug("ladder of length %d inserted over a complexity %d brick", n, y.complexity)

    return AnnulusSystem(w.surface, tuple(events), w.annuli + tuple(added))


def _end_of(w: AnnulusSystem, start: int) -> int:
    return next(a.end for a in w.annuli if a.start == start)


def extract_path(w: AnnulusSystem, spec: GraphSpec, current: Optional[List[Brick]] = None) -> List[NormalMulticurve]:
    """
    Cross-sections of a system whose bricks are all small, with repeats and
    non-vertices dropped.

    Raises
    ------
    Type2PlacementViolation
        a Type 2 brick spans more than one gap.
    OracleFailure
        two consecutive vertices read off are not adjacent.
    """
    current = current if current is not None else bricks(w, spec)
    assert all(b.is_small for b in current if b.witness), "non-small witness bricks left"

    for brick in current:
        if brick.smallness == Smallness.TYPE2 and brick.gaps > 1:
            raise Type2PlacementViolation(
                f"type 2 brick spans {brick.gaps} gaps", base=brick.base.to_dict(), gaps=brick.gaps
            )

    path: List[NormalMulticurve] = []
    for g in range(w.gap_count):
        m = w.cross_section(g)
        if (not path or path[-1] != m) and is_vertex(spec, m):
            path.append(m)

    for i, (u, v) in enumerate(zip(path, path[1:])):
        if not adjacent(spec, u, v):
            raise OracleFailure("consecutive vertices are not adjacent", position=i)

    return path


def geodesic_oracle(minus: NormalMulticurve, plus: NormalMulticurve, y: Subsurface) -> TightGeodesic:
    d = curve_distance(minus, plus, y, with_path=True)
    if not d.path:
        raise OracleFailure("no geodesic found in the brick", subsurface=y.to_dict(), upper=d.upper)
    if not d.exact:
        logger.warning("geodesic of length %d in a complexity %d brick is not certified", d.upper, y.complexity)

    if y.complexity == 1:
        return TightGeodesic(y, tuple(d.path))

    try:
        return tighten(d.path, y)
    except SpanDegenerate:
        logger.warning("path kept untightened")
        return TightGeodesic(y, tuple(d.path))


def _growth(w: AnnulusSystem, witnesses: Sequence[Subsurface]) -> int:
    curves = w.curves
    spread = 0
    for x in witnesses:
        if x.complexity < 1:
            continue
        projected = {c for curve in curves for c in project_curves(curve, x)}
        spread = max(spread, diameter(list(projected), x))
    return spread


def build_path(
    kspec: GraphSpec,
    a: NormalMulticurve,
    b: NormalMulticurve,
    K: int,
    pool: Optional[CurvePool] = None,
    witnesses: Sequence[Subsurface] = (),
    m: int = 1,
    oracle: Optional[Oracle] = None,
) -> Tuple[List[NormalMulticurve], Dict]:
    """
    Path in K_G between two vertices whose projections agree up to ``K``,
    with a certificate recording every ladder insertion and the checks made
    along the way. ``pool`` is recorded only; geodesics come from ``oracle``.
    """
    assert kspec.family == "k_of"
    assert is_vertex(kspec, a) and is_vertex(kspec, b)

    oracle = oracle or geodesic_oracle
    xi = kspec.surface.complexity
    limit = recursion_bounds(K, xi, m)[1][0]
    certificate = {
        "K": K,
        "M": m,
        "T1": limit,
        "pool": pool.budget if pool is not None else None,
        "stages": [],
    }

    if a == b:
        certificate.update(length=0, within_bound=True)
        return [a], certificate

    w = initial_system(a, b)
    current = bricks(w, kspec)
    complexity = k_complexity(w, kspec, current)

    while not complexity.is_zero:
        if len(certificate["stages"]) >= MAX_STAGES:
            raise OracleFailure("ladder insertion did not terminate", stages=MAX_STAGES)

        brick = select_brick(w, current)
        y = brick.base
        geodesic = oracle(brick.gamma_minus, brick.gamma_plus, y)

        following = insert_ladder(w, brick, geodesic, kspec, current)
        after = bricks(following, kspec)
        lowered = k_complexity(following, kspec, after)

        if not lowered < complexity:
            raise OracleFailure(
                "K-complexity did not decrease", before=complexity.counts, after=lowered.counts
            )

        n = len(geodesic)
        stage = len(certificate["stages"]) + 1
        increment = following.gap_count - w.gap_count
        growth = _growth(following, witnesses) if witnesses else None

        certificate["stages"].append(
            {
                "brick": brick.to_dict(),
                "position": w.position(brick.start),
                "ladder_length": n,
                "increment": increment,
                "increment_bound": 2 * n * y.complexity - 2,
                "before": list(complexity.counts),
                "after": list(lowered.counts),
                "bricks": len(after),
                "brick_bound": 1.5 * following.gap_count + xi,
                "projection_growth": growth,
                "growth_bound": K + 2 * m * stage,
            }
        )

        w, current, complexity = following, after, lowered

    path = extract_path(w, kspec, current)
    length = len(path) - 1

    certificate.update(length=length, within_bound=length <= limit)
    logger.info("%s: path of length %d after %d stages", kspec, length, len(certificate["stages"]))

    return path, certificate
