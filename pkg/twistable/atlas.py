"""
Fixed triangulation atlas. Every coordinate in the package is relative to the
entry returned by :func:`get_surface` for its surface id.
"""

import json
import logging
from functools import lru_cache
from itertools import chain, combinations
from pathlib import Path
from typing import Any, Dict, Iterator, List, Sequence, Set, Tuple

import networkx as nx

from twistable.classes.surface import MARKED, Surface, SurfaceType, Triangulation
from twistable.exceptions import ConfigurationError, FillsSurface
from twistable.paths import (
    Strand,
    canonical_cycle,
    is_peripheral,
    is_primitive,
    self_intersects,
    weights_of,
)

logger = logging.getLogger(__name__)

ATLAS_VERSION = 2

SURFACES = (
    "S0,4",
    "S0,5",
    "S0,6",
    "S1,1",
    "S1,2",
    "S1,3",
    "S2,0",
    "S2,1",
    "S2,2",
    "S3,0",
)

# front face (0, 1, 2, 3 counter-clockwise from the bottom left), back face mirrored
_PILLOWCASE = Triangulation(
    gluing=(8, 7, 3, 2, 10, 9, 11, 1, 0, 5, 4, 6),
    labels=("0", "1", "2", "0", "2", "3", "0", "2", "1", "0", "3", "2"),
)


def _polygon(genus: int) -> List[int]:
    """Fan triangulation of the 4g-gon with side word a b a^-1 b^-1 ..."""
    sides = 4 * genus
    triangles = sides - 2
    gluing = [-1] * (3 * triangles)

    def polygon_side(i: int) -> int:
        if i == 0:
            return 0
        if i == sides - 1:
            return 3 * (triangles - 1) + 2
        return 3 * (i - 1) + 1

    def pair(x: int, y: int):
        gluing[x], gluing[y] = y, x

    for i in range(2, sides - 1):
        pair(3 * (i - 2) + 2, 3 * (i - 1))

    for j in range(genus):
        pair(polygon_side(4 * j), polygon_side(4 * j + 2))
        pair(polygon_side(4 * j + 1), polygon_side(4 * j + 3))

    return gluing


def _doubled_triangle() -> Tuple[List[int], List[str]]:
    gluing = [5, 4, 3, 2, 1, 0]
    labels = ["0", "1", "2", "0", "2", "1"]
    return gluing, labels


def _subdivide(gluing: List[int], labels: List[str], t: int, label: str):
    """Cone triangle ``t`` off to a new vertex carrying ``label``."""
    partners = gluing[3 * t : 3 * t + 3]
    corners = labels[3 * t : 3 * t + 3]

    b = len(gluing) // 3
    c = b + 1
    gluing.extend([-1] * 6)
    labels.extend([None] * 6)

    moved = {3 * t: 3 * t, 3 * t + 1: 3 * b, 3 * t + 2: 3 * c}

    for old, partner in zip((3 * t, 3 * t + 1, 3 * t + 2), partners):
        new, other = moved[old], moved.get(partner, partner)
        gluing[new], gluing[other] = other, new

    for x, y in ((3 * t + 1, 3 * b + 2), (3 * b + 1, 3 * c + 2), (3 * c + 1, 3 * t + 2)):
        gluing[x], gluing[y] = y, x

    v0, v1, v2 = corners
    labels[3 * t : 3 * t + 3] = [v0, v1, label]
    labels[3 * b : 3 * b + 3] = [v1, v2, label]
    labels[3 * c : 3 * c + 3] = [v2, v0, label]


def build_triangulation(stype: SurfaceType) -> Triangulation:
    """Deterministic recipe for the atlas triangulation of ``stype``."""
    g, b = stype.genus, stype.boundary

    if stype.euler_characteristic >= 0 or (g == 0 and b < 3):
        raise ConfigurationError(f"{stype.name} has no ideal triangulation", surface=stype.name)

    if (g, b) == (0, 4):
        return _PILLOWCASE

    if g == 0:
        gluing, labels = _doubled_triangle()
        extra = [str(i) for i in range(3, b)]
    else:
        gluing = _polygon(g)
        first = "0" if b else MARKED
        labels = [first] * len(gluing)
        extra = [str(i) for i in range(1, b)]

    base = len(gluing) // 3
    for n, label in enumerate(extra):
        _subdivide(gluing, labels, n % base, label)

    return Triangulation(tuple(gluing), tuple(labels))


def _cycles(triangulation: Triangulation, length: int):
    gluing = triangulation.gluing

    def extend(path):
        if len(path) == length:
            last = gluing[path[-1]]
            t, k = divmod(last, 3)
            if path[0] // 3 == t and path[0] != last:
                yield tuple(path)
            return

        entered = gluing[path[-1]]
        t, k = divmod(entered, 3)
        for out in ((k + 1) % 3, (k + 2) % 3):
            path.append(3 * t + out)
            yield from extend(path)
            path.pop()

    for start in range(len(gluing)):
        yield from extend([start])


def _simple_curves(triangulation: Triangulation) -> Iterator[Tuple[int, ...]]:
    """Weights of simple essential closed curves, shortest first."""
    gluing = triangulation.gluing
    seen: Set[Tuple[int, ...]] = set()

    for length in range(1, 4 * len(gluing) + 1):
        batch = set()
        for path in _cycles(triangulation, length):
            canonical = canonical_cycle(path, gluing)
            if not is_primitive(canonical):
                continue

            strand = Strand(canonical)
            if is_peripheral(strand, gluing) or self_intersects(strand, gluing):
                continue
            batch.add(weights_of([strand], triangulation.edge_of, triangulation.edge_count))

        for weights in sorted(batch - seen):
            seen.add(weights)
            yield weights


def is_generating(curves: Sequence) -> bool:
    """
    Whether the curves have the shape of a Humphries set: their intersection
    graph is connected and together they fill the surface.
    """
    from twistable.surface_core import intersection_number, spanned_subsurface

    if not curves:
        return False

    graph = nx.Graph()
    graph.add_nodes_from(range(len(curves)))
    graph.add_edges_from(
        (i, j) for i, j in combinations(range(len(curves)), 2) if intersection_number(curves[i], curves[j])
    )
    if not nx.is_connected(graph):
        return False

    try:
        spanned_subsurface(curves)
    except FillsSurface:
        return True
    return False


def short_curves(surface: Surface, slack: int = 1) -> List:
    """
    Twist generators: up to 2g + b + 1 of the shortest simple essential
    closed curves of the atlas triangulation, then the next shortest curves
    meeting them until :func:`is_generating` holds.
    """
    from twistable.classes.multicurve import NormalMulticurve
    from twistable.surface_core import intersection_number

    stream = _simple_curves(surface.triangulation)
    first = next(stream, None)
    assert first is not None, "no essential curve found"

    cap = 2 * surface.stype.genus + surface.stype.boundary + 1
    shortest = sum(first)
    chosen, pending = [first], []

    for weights in stream:
        if sum(weights) >= shortest + slack or len(chosen) >= cap:
            pending.append(weights)
            break
        chosen.append(weights)

    curves = [NormalMulticurve(surface, weights) for weights in chosen]

    for weights in chain(pending, stream):
        if is_generating(curves):
            break
        curve = NormalMulticurve(surface, weights)
        if any(intersection_number(curve, other) for other in curves):
            curves.append(curve)

    assert is_generating(curves), "no generating set found"
    logger.info("%s: %d twist generators", surface.name, len(curves))

    return curves


@lru_cache(maxsize=None)
def get_surface(name: str) -> Surface:
    stype = SurfaceType.parse(name)

    if stype.name not in SURFACES:
        raise ConfigurationError(f"{stype.name} is not in the atlas", surface=stype.name)

    return Surface(stype, build_triangulation(stype))


def slope_weights(surface: Surface, p: int, q: int) -> Tuple[int, ...]:
    """Coordinates of the straight curve of slope p/q on S1,1 or S0,4."""
    horizontal, vertical, diagonal = abs(p), abs(q), abs(q - p)

    if surface.name == "S1,1":
        return horizontal, vertical, diagonal
    if surface.name == "S0,4":
        return horizontal, vertical, diagonal, horizontal, vertical, diagonal

    raise ConfigurationError(f"no slope model on {surface.name}", surface=surface.name)


def decode_slope(surface: Surface, weights: Tuple[int, ...]) -> Tuple[int, int]:
    """Inverse of :func:`slope_weights`, normalised to a non-negative denominator."""
    if surface.name not in ("S1,1", "S0,4"):
        raise ConfigurationError(f"no slope model on {surface.name}", surface=surface.name)

    p, q, diagonal = weights[0], weights[1], weights[2]

    if diagonal != abs(q - p):
        p = -p
    if q == 0:
        return 1, 0

    return p, q


def to_dict() -> Dict[str, Any]:
    surfaces = {}

    for name in SURFACES:
        surface = get_surface(name)
        surfaces[name] = {
            "genus": surface.stype.genus,
            "boundary": surface.stype.boundary,
            "triangulation": surface.triangulation.to_dict(),
            "generators": [list(curve.weights) for curve in surface.generators],
        }

    return {"version": ATLAS_VERSION, "surfaces": surfaces}


def dump(path: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)

    with open(target, "w+") as file:
        json.dump(to_dict(), file, indent=2, sort_keys=True)


def load(path: str) -> Dict[str, Surface]:
    with open(path, "r") as file:
        data = json.load(file)

    if data.get("version") != ATLAS_VERSION:
        raise ConfigurationError(
            "atlas version mismatch", found=data.get("version"), expected=ATLAS_VERSION
        )

    result = {}
    for name, entry in data["surfaces"].items():
        stype = SurfaceType(entry["genus"], entry["boundary"])
        result[name] = Surface(stype, Triangulation.from_dict(entry["triangulation"]), entry.get("generators"))

    return result
