import re
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from twistable.exceptions import ConfigurationError
from .commons import lazy_property

MARKED = "*"

_SURFACE_ID = re.compile(r"^S?(\d+),(\d+)$")


@dataclass(frozen=True, order=True)
class SurfaceType:
    """
    Attributes
    ----------
    genus: int
        genus of the surface.
    boundary: int
        number of boundary components (modelled as punctures).
    """

    genus: int
    boundary: int

    def __post_init__(self):
        assert self.genus >= 0
        assert self.boundary >= 0

    @classmethod
    def parse(cls, text: str) -> "SurfaceType":
        match = _SURFACE_ID.match(text.replace(" ", ""))

        if not match:
            raise ConfigurationError(f"malformed surface id {text!r}", surface=text)

        return cls(int(match.group(1)), int(match.group(2)))

    @property
    def name(self) -> str:
        return f"S{self.genus},{self.boundary}"

    @property
    def complexity(self) -> int:
        return 3 * self.genus + self.boundary - 3

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary

    @property
    def is_sporadic(self) -> bool:
        return self.complexity <= 1

    def __str__(self):  # pragma: no cover
        return self.name


@dataclass(frozen=True)
class Triangulation:
    """
    Ideal triangulation as a side gluing. Side ``3 * t + k`` of triangle ``t``
    runs from its vertex ``k`` to its vertex ``k + 1``; corner ``3 * t + k``
    is vertex ``k`` of triangle ``t``.

    Attributes
    ----------
    gluing: Tuple[int, ...]
        orientation reversing involution on sides.
    labels: Tuple[str, ...]
        puncture label of every corner; ``*`` marks a forgotten point.
    """

    gluing: Tuple[int, ...]
    labels: Tuple[str, ...]
    edge_of: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    edges: Tuple[Tuple[int, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sides = len(self.gluing)
        assert sides % 3 == 0 and sides == len(self.labels)

        edge_of = [-1] * sides
        edges = []

        for side, other in enumerate(self.gluing):
            assert other != side, "gluing has a fixed point"
            assert self.gluing[other] == side, "gluing is not an involution"

            if edge_of[side] == -1:
                edge_of[side] = edge_of[other] = len(edges)
                edges.append((side, other))

        object.__setattr__(self, "edge_of", tuple(edge_of))
        object.__setattr__(self, "edges", tuple(edges))

        for side, other in enumerate(self.gluing):
            # the start of one side is the end of the other
            assert self.labels[side] == self.labels[self.next_corner(other)]

    @property
    def triangle_count(self) -> int:
        return len(self.gluing) // 3

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @staticmethod
    def next_corner(side: int) -> int:
        t, k = divmod(side, 3)
        return 3 * t + (k + 1) % 3

    @lazy_property
    def punctures(self) -> Tuple[str, ...]:
        return tuple(sorted(set(self.labels)))

    @property
    def euler_characteristic(self) -> int:
        marked = sum(1 for label in self.punctures if label == MARKED)
        return self.triangle_count - self.edge_count + marked

    def to_dict(self) -> Dict[str, Any]:
        return {"gluing": list(self.gluing), "labels": list(self.labels)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Triangulation":
        return cls(tuple(data["gluing"]), tuple(data["labels"]))


class Surface:
    """
    Atlas entry: a topological type together with its fixed triangulation.

    Attributes
    ----------
    stype: twistable.classes.surface.SurfaceType
        topological type of the surface.
    triangulation: twistable.classes.surface.Triangulation
        the atlas triangulation every coordinate refers to.
    generators*: List[twistable.classes.multicurve.NormalMulticurve]
        twist generators, read from ``generator_weights`` when given and
        otherwise the short curves of the triangulation.
    """

    def __init__(
        self,
        stype: SurfaceType,
        triangulation: Triangulation,
        generator_weights: Optional[List[List[int]]] = None,
    ):
        self.stype = stype
        self.triangulation = triangulation
        self.generator_weights = generator_weights

        assert triangulation.euler_characteristic == stype.euler_characteristic

    @property
    def name(self) -> str:
        return self.stype.name

    @property
    def complexity(self) -> int:
        return self.stype.complexity

    @property
    def punctures(self) -> List[str]:
        return [p for p in self.triangulation.punctures if p != MARKED]

    @lazy_property
    def generators(self) -> List:
        from twistable.atlas import short_curves
        from twistable.classes.multicurve import NormalMulticurve

        if self.generator_weights is not None:
            return [NormalMulticurve(self, weights) for weights in self.generator_weights]
        return short_curves(self)

    def __eq__(self, other):
        return isinstance(other, Surface) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):  # pragma: no cover
        return f"Surface({self.name})"
