import re
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

import networkx as nx

from twistable.exceptions import ConfigurationError
from .multicurve import NormalMulticurve, Subsurface

FAMILIES = ("curve_graph", "sep", "nonsep", "pants", "cut_system")

_K_OF = re.compile(r"^k_of[(:]([a-z_]+)\)?$")
_ARC = re.compile(r"^arc_companion(?:[(:]([^)]*)\)?)?$")


@dataclass(frozen=True)
class GraphSpec:
    """
    Attributes
    ----------
    family: str
        one of curve_graph, sep, nonsep, pants, cut_system, k_of, arc_companion.
    surface: twistable.classes.surface.Surface
    base: Optional[str]
        the family G of a k_of(G) graph.
    delta: FrozenSet[str]
        boundary labels forming Δ for arc_companion.
    """

    family: str
    surface: Any
    base: Optional[str] = None
    delta: FrozenSet[str] = frozenset()

    def __post_init__(self):
        if self.family == "k_of":
            assert self.base in FAMILIES
        elif self.family != "arc_companion":
            assert self.family in FAMILIES

    @classmethod
    def parse(cls, text: str, surface, delta=()) -> "GraphSpec":
        text = text.strip().replace(" ", "")

        if text in FAMILIES:
            return cls(text, surface)

        match = _K_OF.match(text)
        if match and match.group(1) in FAMILIES:
            return cls("k_of", surface, base=match.group(1))

        match = _ARC.match(text)
        if match:
            labels = [x for x in (match.group(1) or "").split(",") if x] or list(delta)
            if not labels:
                labels = sorted(surface.punctures)[:1]
            unknown = set(labels) - set(surface.punctures)
            if unknown:
                raise ConfigurationError(f"unknown boundary labels {sorted(unknown)}", surface=surface.name)
            return cls("arc_companion", surface, delta=frozenset(labels))

        raise ConfigurationError(f"unknown family {text!r}", family=text)

    @property
    def family_id(self) -> str:
        if self.family == "k_of":
            return f"k_of({self.base})"
        if self.family == "arc_companion":
            return f"arc_companion({','.join(sorted(self.delta))})"
        return self.family

    @property
    def witness_family(self) -> str:
        """Family whose witnesses this graph shares (K_G has the witnesses of G)."""
        return self.base if self.family == "k_of" else self.family

    @property
    def bound(self) -> int:
        """Intersection bound R satisfied by adjacent vertices."""
        if self.family == "k_of":
            return 2
        if self.family == "arc_companion":
            return 4
        if self.family == "pants":
            return 2
        return 1

    def __str__(self):  # pragma: no cover
        return f"{self.family_id} on {self.surface.name}"


@dataclass
class Ball:
    """
    Attributes
    ----------
    spec: twistable.classes.graph.GraphSpec
    center: twistable.classes.multicurve.NormalMulticurve
    radius: int
    graph: networkx.Graph
        discovered vertices and edges.
    distances: Dict[NormalMulticurve, int]
        exact within the explored subgraph, upper bounds in the full graph.
    complete: Dict[NormalMulticurve, bool]
        whether the neighbour enumeration of a vertex was pool-saturated.
    pool: Dict[str, Any]
        budget of the pool the ball was explored in.
    """

    spec: GraphSpec
    center: NormalMulticurve
    radius: int
    graph: nx.Graph
    distances: Dict[NormalMulticurve, int]
    complete: Dict[NormalMulticurve, bool]
    pool: Dict[str, Any] = field(default_factory=dict)

    @property
    def vertices(self) -> List[NormalMulticurve]:
        return sorted(self.distances, key=lambda v: (self.distances[v], v))

    def __len__(self):
        return len(self.distances)

    def __contains__(self, vertex):
        return vertex in self.distances

    def to_dict(self) -> Dict[str, Any]:
        index = {v: i for i, v in enumerate(self.vertices)}
        return {
            "surface": self.spec.surface.name,
            "family": self.spec.family_id,
            "radius": self.radius,
            "pool": self.pool,
            "vertices": [
                {"weights": list(v.weights), "distance": self.distances[v], "complete": self.complete[v]}
                for v in self.vertices
            ],
            "edges": sorted(sorted([index[u], index[v]]) for u, v in self.graph.edges),
        }

    @classmethod
    def from_dict(cls, spec: GraphSpec, data: Dict[str, Any]) -> "Ball":
        surface = spec.surface
        vertices = [NormalMulticurve(surface, v["weights"]) for v in data["vertices"]]

        graph = nx.Graph()
        graph.add_nodes_from(vertices)
        graph.add_edges_from((vertices[i], vertices[j]) for i, j in data["edges"])

        distances = {v: entry["distance"] for v, entry in zip(vertices, data["vertices"])}
        complete = {v: entry["complete"] for v, entry in zip(vertices, data["vertices"])}
        center = next(v for v, d in distances.items() if d == 0)

        return cls(spec, center, data["radius"], graph, distances, complete, data["pool"])


@dataclass(frozen=True)
class Distance:
    """
    Attributes
    ----------
    upper: Optional[int]
        length of the best path found, None when no path was found.
    lower: int
        certified lower bound.
    criterion: Optional[str]
        how exactness was certified (farey, disjointness, filling, saturation).
    path: Tuple[NormalMulticurve, ...]
    """

    upper: Optional[int]
    lower: int
    criterion: Optional[str] = None
    path: Tuple[NormalMulticurve, ...] = ()

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> Optional[int]:
        return self.upper

    def to_dict(self) -> Dict[str, Any]:
        return {
            "upper_bound": self.upper,
            "lower_bound": self.lower,
            "exact": self.exact,
            "criterion": self.criterion,
            "path": [list(v.weights) for v in self.path],
        }


@dataclass(frozen=True)
class TightGeodesic:
    """
    Attributes
    ----------
    subsurface: twistable.classes.multicurve.Subsurface
    terms: Tuple[NormalMulticurve, ...]
        v_0 .. v_n, consecutive terms disjoint.
    """

    subsurface: Subsurface
    terms: Tuple[NormalMulticurve, ...]

    @property
    def start(self) -> NormalMulticurve:
        return self.terms[0]

    @property
    def end(self) -> NormalMulticurve:
        return self.terms[-1]

    def __len__(self):
        return len(self.terms) - 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subsurface": self.subsurface.to_dict(),
            "terms": [list(v.weights) for v in self.terms],
        }
