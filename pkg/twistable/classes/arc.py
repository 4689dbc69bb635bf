from typing import Any, Dict, FrozenSet, Optional, Sequence, Tuple

from twistable.paths import Strand, reduce_arc, weights_of
from .commons import Base, lazy_property
from .multicurve import NormalMulticurve, Subsurface


def _edge_twin(strand: Strand, gluing: Sequence[int]) -> Strand:
    """The same edge arc seen from the triangle on the other side of its edge."""
    t, k = divmod(strand.start, 3)
    j = strand.end % 3
    a = k if j == (k + 1) % 3 else j

    u, b = divmod(gluing[3 * t + a], 3)
    # the start of a side is the end of its partner
    image = {3 * t + a: 3 * u + (b + 1) % 3, 3 * t + (a + 1) % 3: 3 * u + b}

    return Strand((), False, image[strand.start], image[strand.end])


class NormalArcSystem(Base):
    """
    Essential arc between labelled punctures, kept as its reduced dual path.

    Attributes
    ----------
    strand: twistable.paths.Strand
        reduced path, oriented so that (crossings, start, end) is smallest.
    weights*: Tuple[int, ...]
        number of times the arc crosses each edge.
    ends*: Dict[str, int]
        arc ends at every puncture label.
    """

    def __init__(self, surface, strand: Strand):
        super().__init__(surface)
        assert not strand.cyclic

        gluing = surface.triangulation.gluing
        forms = [strand, strand.reversed(gluing)]
        if not strand.crossings:
            twin = _edge_twin(strand, gluing)
            forms += [twin, twin.reversed(gluing)]

        self.strand: Strand = min(forms, key=lambda s: (s.crossings, s.start, s.end))

    @classmethod
    def from_path(cls, surface, start: int, crossings: Sequence[int], end: int) -> Optional["NormalArcSystem"]:
        """Normal form of the arc leaving corner ``start`` and arriving at ``end``; ``None`` if inessential."""
        strand = reduce_arc(start, crossings, end, surface.triangulation.gluing)
        return cls(surface, strand) if strand is not None else None

    @lazy_property
    def weights(self) -> Tuple[int, ...]:
        triangulation = self.surface.triangulation
        return weights_of([self.strand], triangulation.edge_of, triangulation.edge_count)

    @lazy_property
    def ends(self) -> Dict[str, int]:
        labels = self.surface.triangulation.labels
        result: Dict[str, int] = {}
        for corner in (self.strand.start, self.strand.end):
            result[labels[corner]] = result.get(labels[corner], 0) + 1
        return result

    @property
    def endpoint_labels(self) -> FrozenSet[str]:
        return frozenset(self.ends)

    @property
    def key(self):
        return self.strand.crossings, self.strand.start, self.strand.end

    def __eq__(self, other):
        return isinstance(other, NormalArcSystem) and self.surface == other.surface and self.key == other.key

    def __lt__(self, other):
        return (len(self.strand), self.key) < (len(other.strand), other.key)

    def __hash__(self):
        return hash((self.surface.name, self.key))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "surface": self.surface.name,
            "weights": list(self.weights),
            "ends": dict(sorted(self.ends.items())),
            "path": [self.strand.start, list(self.strand.crossings), self.strand.end],
        }

    def __repr__(self):  # pragma: no cover
        return f"{self.surface.name}~{sorted(self.ends.items())}{list(self.weights)}"


class GSDeltaVertex:
    """
    Vertex of the companion graph: one curve, or a pair of disjoint curves,
    cutting off a pair of pants that meets Δ.

    Attributes
    ----------
    multicurve: twistable.classes.multicurve.NormalMulticurve
    pants: twistable.classes.multicurve.Subsurface
        the cut-off pants, the canonical one when two qualify.
    delta: FrozenSet[str]
    """

    def __init__(self, multicurve: NormalMulticurve, pants: Subsurface, delta: FrozenSet[str]):
        self.multicurve = multicurve
        self.pants = pants
        self.delta = frozenset(delta)

        assert pants.is_pants and pants.labels & self.delta

    @property
    def delta_labels(self) -> FrozenSet[str]:
        return self.pants.labels & self.delta

    def __eq__(self, other):
        return isinstance(other, GSDeltaVertex) and self.multicurve == other.multicurve

    def __hash__(self):
        return hash(self.multicurve)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "multicurve": self.multicurve.to_dict(),
            "pants": self.pants.to_dict(),
            "delta": sorted(self.delta_labels),
        }
