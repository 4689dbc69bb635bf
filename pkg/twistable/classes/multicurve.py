from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

from twistable.paths import Strand, weights_of
from twistable.tracing import Piece, cut, trace
from .commons import Base, lazy_property


class NormalMulticurve(Base):
    """
    Attributes
    ----------
    surface: twistable.classes.surface.Surface
        atlas entry the coordinates refer to.
    weights: Tuple[int, ...]
        number of times the multicurve crosses each edge.
    components*: List[twistable.classes.multicurve.NormalMulticurve]
        individual curves, sorted by canonical path.
    strands*: List[twistable.paths.Strand]
        canonical dual path of every component.
    note:
        **the attributes marked with a * are traced once and cached.**
    """

    def __init__(self, surface, weights: Iterable[int]):
        super().__init__(surface)
        self.weights: Tuple[int, ...] = tuple(int(w) for w in weights)

    @classmethod
    def from_strands(cls, surface, strands: Iterable[Strand]) -> "NormalMulticurve":
        triangulation = surface.triangulation
        return cls(surface, weights_of(strands, triangulation.edge_of, triangulation.edge_count))

    @classmethod
    def from_crossings(cls, surface, crossings: Tuple[int, ...]) -> "NormalMulticurve":
        return cls.from_strands(surface, [Strand(tuple(crossings))])

    @classmethod
    def union(cls, surface, curves: Iterable["NormalMulticurve"]) -> "NormalMulticurve":
        """Multicurve made of the distinct components of pairwise disjoint inputs."""
        seen: Dict[Tuple[int, ...], Strand] = {}
        for curve in curves:
            for strand in curve.strands:
                seen.setdefault(strand.crossings, strand)
        return cls.from_strands(surface, [seen[key] for key in sorted(seen)])

    @lazy_property
    def traced(self):
        return trace(self.weights, self.surface.triangulation)

    @lazy_property
    def strands(self) -> List[Strand]:
        return [Strand(curve.crossings) for curve in self.traced]

    @lazy_property
    def components(self) -> List["NormalMulticurve"]:
        if len(self.traced) == 1:
            return [self]
        return [NormalMulticurve.from_strands(self.surface, [s]) for s in self.strands]

    @property
    def is_empty(self) -> bool:
        return not any(self.weights)

    @property
    def is_curve(self) -> bool:
        return len(self) == 1

    @property
    def strand(self) -> Strand:
        assert self.is_curve
        return self.strands[0]

    def pieces(self, merge: Iterable[int] = ()) -> List[Piece]:
        return cut(self.weights, self.surface.triangulation, merge)

    def index_of(self, curve: "NormalMulticurve") -> Optional[int]:
        keys = [strand.crossings for strand in self.strands]
        key = curve.strand.crossings
        return keys.index(key) if key in keys else None

    def __contains__(self, curve: "NormalMulticurve") -> bool:
        return self.index_of(curve) is not None

    def __len__(self):
        return len(self.traced)

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other):
        return (
            isinstance(other, NormalMulticurve)
            and self.surface == other.surface
            and self.weights == other.weights
        )

    def __lt__(self, other):
        return (sum(self.weights), self.weights) < (sum(other.weights), other.weights)

    def __hash__(self):
        return hash((self.surface.name, self.weights))

    def to_dict(self) -> Dict[str, Any]:
        return {"surface": self.surface.name, "weights": list(self.weights)}

    def __repr__(self):  # pragma: no cover
        return f"{self.surface.name}{list(self.weights)}"


class Subsurface(Base):
    """
    Essential subsurface, stored as its boundary multicurve in the surface
    together with the boundary sides facing it.

    Attributes
    ----------
    boundary: twistable.classes.multicurve.NormalMulticurve
        the multicurve ∂_S X (empty for the whole surface).
    sides: FrozenSet[Tuple[Tuple[int, ...], bool]]
        (canonical path, left side) of every boundary side facing X.
    piece*: twistable.tracing.Piece
        the complementary component of the boundary that is X.
    genus*: int
    labels*: FrozenSet[str]
        boundary labels of the surface contained in X.
    """

    def __init__(self, surface, boundary: NormalMulticurve, sides: Iterable[Tuple[Tuple[int, ...], bool]] = ()):
        super().__init__(surface)
        self.boundary = boundary
        self.sides: FrozenSet[Tuple[Tuple[int, ...], bool]] = frozenset(sides)

        assert boundary.is_empty or self.sides

    @classmethod
    def whole(cls, surface) -> "Subsurface":
        return cls(surface, NormalMulticurve(surface, [0] * surface.triangulation.edge_count))

    @classmethod
    def from_piece(cls, carrier: NormalMulticurve, piece: Piece) -> "Subsurface":
        """Normalise a complementary component of ``carrier`` to its own boundary."""
        surface = carrier.surface
        strands = carrier.strands
        adjacent = [strands[index] for index in piece.curves]

        if not adjacent:
            return cls.whole(surface)

        boundary = NormalMulticurve.from_strands(surface, adjacent)
        anchor, left = piece.sides[0]
        key = strands[anchor].crossings

        position = [s.crossings for s in boundary.strands].index(key)
        for own in boundary.pieces():
            if (position, left) in own.sides:
                keys = boundary.strands
                return cls(surface, boundary, [(keys[i].crossings, l) for i, l in own.sides])

        raise AssertionError("boundary side lost while normalising")

    @lazy_property
    def piece(self) -> Piece:
        if self.boundary.is_empty:
            pieces = self.boundary.pieces()
            assert len(pieces) == 1
            return pieces[0]

        keys = [s.crossings for s in self.boundary.strands]
        wanted = {(keys.index(key), left) for key, left in self.sides}

        for piece in self.boundary.pieces():
            if wanted & set(piece.sides):
                return piece

        raise AssertionError("no component carries the selected sides")

    @property
    def is_whole(self) -> bool:
        return self.boundary.is_empty

    @lazy_property
    def genus(self) -> int:
        return self.piece.genus

    @lazy_property
    def labels(self) -> FrozenSet[str]:
        return self.piece.labels

    @property
    def boundary_count(self) -> int:
        return self.piece.boundary

    @property
    def complexity(self) -> int:
        return self.piece.complexity

    @property
    def euler_characteristic(self) -> int:
        return self.piece.euler_characteristic

    @property
    def top_type(self) -> Tuple[int, int, int]:
        """(genus, boundary curves inside S, boundary components of S)."""
        return self.genus, len(self.piece.sides), len(self.labels)

    @property
    def is_pants(self) -> bool:
        return self.genus == 0 and self.boundary_count == 3

    def faces(self, curve: NormalMulticurve) -> FrozenSet[bool]:
        """Sides of a boundary curve that face X."""
        key = curve.strand.crossings
        return frozenset(left for k, left in self.sides if k == key)

    @property
    def key(self):
        return self.surface.name, self.boundary.weights, self.sides

    def __eq__(self, other):
        return isinstance(other, Subsurface) and self.key == other.key

    def __lt__(self, other):
        return (self.complexity, self.boundary.weights, sorted(self.sides)) < (
            other.complexity,
            other.boundary.weights,
            sorted(other.sides),
        )

    def __hash__(self):
        return hash(self.key)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "surface": self.surface.name,
            "boundary": list(self.boundary.weights),
            "sides": sorted([list(key), left] for key, left in self.sides),
            "type": list(self.top_type),
        }

    def __repr__(self):  # pragma: no cover
        g, inner, outer = self.top_type
        return f"X(g={g}, b={inner}+{outer}, ∂={list(self.boundary.weights)})"


class CurvePool(Base):
    """
    Finite, deduplicated window into the curves of a surface.

    Attributes
    ----------
    curves: List[twistable.classes.multicurve.NormalMulticurve]
        pool members sorted by weight.
    budget: Dict[str, int]
        word length, intersection cap and size cap used to grow the pool.
    complete: bool
        false when the size cap stopped the growth early.
    """

    def __init__(self, surface, curves: Iterable[NormalMulticurve], budget: Dict[str, int], complete: bool = True):
        super().__init__(surface)
        self.curves: List[NormalMulticurve] = sorted(set(curves))
        self.budget = dict(budget)
        self.complete = complete

    def __len__(self):
        return len(self.curves)

    def __iter__(self):
        return iter(self.curves)

    @lazy_property
    def members(self) -> FrozenSet[NormalMulticurve]:
        return frozenset(self.curves)

    def __contains__(self, curve):
        return curve in self.members

    def to_dict(self) -> Dict[str, Any]:
        return {
            "surface": self.surface.name,
            "budget": self.budget,
            "complete": self.complete,
            "curves": [list(curve.weights) for curve in self.curves],
        }

    @classmethod
    def from_dict(cls, surface, data: Dict[str, Any]) -> "CurvePool":
        curves = [NormalMulticurve(surface, weights) for weights in data["curves"]]
        return cls(surface, curves, data["budget"], data["complete"])
