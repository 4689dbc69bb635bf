from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, List, Tuple

Labels = Tuple[int, int]


@dataclass(frozen=True)
class AbstractPiece:
    """
    Attributes
    ----------
    genus: int
    curves: int
        boundary slots glued to curves.
    labels: Tuple[int, int]
        boundary components of the surface it holds, as (in Δ, not in Δ).
    role: str
        ``witness`` or ``complement``.
    """

    genus: int
    curves: int
    labels: Labels
    role: str = "witness"

    @property
    def boundary(self) -> int:
        return self.curves + sum(self.labels)

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary

    @property
    def complexity(self) -> int:
        return 3 * self.genus + self.boundary - 3

    def to_dict(self) -> Dict[str, Any]:
        return {
            "genus": self.genus,
            "boundary": self.boundary,
            "curves": self.curves,
            "labels": list(self.labels),
            "role": self.role,
        }


@dataclass(frozen=True)
class AbstractDecomposition:
    """
    Surface type glued from pieces along curves; every curve is an edge
    (i, j) between the pieces on its two sides, i == j for a curve with the
    same piece on both sides.
    """

    pieces: Tuple[AbstractPiece, ...]
    edges: Tuple[Tuple[int, int], ...]

    @property
    def euler_characteristic(self) -> int:
        return sum(piece.euler_characteristic for piece in self.pieces)

    @property
    def genus(self) -> int:
        return sum(p.genus for p in self.pieces) + len(self.edges) - len(self.pieces) + 1

    @property
    def boundary(self) -> int:
        return sum(sum(p.labels) for p in self.pieces)

    @property
    def witnesses(self) -> List[AbstractPiece]:
        return [p for p in self.pieces if p.role == "witness"]

    def complement(self, index: int) -> List[Tuple[int, Labels]]:
        """(genus, labels) of every component of the surface minus piece ``index``."""
        others = [i for i in range(len(self.pieces)) if i != index]
        parent = {i: i for i in others}

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        inner = [(i, j) for i, j in self.edges if index not in (i, j)]
        for i, j in inner:
            parent[find(i)] = find(j)

        groups: Dict[int, List[int]] = {}
        for i in others:
            groups.setdefault(find(i), []).append(i)

        result = []
        for members in groups.values():
            edges = sum(1 for i, _ in inner if find(i) == find(members[0]))
            genus = sum(self.pieces[i].genus for i in members) + edges - len(members) + 1
            labels = (
                sum(self.pieces[i].labels[0] for i in members),
                sum(self.pieces[i].labels[1] for i in members),
            )
            result.append((genus, labels))

        return sorted(result)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pieces": [piece.to_dict() for piece in self.pieces],
            "gluing": [list(edge) for edge in self.edges],
            "euler_characteristic": self.euler_characteristic,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AbstractDecomposition":
        pieces = tuple(
            AbstractPiece(p["genus"], p["curves"], tuple(p["labels"]), p["role"]) for p in data["pieces"]
        )
        return cls(pieces, tuple(tuple(edge) for edge in data["gluing"]))


@dataclass(frozen=True)
class WitnessPredicate:
    """
    Witness rule of a family, read off topological data only.

    Attributes
    ----------
    family: str
    genus: int
        genus of the ambient surface.
    delta: int
        size of Δ for arc_companion.
    """

    family: str
    genus: int
    delta: int = 0

    def __call__(self, genus: int, curves: int, labels: Labels, complement: List[Tuple[int, Labels]]) -> bool:
        complexity = 3 * genus + curves + sum(labels) - 3
        if complexity < 1:
            return False

        if curves == 0:
            return True

        if self.family == "curve_graph":
            return False
        if self.family == "sep":
            return all(g == 0 and sum(n) <= 1 for g, n in complement)
        if self.family == "nonsep":
            return genus == self.genus
        if self.family == "cut_system":
            return genus >= 1
        if self.family == "pants":
            return True
        if self.family == "arc_companion":
            return labels[0] == self.delta

        raise ValueError(f"unknown family {self.family}")

    def holds(self, decomposition: AbstractDecomposition, index: int) -> bool:
        piece = decomposition.pieces[index]
        return self(piece.genus, piece.curves, piece.labels, decomposition.complement(index))


def canonical(pieces: List[AbstractPiece], edges: List[Tuple[int, int]], orderings) -> AbstractDecomposition:
    """Lexicographic minimum over relabelings of the pieces."""
    best = None

    for order in orderings:
        position = {old: new for new, old in enumerate(order)}
        relabeled = tuple(pieces[old] for old in order)
        moved = tuple(sorted(tuple(sorted((position[i], position[j]))) for i, j in edges))
        key = (tuple((p.genus, p.curves, p.labels, p.role) for p in relabeled), moved)

        if best is None or key < best[0]:
            best = (key, relabeled, moved)

    return AbstractDecomposition(best[1], best[2])


def labels_of(delta: FrozenSet[str], labels: FrozenSet[str]) -> Labels:
    return len(labels & delta), len(labels - delta)
