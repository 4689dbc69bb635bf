from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from .multicurve import NormalMulticurve, Subsurface


class Smallness(str, Enum):
    TYPE1 = "type1"
    TYPE2 = "type2"
    NOT_SMALL = "not_small"

    def __str__(self):  # pragma: no cover
        return self.value


@dataclass(frozen=True)
class Annulus:
    """
    Attributes
    ----------
    curve: twistable.classes.multicurve.NormalMulticurve
        the base curve.
    start: int
        event id where the annulus begins.
    end: int
        event id where it ends.
    """

    curve: NormalMulticurve
    start: int
    end: int


@dataclass(frozen=True)
class AnnulusSystem:
    """
    Vertical annuli over a totally ordered list of events. The multicurve
    between two consecutive events is the cross-section of that gap.

    Attributes
    ----------
    surface: twistable.classes.surface.Surface
    events: Tuple[int, ...]
        event ids in order; the first and last are the ends of the interval.
    annuli: Tuple[Annulus, ...]
    """

    surface: Any
    events: Tuple[int, ...]
    annuli: Tuple[Annulus, ...]

    def position(self, event: int) -> int:
        return self.events.index(event)

    @property
    def gap_count(self) -> int:
        return len(self.events) - 1

    @property
    def next_event(self) -> int:
        return max(self.events) + 1

    def active(self, gap: int) -> List[Annulus]:
        positions = {e: i for i, e in enumerate(self.events)}
        return [a for a in self.annuli if positions[a.start] <= gap < positions[a.end]]

    def cross_section(self, gap: int) -> NormalMulticurve:
        curves = [a.curve for a in self.active(gap)]
        if not curves:
            return NormalMulticurve(self.surface, [0] * self.surface.triangulation.edge_count)
        return NormalMulticurve.union(self.surface, curves)

    def changing_at(self, event: int) -> List[Annulus]:
        return [a for a in self.annuli if event in (a.start, a.end)]

    @property
    def is_generic(self) -> bool:
        inner = set(self.events[1:-1])
        ends = [e for a in self.annuli for e in (a.start, a.end) if e in inner]
        return len(ends) == len(set(ends))

    @property
    def curves(self) -> List[NormalMulticurve]:
        return sorted({a.curve for a in self.annuli})

    def to_dict(self) -> Dict[str, Any]:
        positions = {e: i for i, e in enumerate(self.events)}
        return {
            "surface": self.surface.name,
            "events": len(self.events),
            "annuli": [
                {"curve": list(a.curve.weights), "start": positions[a.start], "end": positions[a.end]}
                for a in self.annuli
            ],
        }


@dataclass(frozen=True)
class Brick:
    """
    Attributes
    ----------
    base: twistable.classes.multicurve.Subsurface
    start: int
        event id where the base appears.
    end: int
        event id where it disappears.
    gaps: int
        number of consecutive gaps spanned.
    witness: bool
    smallness: Smallness
    gamma_minus: Optional[NormalMulticurve]
        curve inside the base changing at the start event.
    gamma_plus: Optional[NormalMulticurve]
        curve inside the base changing at the end event.
    """

    base: Subsurface
    start: int
    end: int
    gaps: int
    witness: bool
    smallness: Smallness
    gamma_minus: Optional[NormalMulticurve] = None
    gamma_plus: Optional[NormalMulticurve] = None

    @property
    def is_small(self) -> bool:
        return self.smallness != Smallness.NOT_SMALL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": self.base.to_dict(),
            "gaps": self.gaps,
            "witness": self.witness,
            "smallness": self.smallness.value,
        }


@dataclass(frozen=True, order=True)
class KComplexity:
    """Non-small witness brick counts, from the top complexity down to one."""

    counts: Tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.counts)

    def to_dict(self) -> Dict[str, Any]:
        return {"counts": list(self.counts)}
