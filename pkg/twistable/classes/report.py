import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .multicurve import NormalMulticurve, Subsurface

SCHEMA_VERSION = 1


def fingerprint(data: Any) -> str:
    """sha256 of the canonical JSON of ``data``."""
    text = json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ProjectionSet:
    """
    Attributes
    ----------
    target: twistable.classes.multicurve.Subsurface
    curves: Tuple[NormalMulticurve, ...]
        curves of the target, in surface coordinates.
    """

    target: Subsurface
    curves: Tuple[NormalMulticurve, ...]

    @property
    def is_empty(self) -> bool:
        return not self.curves

    def __len__(self):
        return len(self.curves)

    def __iter__(self):
        return iter(self.curves)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target": self.target.to_dict(),
            "curves": [list(c.weights) for c in self.curves],
        }


@dataclass
class Sample:
    inputs: Dict[str, Any]
    values: Dict[str, Any]
    verdict: Optional[bool] = True

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.inputs)

    def to_dict(self) -> Dict[str, Any]:
        return {"fingerprint": self.fingerprint, "values": self.values, "verdict": self.verdict}


@dataclass
class AuditReport:
    """
    Attributes
    ----------
    axiom_id: str
        name of the audited statement.
    surface: str
    family: Optional[str]
    pool: Dict[str, Any]
        budget of the pool samples were drawn from.
    samples: List[twistable.classes.report.Sample]
    constants: Dict[str, Any]
        maxima or minima measured over the samples.
    notes: List[str]
    """

    axiom_id: str
    surface: str
    family: Optional[str] = None
    pool: Dict[str, Any] = field(default_factory=dict)
    samples: List[Sample] = field(default_factory=list)
    constants: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    ceiling: Optional[float] = None

    def add(self, inputs: Dict[str, Any], values: Dict[str, Any], verdict: Optional[bool] = True) -> Sample:
        sample = Sample(inputs, values, verdict)
        self.samples.append(sample)
        return sample

    @property
    def verdict(self) -> bool:
        return all(s.verdict is not False for s in self.samples)

    @property
    def pool_fingerprint(self) -> str:
        return fingerprint(self.pool)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "axiom_id": self.axiom_id,
            "surface": self.surface,
            "family": self.family,
            "pool_fingerprint": self.pool_fingerprint,
            "pool": self.pool,
            "samples": [s.to_dict() for s in self.samples],
            "constants": self.constants,
            "ceiling": self.ceiling,
            "notes": self.notes,
            "verdict": self.verdict,
        }


def weight_lists(items) -> List[List[int]]:
    return [list(item.weights) for item in items]


def describe(**named) -> Dict[str, Any]:
    result = {}
    for key, value in named.items():
        if isinstance(value, (Subsurface, NormalMulticurve)):
            result[key] = value.to_dict()
        else:
            result[key] = value
    return result
