from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Tuple

from .report import fingerprint

# fields that never change a report
_RUNTIME = ("cache", "out", "verbose")


@dataclass(frozen=True)
class RunConfig:
    """
    Attributes
    ----------
    surface: str
        atlas surface id, ``S<g>,<b>``.
    family: str
        graph family id, e.g. ``sep``, ``k_of(pants)``, ``arc_companion``.
    delta: Tuple[str, ...]
        boundary labels forming Δ.
    pool_words: int
        twist word length used to grow the curve pool.
    pool_cap: int
        largest pool size.
    samples: int
        samples per audit.
    cutoff: int
        distance formula threshold.
    seed: int
        seed of every sampler.
    radius: int
        ball radius.
    neighbour_cap: Optional[int]
        most neighbours listed per ball vertex, unbounded when missing.
    certify: bool
        certify distance formula distances by pool saturation.
    """

    surface: str = "S1,1"
    family: str = "curve_graph"
    delta: Tuple[str, ...] = ()
    pool_words: int = 2
    pool_cap: int = 400
    samples: int = 50
    cutoff: int = 3
    seed: int = 0
    radius: int = 2
    kappa_ceiling: float = 10
    bgi_ceiling: float = 100
    intersection_cap: int = 12
    neighbour_cap: Optional[int] = None
    certify: bool = False
    cache: Optional[str] = field(default=None, compare=False)
    out: Optional[str] = field(default=None, compare=False)
    verbose: bool = field(default=False, compare=False)

    def __post_init__(self):
        assert self.pool_words >= 0
        assert self.pool_cap >= 1
        assert self.samples >= 0
        assert self.cutoff >= 1
        assert self.radius >= 0
        assert self.neighbour_cap is None or self.neighbour_cap >= 1

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        values = {name: getattr(args, name) for name in cls.__dataclass_fields__ if getattr(args, name, None) is not None}

        delta = values.get("delta")
        if isinstance(delta, str):
            values["delta"] = tuple(label for label in delta.split(",") if label)

        return cls(**values)

    @property
    def budget(self) -> Dict[str, int]:
        return {"word_length": self.pool_words, "intersection_cap": self.intersection_cap, "size_cap": self.pool_cap}

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for name in _RUNTIME:
            data.pop(name)
        data["delta"] = list(self.delta)
        return data

    def fingerprint(self) -> str:
        return fingerprint(self.to_dict())
