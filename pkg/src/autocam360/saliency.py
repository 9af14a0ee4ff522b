"""Per-object saliency: how interesting an object is for a given shot style.

The score combines object class, size, motion and isolation linearly,
then damps by how much the object was seen in recent shots, so a fully
visited object keeps ``1 - visited_weight`` of its saliency and can still
win an otherwise empty scene.  All scores stay in [0, 1] by construction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from .measures import ObjectMeasures


class ShotType(enum.Enum):
    """The five supported shot styles; declaration order is the canonical
    tie-break order everywhere."""

    TRACKING = "tracking"
    STATIC = "static"
    MEDIUM = "medium"
    PAN = "pan"
    RECOMMENDER = "recommender"


@dataclass(frozen=True)
class TypeWeights:
    """Size/motion/isolation mix for one shot type; must sum to 1."""

    size: float
    motion: float
    isolation: float

    def __post_init__(self) -> None:
        for name in ("size", "motion", "isolation"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"weight {name}={v!r} outside [0, 1]")
        total = self.size + self.motion + self.isolation
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"type weights must sum to 1, got {total!r}")


def _default_type_weights() -> dict[ShotType, TypeWeights]:
    return {
        ShotType.TRACKING: TypeWeights(0.3, 0.4, 0.3),
        ShotType.STATIC: TypeWeights(0.4, 0.1, 0.5),
        ShotType.MEDIUM: TypeWeights(0.34, 0.33, 0.33),
        ShotType.PAN: TypeWeights(0.3, 0.3, 0.4),
        ShotType.RECOMMENDER: TypeWeights(0.3, 0.4, 0.3),
    }


def _default_category_weights() -> dict[str, float]:
    return {"human": 1.0, "dog": 0.7, "cat": 0.7, "bicycle": 0.5, "car": 0.5}


@dataclass(frozen=True)
class SaliencyWeights:
    type_weights: Mapping[ShotType, TypeWeights] = field(default_factory=_default_type_weights)
    visited_weight: float = 0.7
    category_weights: Mapping[str, float] = field(default_factory=_default_category_weights)
    default_category_weight: float = 0.3

    def __post_init__(self) -> None:
        missing = [t for t in ShotType if t not in self.type_weights]
        if missing:
            raise ValueError(f"type_weights missing entries for {missing}")
        if not 0.0 <= self.visited_weight <= 1.0:
            raise ValueError(f"visited_weight {self.visited_weight!r} outside [0, 1]")
        for label, v in self.category_weights.items():
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"category weight for '{label}' outside [0, 1]: {v!r}")
        if not 0.0 <= self.default_category_weight <= 1.0:
            raise ValueError("default_category_weight outside [0, 1]")

    def category(self, label: str) -> float:
        return self.category_weights.get(label, self.default_category_weight)


def object_saliency(
    m: ObjectMeasures, category: str, shot_type: ShotType, w: SaliencyWeights
) -> float:
    """Saliency of one object for one shot style, in [0, 1].

    Static shots favor crowded objects (a group reads as one subject), so
    the isolation term flips to the neighbourhood complement there; every
    other type rewards isolation.  The visited damping is multiplicative,
    which keeps the result in range without clamping.
    """
    if shot_type is ShotType.STATIC:
        iso = 1.0 - m.neighbourhood
    else:
        iso = m.neighbourhood
    tw = w.type_weights[shot_type]
    base = tw.size * m.size + tw.motion * m.motion + tw.isolation * iso
    score = w.category(category) * base * (1.0 - w.visited_weight * m.visited)
    # measures are validated to [0, 1]; only float drift needs clamping
    return min(1.0, max(0.0, score))
