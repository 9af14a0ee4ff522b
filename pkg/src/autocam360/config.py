"""Director configuration and its JSON file form.

The config file mirrors :class:`DirectorConfig` with angles in degrees
and times in seconds; every field is optional and falls back to the
defaults below.  Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from .measures import MeasureConfig
from .saliency import SaliencyWeights, ShotType, TypeWeights


class ConfigError(ValueError):
    """Raised for malformed or inconsistent configuration documents."""


def _default_fovs() -> dict[ShotType, float]:
    return {
        ShotType.TRACKING: 75.0,
        ShotType.STATIC: 115.0,
        ShotType.MEDIUM: 95.0,
        ShotType.PAN: 90.0,
        ShotType.RECOMMENDER: 75.0,
    }


@dataclass(frozen=True)
class DirectorConfig:
    shot_length_s: float = 3.0
    fov_deg: Mapping[ShotType, float] = field(default_factory=_default_fovs)
    aspect: float = 16.0 / 9.0
    max_hypotheses_per_type: int = 4
    jump_cut_threshold_deg: float = 30.0
    jump_cut_penalty: float = 0.5
    occurrence_window: int = 5
    occurrence_cap: int = 2
    no_repeat: bool = True
    smoothing_alpha: float = 0.15
    max_angular_velocity_deg_s: float = 60.0
    pitch_clamp_deg: float = 45.0
    pan_sweep_deg: float = 90.0
    cluster_threshold_deg: float = 40.0
    recommender_min_coverage: float = 0.5
    measures: MeasureConfig = field(default_factory=MeasureConfig)
    saliency: SaliencyWeights = field(default_factory=SaliencyWeights)

    def __post_init__(self) -> None:
        if self.shot_length_s <= 0:
            raise ConfigError(f"shot_length_s must be positive, got {self.shot_length_s}")
        for t in ShotType:
            if t not in self.fov_deg:
                raise ConfigError(f"fov_deg missing entry for '{t.value}'")
            if not 0.0 < self.fov_deg[t] < 180.0:
                raise ConfigError(f"fov_deg['{t.value}'] must be in (0, 180)")
        if self.aspect <= 0:
            raise ConfigError("aspect must be positive")
        if self.max_hypotheses_per_type < 1:
            raise ConfigError("max_hypotheses_per_type must be >= 1")
        if self.jump_cut_threshold_deg < 0 or self.jump_cut_penalty < 0:
            raise ConfigError("jump-cut parameters must be >= 0")
        if self.occurrence_cap < 1:
            raise ConfigError("occurrence_cap must be >= 1")
        if self.occurrence_window < self.occurrence_cap:
            raise ConfigError("occurrence_window must be >= occurrence_cap")
        if not 0.0 < self.smoothing_alpha <= 1.0:
            raise ConfigError("smoothing_alpha must be in (0, 1]")
        if self.max_angular_velocity_deg_s <= 0:
            raise ConfigError("max_angular_velocity_deg_s must be positive")
        if not 0.0 < self.pitch_clamp_deg <= 90.0:
            raise ConfigError("pitch_clamp_deg must be in (0, 90]")
        if self.pan_sweep_deg <= 0:
            raise ConfigError("pan_sweep_deg must be positive")
        if self.cluster_threshold_deg <= 0:
            raise ConfigError("cluster_threshold_deg must be positive")
        if not 0.0 <= self.recommender_min_coverage <= 1.0:
            raise ConfigError("recommender_min_coverage must be in [0, 1]")


_TOP_LEVEL_KEYS = {
    "shot_length_s",
    "fov_deg",
    "aspect",
    "max_hypotheses_per_type",
    "jump_cut_threshold_deg",
    "jump_cut_penalty",
    "occurrence_window",
    "occurrence_cap",
    "no_repeat",
    "smoothing_alpha",
    "max_angular_velocity_deg_s",
    "pitch_clamp_deg",
    "pan_sweep_deg",
    "cluster_threshold_deg",
    "recommender_min_coverage",
    "measures",
    "saliency",
}

_MEASURE_KEYS = {
    "size_ref_sr",
    "motion_ref_deg_s",
    "neighbour_ref_deg",
    "history_len",
    "visited_decay",
    "min_presence",
    "interp_gap_frames",
}

_SALIENCY_KEYS = {"type_weights", "visited_weight", "category_weights"}


def _shot_type(name: str) -> ShotType:
    try:
        return ShotType(name)
    except ValueError:
        raise ConfigError(
            f"unknown shot type '{name}' (expected one of "
            f"{[t.value for t in ShotType]})"
        ) from None


def _check_keys(data: dict, allowed: set[str], context: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown {context} key(s): {', '.join(unknown)}")


def config_from_dict(data: dict) -> DirectorConfig:
    if not isinstance(data, dict):
        raise ConfigError("config document must be a JSON object")
    _check_keys(data, _TOP_LEVEL_KEYS, "config")

    cfg = DirectorConfig()
    simple = {
        k: data[k]
        for k in _TOP_LEVEL_KEYS - {"fov_deg", "measures", "saliency"}
        if k in data
    }

    if "fov_deg" in data:
        if not isinstance(data["fov_deg"], dict):
            raise ConfigError("fov_deg must be an object mapping shot type to degrees")
        fovs = dict(_default_fovs())
        for name, value in data["fov_deg"].items():
            fovs[_shot_type(name)] = float(value)
        simple["fov_deg"] = fovs

    if "measures" in data:
        m = data["measures"]
        if not isinstance(m, dict):
            raise ConfigError("measures must be an object")
        _check_keys(m, _MEASURE_KEYS, "measures")
        try:
            simple["measures"] = replace(MeasureConfig(), **m)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    if "saliency" in data:
        s = data["saliency"]
        if not isinstance(s, dict):
            raise ConfigError("saliency must be an object")
        _check_keys(s, _SALIENCY_KEYS, "saliency")
        kwargs: dict = {}
        if "type_weights" in s:
            tw = {}
            base = SaliencyWeights().type_weights
            for name, spec in s["type_weights"].items():
                t = _shot_type(name)
                try:
                    tw[t] = TypeWeights(
                        float(spec["size"]), float(spec["motion"]), float(spec["isolation"])
                    )
                except KeyError as exc:
                    raise ConfigError(
                        f"type_weights['{name}'] missing {exc.args[0]!r}"
                    ) from exc
                except ValueError as exc:
                    raise ConfigError(f"type_weights['{name}']: {exc}") from exc
            kwargs["type_weights"] = {**base, **tw}
        if "visited_weight" in s:
            kwargs["visited_weight"] = float(s["visited_weight"])
        if "category_weights" in s:
            cw = dict(s["category_weights"])
            default = cw.pop("default", None)
            kwargs["category_weights"] = {k: float(v) for k, v in cw.items()}
            if default is not None:
                kwargs["default_category_weight"] = float(default)
        try:
            simple["saliency"] = SaliencyWeights(**kwargs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    try:
        return replace(cfg, **simple)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(source: str | Path | None) -> DirectorConfig:
    """Load a config file; None gives the defaults."""
    if source is None:
        return DirectorConfig()
    text = Path(source).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return config_from_dict(data)
