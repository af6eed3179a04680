"""Pipeline configuration shared by the CLI commands."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from .filtration import FiltrationKind
from .persistence_image import PIConfig, PIMode
from .topoimage import TopoConfig

FUSION_MODES = ("none", "cmvfm", "concat", "meanpool")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    patch_size: int = 28
    pi_resolution: tuple[int, int] = (7, 7)
    sigma: float = 0.05
    pi_mode: str = PIMode.COMBINED.value
    filtrations: tuple[str, ...] = ("intensity", "gradient")
    fusion: str = "none"
    weights: Optional[str] = None
    seed: Optional[int] = None
    out: str = "."
    jobs: int = 1

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        try:
            set_("pi_resolution", tuple(int(x) for x in self.pi_resolution))
            set_("filtrations", tuple(FiltrationKind.parse(f).value for f in self.filtrations))
            set_("pi_mode", PIMode(self.pi_mode).value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        if len(self.pi_resolution) != 2 or min(self.pi_resolution) < 1:
            raise ConfigError(f"pi_resolution must be two positive ints, got {self.pi_resolution}")
        if self.patch_size < 1:
            raise ConfigError(f"patch_size must be positive, got {self.patch_size}")
        if not self.sigma > 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if not self.filtrations:
            raise ConfigError("at least one filtration is required")
        if self.fusion not in FUSION_MODES:
            raise ConfigError(f"fusion must be one of {FUSION_MODES}, got {self.fusion!r}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")

    def check_fusion(self) -> None:
        """cmvfm needs either a weights directory or an init seed."""
        if self.fusion == "cmvfm" and self.weights is None and self.seed is None:
            raise ConfigError("fusion 'cmvfm' requires --weights or --seed")

    def topo(self) -> TopoConfig:
        pi = PIConfig(resolution=self.pi_resolution, sigma=self.sigma, mode=self.pi_mode)
        return TopoConfig(patch_size=self.patch_size, pi=pi, filtrations=self.filtrations)

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        d["pi_resolution"] = list(self.pi_resolution)
        d["filtrations"] = list(self.filtrations)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "PipelineConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "PipelineConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(data)

    def override(self, **changes) -> "PipelineConfig":
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})
