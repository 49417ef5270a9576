import json
import pathlib
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from core.errors import ConfigError, DegenerateSchedule
from mitigation.extrapolation import DEFAULT_MAX_GAIN
from mitigation.zne import ScalingSchedule
from simulation.density import MAX_P


class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    method: Literal["qsp", "trotter", "both"] = "qsp"
    N: int = Field(4, ge=3, le=8)
    tau_grid: list[float]
    p_levels: list[float]
    eps_target: float = Field(1e-5, gt=0, lt=1)
    schedules: list[list[float]] = [[1.0, 2.0, 3.0], [1.0, 1.25, 1.5]]
    shots: int = Field(5_000_000, ge=1)
    seed: int = 0
    output_path: str = "results.csv"
    workers: int = Field(1, ge=1)
    degree_rule: Literal["strict", "order"] = "strict"
    shot_rule: Literal["fixed", "m_s"] = "fixed"  # m_s: per-cell statistical bound instead of `shots`
    max_gain: float = Field(DEFAULT_MAX_GAIN, ge=1)

    @field_validator("tau_grid")
    @classmethod
    def _positive_times(cls, v):
        if not v or any(t <= 0 for t in v):
            raise ValueError("tau_grid must be non-empty with every tau > 0")
        return v

    @field_validator("p_levels")
    @classmethod
    def _probabilities(cls, v):
        if not v or any(not 0 <= p <= MAX_P for p in v):
            raise ValueError("p_levels must be non-empty and inside [0, 3/4]")
        return v

    @field_validator("schedules")
    @classmethod
    def _schedules(cls, v):
        if not v:
            raise ValueError("at least one schedule is required")
        for s in v:
            try:
                ScalingSchedule(tuple(s))
            except DegenerateSchedule as exc:
                raise ValueError(str(exc)) from exc
        return v

    @model_validator(mode="after")
    def _scaled_noise(self):
        worst = max(self.p_levels) * max(s[-1] for s in self.schedules)
        if worst > MAX_P:
            raise ValueError(f"p * max(schedule) = {worst} exceeds 3/4")
        return self

    def scaling_schedules(self) -> list[ScalingSchedule]:
        return [ScalingSchedule(tuple(s)) for s in self.schedules]

    def methods(self) -> list[str]:
        return ["qsp", "trotter"] if self.method == "both" else [self.method]


def load_sweep_config(path, **overrides) -> SweepConfig:
    """Read a JSON sweep config; non-None overrides replace file values."""
    path = pathlib.Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file {path} not found") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a key-value object")
    raw.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return SweepConfig(**raw)
    except ValidationError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def standard_tau_grid() -> list[float]:
    """0.1 .. 5 in steps of 0.1, then 5.25 .. 20 in steps of 0.25."""
    short = [round(0.1 * k, 10) for k in range(1, 51)]
    long = [round(5 + 0.25 * k, 10) for k in range(1, 61)]
    return short + long
