from __future__ import annotations

from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.config import DEFAULT_GAIN, DEFAULT_KAPPA_MAX, DEFAULT_KAPPA_MIN, DEFAULT_THETA

# slack for w + c == 1 after subtraction
WEIGHT_TOL = 1e-12


class TargetSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    sigma_tar: float = Field(gt=0, allow_inf_nan=False)  # per period
    leverage_limit: float = Field(gt=0, allow_inf_nan=False)


class ControllerConfig(BaseModel):
    """Proportional gain, kappa clip interval and output smoothing.

    ``allow_degenerate`` admits g = 0 and theta = 0, which the sensitivity
    grid needs and which unit tests use to check the unsmoothed update.
    """

    model_config = ConfigDict(frozen=True)

    gain: float = Field(DEFAULT_GAIN, ge=0, allow_inf_nan=False)
    kappa_min: float = Field(DEFAULT_KAPPA_MIN, lt=0, allow_inf_nan=False)
    kappa_max: float = Field(DEFAULT_KAPPA_MAX, gt=0, allow_inf_nan=False)
    smoothing: float = Field(DEFAULT_THETA, ge=0, lt=1)
    allow_degenerate: bool = False

    @model_validator(mode="after")
    def _check_open_ranges(self) -> "ControllerConfig":
        if self.allow_degenerate:
            return self
        if self.gain <= 0:
            raise ValueError("gain must be > 0 (set allow_degenerate for g = 0)")
        if self.smoothing <= 0:
            raise ValueError("smoothing must be in (0, 1) (set allow_degenerate for theta = 0)")
        return self


@dataclass(frozen=True, slots=True)
class ControllerState:
    kappa: float = 0.0


@dataclass(frozen=True, slots=True)
class Weights:
    risky: float
    cash: float

    def __post_init__(self):
        if not self.risky >= 0:
            raise ValueError(f"risky weight {self.risky!r} is negative")
        if abs(self.risky + self.cash - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights {self.risky!r} + {self.cash!r} do not sum to 1")

    @classmethod
    def from_risky(cls, risky: float) -> "Weights":
        return cls(risky=risky, cash=1.0 - risky)

    def turnover_from(self, prev: "Weights") -> float:
        return abs(self.risky - prev.risky)
