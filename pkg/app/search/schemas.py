from __future__ import annotations

import math
from enum import Enum
from typing import Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.backtest.schemas import BacktestConfig


def default_gains() -> List[float]:
    """0 followed by e^0, e^0.5, ..., e^5 (12 values)."""
    return [0.0] + [math.exp(0.5 * i) for i in range(11)]


def default_thetas() -> List[float]:
    return [i / 10 for i in range(10)]


class GridMetric(str, Enum):
    TRACKING_ERROR = "tracking_error"
    DELTA_KALMAR = "delta_kalmar"
    TURNOVER = "turnover"


class GridSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    gains: List[float] = Field(default_factory=default_gains)
    thetas: List[float] = Field(default_factory=default_thetas)
    base: BacktestConfig
    metrics: List[GridMetric] = Field(default_factory=lambda: list(GridMetric))

    @field_validator("gains")
    @classmethod
    def _check_gains(cls, v):
        if not v:
            raise ValueError("gains must not be empty")
        if any(not (g >= 0 and math.isfinite(g)) for g in v):
            raise ValueError("gains must be finite and >= 0")
        return v

    @field_validator("thetas")
    @classmethod
    def _check_thetas(cls, v):
        if not v:
            raise ValueError("thetas must not be empty")
        if any(not 0 <= t < 1 for t in v):
            raise ValueError("thetas must lie in [0, 1)")
        return v


class GridCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    gain: float
    theta: float
    tracking_error: float
    delta_kalmar: Optional[float] = None
    turnover: float


class GridResult(BaseModel):
    """Complete (g, theta) surface; ``cells`` is gain-major."""

    model_config = ConfigDict(frozen=True)

    gains: List[float]
    thetas: List[float]
    metrics: List[GridMetric]
    cells: List[GridCell]

    def cell(self, gain: float, theta: float) -> GridCell:
        i = self.gains.index(gain)
        j = self.thetas.index(theta)
        return self.cells[i * len(self.thetas) + j]

    def matrix(self, metric: GridMetric) -> List[List[Optional[float]]]:
        m = GridMetric(metric).value
        width = len(self.thetas)
        return [
            [getattr(c, m) for c in self.cells[i * width:(i + 1) * width]]
            for i in range(len(self.gains))
        ]

    def to_long_frame(self) -> pd.DataFrame:
        rows = [
            {"g": c.gain, "theta": c.theta, "metric": m.value, "value": getattr(c, m.value)}
            for m in self.metrics
            for c in self.cells
        ]
        return pd.DataFrame(rows, columns=["g", "theta", "metric", "value"])

    def to_matrix_payload(self) -> Dict[str, object]:
        return {
            "gains": self.gains,
            "thetas": self.thetas,
            "metrics": {m.value: self.matrix(m) for m in self.metrics},
        }
