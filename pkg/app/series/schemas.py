from __future__ import annotations

from enum import Enum
from typing import List

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ValueKind(str, Enum):
    PRICE = "PRICE"
    RETURN = "RETURN"
    ANNUAL_RATE = "ANNUAL_RATE"


class SynthKind(str, Enum):
    IID_NORMAL = "IID_NORMAL"
    REGIME_SWITCH = "REGIME_SWITCH"


class ReturnSeries(BaseModel):
    """Simple per-period returns of one asset on strictly increasing timestamps.

    ``values`` is stored as a read-only float64 array so the series can be
    shared freely once built.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    timestamps: pd.DatetimeIndex
    values: np.ndarray
    label: str = ""

    @field_validator("timestamps", mode="before")
    @classmethod
    def _to_index(cls, v):
        return pd.DatetimeIndex(v)

    @field_validator("values", mode="before")
    @classmethod
    def _to_array(cls, v):
        arr = np.array(v, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("values must be one-dimensional")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check(self) -> "ReturnSeries":
        if len(self.timestamps) != len(self.values):
            raise ValueError(
                f"{len(self.timestamps)} timestamps for {len(self.values)} values"
            )
        if len(self.timestamps) > 1 and not (np.diff(self.timestamps.asi8) > 0).all():
            raise ValueError("timestamps must be strictly increasing")
        if not np.isfinite(self.values).all():
            raise ValueError("values must be finite")
        if (self.values <= -1.0).any():
            bad = int(np.argmax(self.values <= -1.0))
            raise ValueError(f"return at position {bad} is -100% or worse")
        return self

    def __len__(self) -> int:
        return len(self.values)

    def take(self, mask: np.ndarray) -> "ReturnSeries":
        return ReturnSeries(
            timestamps=self.timestamps[mask], values=self.values[mask], label=self.label
        )


class SynthSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: SynthKind = SynthKind.IID_NORMAL
    mean: float = 0.0  # per period
    vols: List[float]  # per period, one per regime
    switch_points: List[int] = Field(default_factory=list)
    length: int = Field(gt=0)
    seed: int = 0
    start: str = "2000-01-03"
    label: str = "synthetic"

    @field_validator("vols")
    @classmethod
    def _vols_nonnegative(cls, v):
        if not v:
            raise ValueError("at least one vol is required")
        if any(x < 0 or not np.isfinite(x) for x in v):
            raise ValueError("vols must be finite and non-negative")
        return v

    @model_validator(mode="after")
    def _check_regimes(self) -> "SynthSpec":
        if self.kind is SynthKind.IID_NORMAL:
            if len(self.vols) != 1 or self.switch_points:
                raise ValueError("IID_NORMAL takes exactly one vol and no switch points")
            return self
        pts = self.switch_points
        if not pts:
            raise ValueError("REGIME_SWITCH needs at least one switch point")
        if any(b <= a for a, b in zip(pts, pts[1:])) or pts[0] <= 0 or pts[-1] >= self.length:
            raise ValueError("switch points must be strictly increasing inside (0, length)")
        if len(self.vols) != len(pts) + 1:
            raise ValueError(f"{len(pts)} switch points need {len(pts) + 1} vols")
        return self
