from __future__ import annotations

from datetime import date
from enum import Enum
from typing import List, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.backtest.schemas import BacktestConfig
from app.config import DEFAULT_MIN_ANN_RETURN


class Mode(str, Enum):
    OPEN_LOOP = "open_loop"
    CONTROL = "control"


COHORT_METRICS = ("tracking_error", "delta_kalmar", "turnover")


class CohortSpec(BaseModel):
    """One parameter set applied to every asset over one evaluation window."""

    model_config = ConfigDict(frozen=True)

    base: BacktestConfig
    start: Optional[date] = None
    end: Optional[date] = None
    # underlying CAGR filter over the window; None keeps every asset
    min_ann_return: Optional[float] = DEFAULT_MIN_ANN_RETURN

    @field_validator("base")
    @classmethod
    def _needs_controller(cls, v: BacktestConfig):
        if v.controller is None:
            raise ValueError("cohort base config must carry controller parameters")
        return v

    @model_validator(mode="after")
    def _check_window(self) -> "CohortSpec":
        if self.start and self.end and self.start > self.end:
            raise ValueError(f"window start {self.start} is after end {self.end}")
        return self


class CohortRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    asset: str
    mode: Mode
    tracking_error: float
    delta_kalmar: Optional[float] = None
    turnover: float


class CohortResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: List[CohortRow] = Field(default_factory=list)
    dropped: List[str] = Field(default_factory=list)

    def values(self, metric: str, mode: Mode) -> List[float]:
        return [getattr(r, metric) for r in self.rows if r.mode is Mode(mode) and getattr(r, metric) is not None]

    def to_long_frame(self) -> pd.DataFrame:
        rows = [
            {"asset": r.asset, "mode": r.mode.value, "metric": m, "value": getattr(r, m)}
            for r in self.rows
            for m in COHORT_METRICS
        ]
        return pd.DataFrame(rows, columns=["asset", "mode", "metric", "value"])
