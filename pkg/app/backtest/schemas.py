from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from app.config import DEFAULT_HALFLIFE, DEFAULT_SPREAD_BPS, DEFAULT_WARMUP
from app.policy.schemas import ControllerConfig, TargetSpec
from app.series.schemas import ReturnSeries

TRAJECTORY_COLUMNS = (
    "timestamp",
    "risky_return",
    "riskfree_return",
    "weight",
    "cash",
    "index_return",
    "sigma_hat",
    "sigma_ind_hat",
    "tracking_error",
    "kappa",
    "cost",
)


class CostConvention(str, Enum):
    HALF = "half"  # a one-sided trade crosses half the quoted spread
    FULL = "full"


class BacktestConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    target: TargetSpec
    estimator_halflife: float = Field(DEFAULT_HALFLIFE, gt=0, allow_inf_nan=False)
    controller: Optional[ControllerConfig] = None  # None runs the open-loop policy
    warmup_steps: int = Field(DEFAULT_WARMUP, ge=1)
    spread_bps: float = Field(DEFAULT_SPREAD_BPS, ge=0, allow_inf_nan=False)
    cost_convention: CostConvention = CostConvention.HALF

    @property
    def mode(self) -> str:
        return "open-loop" if self.controller is None else "control"

    @property
    def cost_rate(self) -> float:
        """Cost per unit of |delta w|."""
        share = 0.5 if self.cost_convention is CostConvention.HALF else 1.0
        return self.spread_bps * share / 1e4


@dataclass(frozen=True)
class BacktestResult:
    """One row per input timestamp.

    Row 0 is the first observation: its weight is decided but no index return
    has accrued yet, so index_return, sigma_ind_hat and tracking_error are NaN.
    The cost on row k belongs to the rebalance decided at row k and is
    deducted from index_return on row k + 1.
    """

    config: BacktestConfig
    risky: ReturnSeries
    riskfree: ReturnSeries
    trajectory: pd.DataFrame

    def __len__(self) -> int:
        return len(self.trajectory)

    @property
    def weights(self) -> np.ndarray:
        return self.trajectory["weight"].to_numpy()

    @property
    def index_returns(self) -> np.ndarray:
        return self.trajectory["index_return"].to_numpy()[1:]

    @property
    def sigma_ind_hat(self) -> np.ndarray:
        return self.trajectory["sigma_ind_hat"].to_numpy()

    @property
    def turnover(self) -> float:
        return float(np.abs(np.diff(self.weights)).sum())

    @property
    def total_cost(self) -> float:
        return float(self.trajectory["cost"].sum())

    def index_series(self, label: str | None = None) -> ReturnSeries:
        return ReturnSeries(
            timestamps=self.risky.timestamps[1:],
            values=self.index_returns,
            label=label or f"{self.risky.label}:{self.config.mode}",
        )
