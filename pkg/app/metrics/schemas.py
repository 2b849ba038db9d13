from __future__ import annotations

from typing import Dict, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

# display order of the results table
TABLE_ROWS = (
    ("tracking_error_mae", "Volatility Tracking Error"),
    ("ann_return", "Annualized Return"),
    ("ann_vol", "Annualized Volatility"),
    ("sharpe", "Sharpe Ratio"),
    ("kalmar", "Kalmar Ratio"),
    ("max_drawdown", "Maximum Drawdown"),
    ("turnover", "Turnover"),
)


class MetricsReport(BaseModel):
    """Performance summary of one return stream.

    Ratios whose denominator is zero (flat series, no drawdown) are None.
    ``kalmar`` follows the usual Calmar definition: CAGR / max drawdown.
    """

    model_config = ConfigDict(frozen=True)

    label: str = ""
    n_periods: int = Field(ge=1)
    tracking_error_mae: float = Field(ge=0)  # annualized
    log_tracking_error_mae: Optional[float] = Field(default=None, ge=0)
    ann_return: float  # geometric
    ann_return_arithmetic: float
    ann_vol: float = Field(ge=0)
    sharpe: Optional[float] = None
    kalmar: Optional[float] = None
    max_drawdown: float = Field(ge=0, le=1)
    turnover: float = Field(ge=0)  # cumulative sum |dw|
    turnover_per_annum: float = Field(ge=0)


class ComparisonTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    columns: Dict[str, MetricsReport]

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for field, title in TABLE_ROWS:
            row = {"metric": title}
            for name, rep in self.columns.items():
                row[name] = getattr(rep, field)
            rows.append(row)
        return pd.DataFrame(rows, columns=["metric", *self.columns])
