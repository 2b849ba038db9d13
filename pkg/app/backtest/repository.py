from pathlib import Path

import pandas as pd

from app.io import read_json, write_csv, write_json
from app.units import SQRT_PERIODS

from .schemas import TRAJECTORY_COLUMNS, BacktestResult

# file column order is fixed for downstream plotting
FILE_COLUMNS = (*TRAJECTORY_COLUMNS, "sigma_hat_ann", "sigma_ind_hat_ann")


def trajectory_frame(result: BacktestResult) -> pd.DataFrame:
    df = result.trajectory.copy()
    df["sigma_hat_ann"] = df["sigma_hat"] * SQRT_PERIODS
    df["sigma_ind_hat_ann"] = df["sigma_ind_hat"] * SQRT_PERIODS
    return df.reindex(columns=list(FILE_COLUMNS))


def write_trajectory_csv(result: BacktestResult, path: Path) -> Path:
    return write_csv(path, trajectory_frame(result))


def read_trajectory_csv(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, parse_dates=["timestamp"])


def write_result_json(result: BacktestResult, path: Path) -> Path:
    df = trajectory_frame(result)
    df["timestamp"] = df["timestamp"].dt.strftime("%Y-%m-%d")
    payload = {
        "mode": result.config.mode,
        "risky": result.risky.label,
        "riskfree": result.riskfree.label,
        "config": result.config.model_dump(mode="json"),
        "columns": list(FILE_COLUMNS),
        "rows": df.to_dict(orient="records"),
    }
    return write_json(path, payload)


def read_result_json(path: Path) -> dict:
    return read_json(path)
