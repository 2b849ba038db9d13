from pathlib import Path

import pandas as pd

from app.io import write_csv, write_json

from .schemas import GridResult


def write_grid_long_csv(result: GridResult, path: Path) -> Path:
    return write_csv(path, result.to_long_frame())


def write_grid_matrix_json(result: GridResult, path: Path) -> Path:
    return write_json(path, result.to_matrix_payload())


def write_monotonicity_csv(frame: pd.DataFrame, path: Path) -> Path:
    return write_csv(path, frame)
