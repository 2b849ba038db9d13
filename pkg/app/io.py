"""Byte-stable JSON and CSV writers shared by the repositories."""
import json
import math
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd


def clean(obj: Any) -> Any:
    """Recursively turn numpy scalars into Python ones and NaN/inf into None."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [clean(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def write_json(path: Path, payload: Any) -> Path:
    path = Path(path)
    text = json.dumps(clean(payload), indent=2, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def read_json(path: Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_csv(path: Path, frame: pd.DataFrame) -> Path:
    # default float repr is the shortest round-trip form, so output is stable
    path = Path(path)
    frame.to_csv(path, index=False, na_rep="", lineterminator="\n", date_format="%Y-%m-%d")
    return path
