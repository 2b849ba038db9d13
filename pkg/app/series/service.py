import logging
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import pandas as pd

from app.errors import IngestionError, SeriesError
from app.units import rate_pct_to_period

from .schemas import ReturnSeries, SynthKind, SynthSpec, ValueKind

logger = logging.getLogger(__name__)

DATE_FORMAT = "%Y-%m-%d"


# ---------- Ingestion ----------
def _first_bad_row(mask: pd.Series) -> int:
    # data rows are 1-based, header excluded
    return int(np.flatnonzero(mask.to_numpy())[0]) + 1


def load_csv(
    path: Union[str, Path],
    date_column: str,
    value_column: str,
    value_kind: ValueKind = ValueKind.PRICE,
    *,
    label: str | None = None,
) -> ReturnSeries:
    """Read one column of a dated CSV and turn it into simple returns.

    PRICE:       r_k = p_k / p_{k-1} - 1, one row fewer than the file
    RETURN:      passed through
    ANNUAL_RATE: percent per annum -> rate / 100 / 252 per period
    Malformed rows are errors, never skipped.
    """
    path = Path(path)
    src = str(path)
    value_kind = ValueKind(value_kind)
    if not path.is_file():
        raise IngestionError(src, None, "file not found")

    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise IngestionError(src, None, "file is empty (a header row is required)")
    except pd.errors.ParserError as e:
        raise IngestionError(src, None, f"unreadable CSV: {e}")
    except UnicodeDecodeError as e:
        raise IngestionError(src, None, f"not UTF-8 text: {e.reason} at byte {e.start}")
    except OSError as e:
        raise IngestionError(src, None, f"cannot read file: {e}")

    for col in (date_column, value_column):
        if col not in df.columns:
            raise IngestionError(src, None, f"column {col!r} not found (have {list(df.columns)})")
    if df.empty:
        raise IngestionError(src, None, "no data rows")

    raw_dates = df[date_column].str.strip()
    dates = pd.to_datetime(raw_dates, format=DATE_FORMAT, errors="coerce")
    if dates.isna().any():
        row = _first_bad_row(dates.isna())
        raise IngestionError(src, row, f"unparseable date {raw_dates.iloc[row - 1]!r}")

    raw_values = df[value_column].str.strip()
    values = pd.to_numeric(raw_values, errors="coerce")
    bad = values.isna() | ~np.isfinite(values.fillna(0.0))
    if bad.any():
        row = _first_bad_row(bad)
        raise IngestionError(src, row, f"unparseable number {raw_values.iloc[row - 1]!r}")

    steps = dates.diff().iloc[1:]
    if (steps <= pd.Timedelta(0)).any():
        row = _first_bad_row(steps <= pd.Timedelta(0)) + 1
        raise IngestionError(src, row, "dates must be strictly increasing")

    v = values.to_numpy(dtype=np.float64)
    ts = pd.DatetimeIndex(dates)
    if value_kind is ValueKind.PRICE:
        if (v <= 0).any():
            row = int(np.flatnonzero(v <= 0)[0]) + 1
            raise IngestionError(src, row, f"non-positive price {v[row - 1]!r}")
        if len(v) < 2:
            raise IngestionError(src, None, "at least two prices are needed for one return")
        returns = v[1:] / v[:-1] - 1.0
        ts = ts[1:]
    elif value_kind is ValueKind.RETURN:
        if (v <= -1.0).any():
            row = int(np.flatnonzero(v <= -1.0)[0]) + 1
            raise IngestionError(src, row, f"return {v[row - 1]!r} is -100% or worse")
        returns = v
    else:
        returns = rate_pct_to_period(v)

    series = ReturnSeries(timestamps=ts, values=returns, label=label or path.stem)
    logger.info("loaded %d %s rows from %s", len(series), value_kind.value, src)
    return series


def constant_rate(timestamps: pd.DatetimeIndex, annual_rate_pct: float, *, label: str = "rate") -> ReturnSeries:
    r = rate_pct_to_period(annual_rate_pct)
    return ReturnSeries(timestamps=timestamps, values=np.full(len(timestamps), r), label=label)


# ---------- Synthetic ----------
def _vol_path(spec: SynthSpec) -> np.ndarray:
    if spec.kind is SynthKind.IID_NORMAL:
        return np.full(spec.length, spec.vols[0])
    edges = [0, *spec.switch_points, spec.length]
    return np.concatenate(
        [np.full(b - a, vol) for a, b, vol in zip(edges, edges[1:], spec.vols)]
    )


def generate(spec: SynthSpec) -> ReturnSeries:
    """Draw N(mean, vol_i^2) returns, vol_i from the regime active at step i.

    The generator is numpy's PCG64 seeded with ``spec.seed``; the same seed
    gives bitwise-identical output on every platform numpy supports.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    z = rng.standard_normal(spec.length)
    values = spec.mean + _vol_path(spec) * z
    ts = pd.bdate_range(spec.start, periods=spec.length)
    return ReturnSeries(timestamps=ts, values=values, label=spec.label)


# ---------- Helpers ----------
def compound(series: ReturnSeries, start_value: float = 1.0) -> np.ndarray:
    """Value path of length n + 1 starting at ``start_value``."""
    return start_value * np.concatenate(([1.0], np.cumprod(1.0 + series.values)))


def align(a: ReturnSeries, b: ReturnSeries) -> Tuple[ReturnSeries, ReturnSeries]:
    common = a.timestamps.intersection(b.timestamps)
    if common.empty:
        raise SeriesError(f"{a.label!r} and {b.label!r} share no timestamps")
    return a.take(a.timestamps.isin(common)), b.take(b.timestamps.isin(common))


def between(series: ReturnSeries, start=None, end=None) -> ReturnSeries:
    mask = np.ones(len(series), dtype=bool)
    if start is not None:
        mask &= series.timestamps >= pd.Timestamp(start)
    if end is not None:
        mask &= series.timestamps <= pd.Timestamp(end)
    if not mask.any():
        raise SeriesError(f"{series.label!r} has no rows between {start} and {end}")
    return series.take(mask)


def check_aligned(risky: ReturnSeries, riskfree: ReturnSeries) -> None:
    if len(risky) != len(riskfree) or not risky.timestamps.equals(riskfree.timestamps):
        raise SeriesError(
            f"series {risky.label!r} and {riskfree.label!r} are not aligned "
            f"({len(risky)} vs {len(riskfree)} rows); use align() first"
        )
