import logging
import math
from typing import Dict, Union

import numpy as np

from app.backtest import service as backtest
from app.backtest.schemas import BacktestConfig, BacktestResult
from app.config import PERIODS_PER_YEAR
from app.errors import SeriesError
from app.estimator.schemas import EwmaParams
from app.estimator.service import batch_estimates
from app.policy.schemas import ControllerConfig
from app.series.schemas import ReturnSeries
from app.units import SQRT_PERIODS

from .schemas import ComparisonTable, MetricsReport

logger = logging.getLogger(__name__)

Returns = Union[ReturnSeries, np.ndarray]


def _values(returns: Returns) -> np.ndarray:
    return returns.values if isinstance(returns, ReturnSeries) else np.asarray(returns, dtype=np.float64)


def vol_tracking_mae(sigma_ind_estimates, sigma_tar: float, window_start: int = 0) -> float:
    """Mean |sigma_ind_hat - sigma_tar| from ``window_start`` on, times sqrt(252).

    NaN entries (steps with no estimate yet) are skipped.
    """
    window = np.asarray(sigma_ind_estimates, dtype=np.float64)[window_start:]
    window = window[~np.isnan(window)]
    if window.size == 0:
        raise SeriesError(f"empty tracking window starting at {window_start}")
    return float(np.mean(np.abs(window - sigma_tar)) * SQRT_PERIODS)


def _value_path(r: np.ndarray) -> np.ndarray:
    # a loss of 100% or more ruins the index: value stays at 0 from then on
    return np.concatenate(([1.0], np.cumprod(np.maximum(1.0 + r, 0.0))))


def _ruin_row(r: np.ndarray) -> int | None:
    ruined = r <= -1.0
    return int(np.argmax(ruined)) if ruined.any() else None


def max_drawdown(returns: Returns) -> float:
    r = _values(returns)
    if r.size == 0:
        raise SeriesError("max drawdown of an empty series")
    value = _value_path(r)
    peak = np.maximum.accumulate(value)
    return float(np.max(1.0 - value / peak))


def _return_stats(r: np.ndarray, rf: np.ndarray) -> Dict[str, float | None]:
    n = r.size
    ruin = _ruin_row(r)
    if ruin is None:
        growth = float(np.sum(np.log1p(r)))
        ann_return = math.expm1(growth * PERIODS_PER_YEAR / n)
    else:
        logger.warning("index return %.4f at period %d wipes out the index", r[ruin], ruin)
        ann_return = -1.0
    # a flat series has exactly zero vol, not float noise
    ann_vol = 0.0 if n < 2 or np.ptp(r) == 0 else float(np.std(r, ddof=1) * SQRT_PERIODS)
    excess = float(np.mean(r - rf)) * PERIODS_PER_YEAR
    mdd = max_drawdown(r)
    return {
        "n_periods": n,
        "ann_return": ann_return,
        "ann_return_arithmetic": float(np.mean(r)) * PERIODS_PER_YEAR,
        "ann_vol": ann_vol,
        "sharpe": excess / ann_vol if ann_vol > 0 else None,
        "kalmar": ann_return / mdd if mdd > 0 else None,
        "max_drawdown": mdd,
    }


def kalmar(returns: Returns) -> float | None:
    r = _values(returns)
    return _return_stats(r, np.zeros_like(r))["kalmar"]


def report(
    result: BacktestResult,
    riskfree: ReturnSeries,
    sigma_tar: float,
    *,
    window_start: int | None = None,
    label: str | None = None,
) -> MetricsReport:
    """Full metric set of a backtest. Return statistics cover every accrued
    index return; the tracking window defaults to the post-warmup rows."""
    if len(riskfree) != len(result):
        raise SeriesError(f"risk-free series has {len(riskfree)} rows, backtest has {len(result)}")
    r = result.index_returns
    if r.size == 0:
        raise SeriesError("backtest has no index returns")
    start = result.config.warmup_steps if window_start is None else window_start
    errors = result.trajectory["tracking_error"].to_numpy()[start:]
    errors = errors[~np.isnan(errors)]
    turnover = result.turnover
    return MetricsReport(
        label=label or result.config.mode,
        tracking_error_mae=vol_tracking_mae(result.sigma_ind_hat, sigma_tar, start),
        log_tracking_error_mae=float(np.mean(np.abs(errors))) if errors.size else None,
        turnover=turnover,
        turnover_per_annum=turnover * PERIODS_PER_YEAR / r.size,
        **_return_stats(r, riskfree.values[1:]),
    )


def report_underlying(
    risky: ReturnSeries,
    riskfree: ReturnSeries,
    sigma_tar: float,
    halflife: float,
    *,
    window_start: int = 0,
    first_row: int = 1,
    label: str = "underlying",
) -> MetricsReport:
    """Metrics of the risky asset held outright (w = 1, no trading).

    ``first_row`` = 1 drops the first observation so the return sample lines
    up with an index backtest over the same series.
    """
    sigma = batch_estimates(risky.values, EwmaParams(halflife=halflife))
    r = risky.values[first_row:]
    if r.size == 0:
        raise SeriesError(f"{risky.label!r} is too short")
    with np.errstate(divide="ignore"):
        log_err = np.abs(np.log(sigma[window_start:] / sigma_tar))
    log_err = log_err[np.isfinite(log_err)]
    return MetricsReport(
        label=label,
        tracking_error_mae=vol_tracking_mae(sigma, sigma_tar, window_start),
        log_tracking_error_mae=float(np.mean(log_err)) if log_err.size else None,
        turnover=0.0,
        turnover_per_annum=0.0,
        **_return_stats(r, riskfree.values[first_row:]),
    )


def compare(risky: ReturnSeries, riskfree: ReturnSeries, cfg: BacktestConfig) -> ComparisonTable:
    """Underlying, open-loop and control side by side on the same data."""
    controller = cfg.controller or ControllerConfig()
    open_cfg = cfg.model_copy(update={"controller": None})
    ctrl_cfg = cfg.model_copy(update={"controller": controller})
    sigma_tar = cfg.target.sigma_tar
    open_res = backtest.run(risky, riskfree, open_cfg)
    ctrl_res = backtest.run(risky, riskfree, ctrl_cfg)
    return ComparisonTable(
        columns={
            "underlying": report_underlying(
                risky, riskfree, sigma_tar, cfg.estimator_halflife,
                window_start=cfg.warmup_steps, label=risky.label or "underlying",
            ),
            "open_loop": report(open_res, riskfree, sigma_tar, label="open-loop"),
            "control": report(ctrl_res, riskfree, sigma_tar, label="control"),
        }
    )
