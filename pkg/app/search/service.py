import logging
from typing import Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from pydantic import ValidationError
from scipy.stats import spearmanr

from app.backtest import service as backtest
from app.backtest.schemas import BacktestConfig
from app.config import DEFAULT_KAPPA_MAX, DEFAULT_KAPPA_MIN, settings
from app.errors import GridCellError, VolTargetError
from app.metrics import service as metrics
from app.policy.schemas import ControllerConfig
from app.series.schemas import ReturnSeries

from .schemas import GridCell, GridMetric, GridResult, GridSpec

logger = logging.getLogger(__name__)


def cell_config(base: BacktestConfig, gain: float, theta: float) -> BacktestConfig:
    """Base config with the controller replaced by (gain, theta); kappa
    bounds come from the base controller when it has one."""
    kmin, kmax = DEFAULT_KAPPA_MIN, DEFAULT_KAPPA_MAX
    if base.controller is not None:
        kmin, kmax = base.controller.kappa_min, base.controller.kappa_max
    controller = ControllerConfig(
        gain=gain, smoothing=theta, kappa_min=kmin, kappa_max=kmax, allow_degenerate=True
    )
    return base.model_copy(update={"controller": controller})


def _delta(a, b):
    return None if a is None or b is None else a - b


def _run_cell(
    risky: ReturnSeries,
    riskfree: ReturnSeries,
    base: BacktestConfig,
    gain: float,
    theta: float,
    underlying_kalmar,
) -> GridCell:
    try:
        cfg = cell_config(base, gain, theta)
        result = backtest.run(risky, riskfree, cfg)
        rep = metrics.report(result, riskfree, cfg.target.sigma_tar)
    except (VolTargetError, ValidationError) as e:
        raise GridCellError(gain, theta, e) from e
    return GridCell(
        gain=gain,
        theta=theta,
        tracking_error=rep.tracking_error_mae,
        delta_kalmar=_delta(rep.kalmar, underlying_kalmar),
        turnover=rep.turnover,
    )


def run_grid(
    risky: ReturnSeries, riskfree: ReturnSeries, spec: GridSpec, *, n_jobs: int | None = None
) -> GridResult:
    """One independent backtest per (g, theta); delta Kalmar is measured
    against the risky asset held outright over the same periods."""
    underlying_kalmar = metrics.kalmar(risky.values[1:])
    coords = [(g, t) for g in spec.gains for t in spec.thetas]
    jobs = settings.N_JOBS if n_jobs is None else n_jobs
    logger.info("grid: %d gains x %d thetas on %s, n_jobs=%d",
                len(spec.gains), len(spec.thetas), risky.label, jobs)
    if jobs == 1:
        cells = [_run_cell(risky, riskfree, spec.base, g, t, underlying_kalmar) for g, t in coords]
    else:
        cells = Parallel(n_jobs=jobs)(
            delayed(_run_cell)(risky, riskfree, spec.base, g, t, underlying_kalmar) for g, t in coords
        )
    return GridResult(gains=list(spec.gains), thetas=list(spec.thetas), metrics=list(spec.metrics), cells=cells)


def _spearman(x, y) -> float:
    if len(x) < 2:
        return float("nan")
    rho = spearmanr(x, y).statistic
    return float(rho)


def monotonicity(result: GridResult) -> pd.DataFrame:
    """Spearman rank correlations along each axis of the surface.

    Rows: turnover and tracking error against g at each fixed theta, turnover
    against theta at each fixed g. A constant slice gives NaN.
    """
    te = np.array(result.matrix(GridMetric.TRACKING_ERROR), dtype=float)
    to = np.array(result.matrix(GridMetric.TURNOVER), dtype=float)
    rows = []
    for j, theta in enumerate(result.thetas):
        rows.append(("g", "theta", theta, "turnover", _spearman(result.gains, to[:, j])))
        rows.append(("g", "theta", theta, "tracking_error", _spearman(result.gains, te[:, j])))
    for i, gain in enumerate(result.gains):
        rows.append(("theta", "g", gain, "turnover", _spearman(result.thetas, to[i, :])))
    return pd.DataFrame(rows, columns=["axis", "fixed", "fixed_value", "metric", "spearman"])


def rank_summary(result: GridResult) -> Tuple[float, float, float]:
    """Median rank correlation for the three monotonicity claims:
    turnover vs g, turnover vs theta, tracking error vs g."""
    m = monotonicity(result)

    def med(axis, metric):
        sel = m[(m["axis"] == axis) & (m["metric"] == metric)]["spearman"]
        return float(np.nanmedian(sel)) if sel.notna().any() else float("nan")

    return med("g", "turnover"), med("theta", "turnover"), med("g", "tracking_error")
