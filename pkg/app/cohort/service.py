import logging
from typing import List, Mapping, Optional

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from app.backtest import service as backtest
from app.config import settings
from app.errors import CohortAssetError, VolTargetError
from app.metrics import service as metrics
from app.series.schemas import ReturnSeries
from app.series.service import align, between

from .schemas import COHORT_METRICS, CohortResult, CohortRow, CohortSpec, Mode

logger = logging.getLogger(__name__)


def _delta(a, b):
    return None if a is None or b is None else a - b


def _run_asset(label: str, asset: ReturnSeries, riskfree: ReturnSeries, spec: CohortSpec) -> Optional[List[CohortRow]]:
    """Both modes on one asset, or None if the return filter drops it."""
    try:
        risky, rf = align(asset, riskfree)
        if spec.start is not None or spec.end is not None:
            risky = between(risky, spec.start, spec.end)
            rf = between(rf, spec.start, spec.end)
        sigma_tar = spec.base.target.sigma_tar
        under = metrics.report_underlying(
            risky, rf, sigma_tar, spec.base.estimator_halflife,
            window_start=spec.base.warmup_steps, label=label,
        )
        if spec.min_ann_return is not None and under.ann_return <= spec.min_ann_return:
            logger.warning("dropping %s: annualized return %.4f <= %.4f", label, under.ann_return, spec.min_ann_return)
            return None
        rows = []
        for mode, cfg in (
            (Mode.OPEN_LOOP, spec.base.model_copy(update={"controller": None})),
            (Mode.CONTROL, spec.base),
        ):
            rep = metrics.report(backtest.run(risky, rf, cfg), rf, sigma_tar)
            rows.append(
                CohortRow(
                    asset=label,
                    mode=mode,
                    tracking_error=rep.tracking_error_mae,
                    delta_kalmar=_delta(rep.kalmar, under.kalmar),
                    turnover=rep.turnover,
                )
            )
        return rows
    except VolTargetError as e:
        raise CohortAssetError(label, e) from e


def run_cohort(
    assets: Mapping[str, ReturnSeries],
    riskfree: ReturnSeries,
    spec: CohortSpec,
    *,
    n_jobs: int | None = None,
) -> CohortResult:
    """Evaluate both methods on every asset with one parameter set.

    Assets are processed in label order; the result does not depend on the
    worker count.
    """
    labels = sorted(assets)
    jobs = settings.N_JOBS if n_jobs is None else n_jobs
    if jobs == 1:
        outcomes = [_run_asset(name, assets[name], riskfree, spec) for name in labels]
    else:
        outcomes = Parallel(n_jobs=jobs)(
            delayed(_run_asset)(name, assets[name], riskfree, spec) for name in labels
        )
    rows, dropped = [], []
    for name, out in zip(labels, outcomes):
        if out is None:
            dropped.append(name)
        else:
            rows.extend(out)
    logger.info("cohort: %d assets evaluated, %d dropped", len(labels) - len(dropped), len(dropped))
    return CohortResult(rows=rows, dropped=dropped)


def cohort_histogram(result: CohortResult, metric: str, bins: int = 20) -> pd.DataFrame:
    """Counts per mode on bin edges shared by both modes."""
    if metric not in COHORT_METRICS:
        raise ValueError(f"unknown cohort metric {metric!r}")
    pooled = result.values(metric, Mode.OPEN_LOOP) + result.values(metric, Mode.CONTROL)
    if not pooled:
        return pd.DataFrame(columns=["mode", "bin_left", "bin_right", "count"])
    edges = np.histogram_bin_edges(pooled, bins=bins)
    frames = []
    for mode in Mode:
        counts, _ = np.histogram(result.values(metric, mode), bins=edges)
        frames.append(
            pd.DataFrame({"mode": mode.value, "bin_left": edges[:-1], "bin_right": edges[1:], "count": counts})
        )
    return pd.concat(frames, ignore_index=True)
