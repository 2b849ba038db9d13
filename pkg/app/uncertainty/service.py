"""Sampling variability of volatility estimates for a perfectly tracking index.

Monte Carlo: draw i.i.d. N(0, sigma^2) returns, run the same bias-corrected
EWMA used in backtests, drop the burn-in, read off percentiles.

Closed form: an SMA of m squared normals is exactly (sigma^2/m) chi^2_m; the
EWMA is matched in mean and variance by (sigma^2/nu) chi^2_nu with
nu = (1 + beta) / (1 - beta).
"""
import logging
import math
from typing import Iterable, List

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy import stats

from app.config import settings
from app.errors import InsufficientSamplesError
from app.estimator.schemas import EwmaParams
from app.estimator.service import batch_estimates, decay_from_halflife
from app.units import SQRT_PERIODS

from .schemas import BandResult, ChiApprox, McBandSpec

logger = logging.getLogger(__name__)

MIN_RETAINED = 100
SMA_CHUNK = 100_000


# ---------- Monte Carlo ----------
def _simulate_chunk(seeds: List[np.random.SeedSequence], spec: McBandSpec) -> np.ndarray:
    params = EwmaParams(halflife=spec.halflife)
    draws = np.stack(
        [np.random.Generator(np.random.PCG64(s)).standard_normal(spec.n_samples) for s in seeds]
    )
    estimates = batch_estimates(spec.sigma_true * draws, params)
    return estimates[:, spec.burn_in:].ravel()


def mc_estimates(spec: McBandSpec, *, n_jobs: int | None = None) -> np.ndarray:
    """Retained EWMA estimates of every path, pooled in path order.

    Path i draws from substream i of ``SeedSequence(spec.seed)``, so the
    result does not depend on how paths are split across workers.
    """
    if spec.retained_per_path * spec.n_paths < MIN_RETAINED:
        raise InsufficientSamplesError(
            f"{spec.retained_per_path * spec.n_paths} retained samples, need at least {MIN_RETAINED}"
        )
    seeds = np.random.SeedSequence(spec.seed).spawn(spec.n_paths)
    chunk = max(1, settings.MC_CHUNK)
    parts = [seeds[i:i + chunk] for i in range(0, len(seeds), chunk)]
    jobs = settings.N_JOBS if n_jobs is None else n_jobs
    logger.debug("monte carlo: %d paths in %d partitions, n_jobs=%d", spec.n_paths, len(parts), jobs)
    if jobs == 1 or len(parts) == 1:
        pooled = [_simulate_chunk(p, spec) for p in parts]
    else:
        pooled = Parallel(n_jobs=jobs)(delayed(_simulate_chunk)(p, spec) for p in parts)
    return np.concatenate(pooled)


def band_from_estimates(spec: McBandSpec, estimates: np.ndarray) -> BandResult:
    levels = np.percentile(estimates, spec.percentiles)
    return BandResult(spec=spec, levels=[float(x) for x in levels], n_retained=int(estimates.size))


def mc_band(spec: McBandSpec, *, n_jobs: int | None = None) -> BandResult:
    band = band_from_estimates(spec, mc_estimates(spec, n_jobs=n_jobs))
    logger.info(
        "band h=%g over %d samples: %s",
        spec.halflife, band.n_retained, ", ".join(f"p{p:g}={v:.6g}" for p, v in zip(spec.percentiles, band.levels)),
    )
    return band


def band_coverage(estimates, band: BandResult) -> float:
    """Share of estimates inside the outermost band levels."""
    est = np.asarray(estimates, dtype=np.float64)
    est = est[~np.isnan(est)]
    if est.size == 0:
        return math.nan
    return float(np.mean((est >= band.lower) & (est <= band.upper)))


# ---------- Closed form ----------
def sma_distribution(sigma_true: float, window: int) -> ChiApprox:
    if window < 1:
        raise ValueError(f"SMA window must be >= 1, got {window!r}")
    return ChiApprox(dof=float(window), scale=sigma_true / math.sqrt(window))


def ewma_distribution(sigma_true: float, halflife: float) -> ChiApprox:
    beta = decay_from_halflife(halflife)
    return ChiApprox(
        dof=(1.0 + beta) / (1.0 - beta),
        scale=sigma_true * math.sqrt((1.0 - beta) / (1.0 + beta)),
    )


def ewma_estimate_std(sigma_true: float, halflife: float) -> float:
    return ewma_distribution(sigma_true, halflife).std()


def std_curve(sigma_true: float, halflives: Iterable[float]) -> pd.DataFrame:
    rows = []
    for h in halflives:
        approx = ewma_distribution(sigma_true, h)
        std = approx.std()
        rows.append({"halflife": float(h), "dof": approx.dof, "std": std, "std_ann": std * SQRT_PERIODS})
    return pd.DataFrame(rows, columns=["halflife", "dof", "std", "std_ann"])


# ---------- Checks against the closed form ----------
def simulate_sma(sigma_true: float, window: int, n_windows: int, seed: int = 0) -> np.ndarray:
    """Squared SMA estimates over independent windows of i.i.d. normals."""
    rng = np.random.Generator(np.random.PCG64(seed))
    out = np.empty(n_windows)
    for start in range(0, n_windows, SMA_CHUNK):
        stop = min(start + SMA_CHUNK, n_windows)
        r = sigma_true * rng.standard_normal((stop - start, window))
        out[start:stop] = np.mean(r * r, axis=1)
    return out


def ks_statistic(samples, approx: ChiApprox) -> float:
    return float(stats.kstest(np.asarray(samples), approx.cdf).statistic)


def ks_statistic_squared(squared_samples, approx: ChiApprox) -> float:
    return float(stats.kstest(np.asarray(squared_samples), approx.squared_cdf).statistic)


def histogram(estimates, approx: ChiApprox, bins: int = 50) -> pd.DataFrame:
    est = np.asarray(estimates, dtype=np.float64)
    counts, edges = np.histogram(est, bins=bins)
    width = np.diff(edges)
    centers = (edges[:-1] + edges[1:]) / 2.0
    return pd.DataFrame(
        {
            "bin_left": edges[:-1],
            "bin_right": edges[1:],
            "bin_center": centers,
            "count": counts,
            "density": counts / (est.size * width),
            "approx_density": approx.pdf(centers),
        }
    )
