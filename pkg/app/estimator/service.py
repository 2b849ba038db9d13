import math

import numpy as np
from scipy.signal import lfilter

from app.errors import DegenerateEstimateError

from .schemas import EwmaParams, EwmaState


def decay_from_halflife(h: float) -> float:
    if not h > 0:
        raise ValueError(f"halflife must be positive, got {h!r}")
    return math.exp(-math.log(2.0) / h)


def initial_state(params: EwmaParams) -> EwmaState:
    return EwmaState(decay=params.decay)


def update(state: EwmaState, r: float) -> EwmaState:
    # multiply-then-add keeps beta^k out of the recursion
    b = state.decay
    return EwmaState(
        decay=b,
        weighted_sum=b * state.weighted_sum + r * r,
        weight_norm=b * state.weight_norm + 1.0,
        count=state.count + 1,
    )


def estimate(state: EwmaState) -> float:
    """Per-period volatility: sqrt(weighted_sum / weight_norm)."""
    if state.count < 1:
        raise DegenerateEstimateError("EWMA estimate requested before any update")
    return math.sqrt(state.weighted_sum / state.weight_norm)


def batch_estimates(returns, params: EwmaParams) -> np.ndarray:
    """Running estimates sigma_1..sigma_n for a whole path in one pass.

    Works along the last axis, so a 2-D array of independent paths is fine.
    """
    r = np.asarray(returns, dtype=np.float64)
    b = params.decay
    sums = lfilter([1.0], [1.0, -b], r * r, axis=-1)
    norms = lfilter([1.0], [1.0, -b], np.ones(r.shape[-1]))
    return np.sqrt(sums / norms)
