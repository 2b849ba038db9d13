import math

from app.errors import DegenerateEstimateError

from .schemas import ControllerConfig, ControllerState, TargetSpec, Weights


def clip(t: float, lo: float, hi: float) -> float:
    if lo > hi:
        raise ValueError(f"empty clip interval [{lo!r}, {hi!r}]")
    if t < lo:
        return lo
    if t > hi:
        return hi
    return t


def _require_positive(name: str, value: float) -> None:
    if not value > 0:
        raise DegenerateEstimateError(f"{name} must be positive, got {value!r}")


def open_loop_weights(spec: TargetSpec, sigma_hat: float) -> Weights:
    """w = min(sigma_tar / sigma_hat, L)."""
    _require_positive("risky volatility estimate", sigma_hat)
    return Weights.from_risky(min(spec.sigma_tar / sigma_hat, spec.leverage_limit))


def tracking_error(sigma_ind_hat: float, spec: TargetSpec) -> float:
    """e = log(sigma_ind_hat / sigma_tar); roughly the relative miss."""
    _require_positive("index volatility estimate", sigma_ind_hat)
    return math.log(sigma_ind_hat / spec.sigma_tar)


def update_kappa(state: ControllerState, cfg: ControllerConfig, e: float) -> ControllerState:
    """kappa_k = (1 - theta) * clip(-g e_k; [kmin, kmax]) + theta * kappa_{k-1}."""
    theta = cfg.smoothing
    target = clip(-cfg.gain * e, cfg.kappa_min, cfg.kappa_max)
    kappa = (1.0 - theta) * target + theta * state.kappa
    # rounding can push the convex combination one ulp past a bound
    return ControllerState(kappa=min(max(kappa, cfg.kappa_min), cfg.kappa_max))


def control_weights(spec: TargetSpec, state: ControllerState, sigma_hat: float) -> Weights:
    """w = min(exp(kappa) * sigma_tar / sigma_hat, L)."""
    _require_positive("risky volatility estimate", sigma_hat)
    return Weights.from_risky(
        min(math.exp(state.kappa) * (spec.sigma_tar / sigma_hat), spec.leverage_limit)
    )
