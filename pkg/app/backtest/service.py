import logging

import numpy as np
import pandas as pd

from app.errors import SeriesError
from app.estimator import service as ewma
from app.estimator.schemas import EwmaParams
from app.policy import service as policy
from app.policy.schemas import ControllerState, Weights
from app.series.schemas import ReturnSeries
from app.series.service import check_aligned

from .schemas import TRAJECTORY_COLUMNS, BacktestConfig, BacktestResult

logger = logging.getLogger(__name__)


def step_index_return(r_risky: float, r_rf: float, prev: Weights) -> float:
    """r_ind_k = r_k w_{k-1} + r_rf_k c_{k-1}; negative cash pays r_rf."""
    return r_risky * prev.risky + r_rf * prev.cash


def run(risky: ReturnSeries, riskfree: ReturnSeries, cfg: BacktestConfig) -> BacktestResult:
    """Simulate one index over the aligned series.

    At each step the returns of t_k are observed first: the index return
    earned by the previous weights updates the index estimator, the risky
    return updates the risky estimator, then w_k is chosen. Steps
    1..warmup_steps use the open-loop rule with kappa held at 0.
    """
    check_aligned(risky, riskfree)
    n = len(risky)
    if n <= cfg.warmup_steps:
        raise SeriesError(f"{n} observations do not cover {cfg.warmup_steps} warmup steps")

    target = cfg.target
    controller = cfg.controller
    params = EwmaParams(halflife=cfg.estimator_halflife)
    cost_rate = cfg.cost_rate

    risky_state = ewma.initial_state(params)
    index_state = ewma.initial_state(params)
    ctrl = ControllerState()

    out = {name: np.full(n, np.nan) for name in TRAJECTORY_COLUMNS[3:]}
    out["kappa"][:] = 0.0
    out["cost"][:] = 0.0

    r_values = risky.values
    rf_values = riskfree.values
    prev: Weights | None = None
    pending_cost = 0.0

    for k in range(n):
        if prev is not None:
            r_ind = step_index_return(r_values[k], rf_values[k], prev) - pending_cost
            index_state = ewma.update(index_state, r_ind)
            sigma_ind = ewma.estimate(index_state)
            out["index_return"][k] = r_ind
            out["sigma_ind_hat"][k] = sigma_ind
            if sigma_ind > 0:
                out["tracking_error"][k] = policy.tracking_error(sigma_ind, target)

        risky_state = ewma.update(risky_state, r_values[k])
        sigma_hat = ewma.estimate(risky_state)
        out["sigma_hat"][k] = sigma_hat

        if controller is None or k + 1 <= cfg.warmup_steps:
            w = policy.open_loop_weights(target, sigma_hat)
        else:
            e = policy.tracking_error(out["sigma_ind_hat"][k], target)
            ctrl = policy.update_kappa(ctrl, controller, e)
            w = policy.control_weights(target, ctrl, sigma_hat)

        pending_cost = cost_rate * w.turnover_from(prev) if prev is not None else 0.0
        out["weight"][k] = w.risky
        out["cash"][k] = w.cash
        out["kappa"][k] = ctrl.kappa
        out["cost"][k] = pending_cost
        prev = w

    trajectory = pd.DataFrame(
        {
            "timestamp": risky.timestamps,
            "risky_return": r_values,
            "riskfree_return": rf_values,
            **out,
        },
        columns=list(TRAJECTORY_COLUMNS),
    )
    logger.debug(
        "%s backtest of %s: %d steps, final w=%.4f, kappa=%.4f",
        cfg.mode, risky.label, n, prev.risky, ctrl.kappa,
    )
    return BacktestResult(config=cfg, risky=risky, riskfree=riskfree, trajectory=trajectory)
