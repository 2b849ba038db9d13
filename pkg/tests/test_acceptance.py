"""Desk-scale synthetic experiments: estimator, policy, backtest, uncertainty
and grid behaviour checked end to end."""
import numpy as np
import pytest

from app.backtest import service as backtest
from app.backtest.schemas import BacktestConfig
from app.estimator import service as ewma
from app.estimator.schemas import EwmaParams
from app.metrics import service as metrics
from app.policy import service as policy
from app.policy.schemas import ControllerConfig, ControllerState, TargetSpec
from app.search import service as search
from app.search.schemas import GridSpec
from app.series import service as series
from app.series.schemas import SynthSpec
from app.uncertainty import service as uncertainty
from app.uncertainty.schemas import McBandSpec

from .conftest import SIGMA_TAR, regime_series, zero_rate


def _default_cfg(controller=None, spread_bps=5.0) -> BacktestConfig:
    return BacktestConfig(
        target=TargetSpec(sigma_tar=SIGMA_TAR, leverage_limit=1.5),
        estimator_halflife=126,
        controller=controller,
        warmup_steps=10,
        spread_bps=spread_bps,
    )


def test_incremental_estimator_matches_batch():
    rng = np.random.default_rng(2024)
    for i in range(1000):
        h = (1, 21, 126)[i % 3]
        r = rng.normal(0.0, rng.uniform(0.001, 0.05), rng.integers(1, 1001))
        params = EwmaParams(halflife=h)
        state = ewma.initial_state(params)
        incremental = np.empty(r.size)
        for k, x in enumerate(r):
            state = ewma.update(state, x)
            incremental[k] = ewma.estimate(state)
        np.testing.assert_allclose(incremental, ewma.batch_estimates(r, params), rtol=1e-12)
        beta = params.decay
        w = beta ** np.arange(r.size - 1, -1, -1)
        direct = np.sqrt(np.sum(w * r * r) / np.sum(w))
        assert incremental[-1] == pytest.approx(direct, rel=1e-12)


def test_weights_and_kappa_stay_feasible():
    rng = np.random.default_rng(77)
    for _ in range(100):
        spec = TargetSpec(sigma_tar=rng.uniform(1e-4, 0.05), leverage_limit=rng.uniform(0.5, 3.0))
        cfg = ControllerConfig(
            gain=rng.uniform(0.1, 200.0),
            smoothing=rng.uniform(0.01, 0.99),
            kappa_min=-rng.uniform(0.01, 2.0),
            kappa_max=rng.uniform(0.01, 2.0),
        )
        state = ControllerState()
        for sigma_hat, e in zip(np.exp(rng.uniform(-10, 0, 500)), rng.normal(0, 0.5, 500)):
            state = policy.update_kappa(state, cfg, e)
            assert cfg.kappa_min <= state.kappa <= cfg.kappa_max
            for w in (policy.open_loop_weights(spec, sigma_hat), policy.control_weights(spec, state, sigma_hat)):
                assert 0.0 <= w.risky <= spec.leverage_limit
                assert abs(w.risky + w.cash - 1.0) <= 1e-12


@pytest.mark.slow
def test_open_loop_calibration():
    hits = 0
    for seed in range(10):
        risky = series.generate(SynthSpec(vols=[2 * SIGMA_TAR], length=50_000, seed=seed))
        rf = zero_rate(risky)
        rep = metrics.report(backtest.run(risky, rf, _default_cfg(spread_bps=0.0)), rf, SIGMA_TAR)
        hits += abs(rep.ann_vol / 0.15 - 1.0) <= 0.02
    assert hits >= 9


@pytest.mark.slow
def test_control_beats_open_loop_on_regime_shift():
    wins, reductions = 0, []
    for seed in range(20):
        risky = regime_series(seed, 5000)
        rf = zero_rate(risky)
        open_rep = metrics.report(backtest.run(risky, rf, _default_cfg()), rf, SIGMA_TAR)
        ctrl_rep = metrics.report(backtest.run(risky, rf, _default_cfg(ControllerConfig())), rf, SIGMA_TAR)
        wins += ctrl_rep.tracking_error_mae < open_rep.tracking_error_mae
        reductions.append(1.0 - ctrl_rep.tracking_error_mae / open_rep.tracking_error_mae)
        assert ctrl_rep.turnover > open_rep.turnover
    assert wins >= 18
    assert np.median(reductions) >= 0.5


@pytest.mark.slow
@pytest.mark.parametrize("m", [1, 4, 16])
def test_sma_distribution_is_exact(m):
    squared = uncertainty.simulate_sma(SIGMA_TAR, m, 1_000_000, seed=m)
    approx = uncertainty.sma_distribution(SIGMA_TAR, m)
    assert uncertainty.ks_statistic_squared(squared, approx) < 0.01


@pytest.mark.slow
@pytest.mark.parametrize("h, steps, paths", [(21, 600, 50_000), (126, 2600, 20_000)])
def test_ewma_chi_approximation(h, steps, paths):
    # one stationary estimate per independent path
    spec = McBandSpec(sigma_true=SIGMA_TAR, n_samples=steps, burn_in=steps - 1, halflife=h, n_paths=paths, seed=h)
    estimates = uncertainty.mc_estimates(spec)
    approx = uncertainty.ewma_distribution(SIGMA_TAR, h)
    assert uncertainty.ks_statistic(estimates, approx) < 0.02
    beta = ewma.decay_from_halflife(h)
    assert approx.squared_mean() == pytest.approx(SIGMA_TAR**2, rel=1e-12)
    assert approx.squared_var() == pytest.approx(2 * SIGMA_TAR**4 * (1 - beta) / (1 + beta), rel=1e-12)


@pytest.mark.slow
def test_median_matches_chi_median():
    spec = McBandSpec(
        sigma_true=SIGMA_TAR, n_samples=600, burn_in=599, halflife=21, percentiles=[50], n_paths=20_000, seed=5
    )
    band = uncertainty.mc_band(spec)
    assert band.levels[0] == pytest.approx(uncertainty.ewma_distribution(SIGMA_TAR, 21).median(), rel=0.01)


@pytest.mark.slow
def test_perfect_tracker_stays_in_band():
    band = uncertainty.mc_band(
        McBandSpec(sigma_true=SIGMA_TAR, n_samples=20_000, burn_in=252, halflife=126, n_paths=50, seed=1000)
    )
    tracker = uncertainty.mc_estimates(
        McBandSpec(sigma_true=SIGMA_TAR, n_samples=20_000, burn_in=252, halflife=126, n_paths=10, seed=0)
    )
    assert uncertainty.band_coverage(tracker, band) >= 0.75


@pytest.mark.slow
def test_grid_monotonicity():
    risky = regime_series(11, 5000)
    result = search.run_grid(risky, zero_rate(risky), GridSpec(base=_default_cfg(ControllerConfig())))
    assert len(result.cells) == 120
    turnover_g, turnover_theta, te_g = search.rank_summary(result)
    assert turnover_g > 0
    assert turnover_theta < 0
    assert te_g < 0
