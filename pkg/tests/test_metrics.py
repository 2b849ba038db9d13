import itertools

import numpy as np
import pytest

from app.backtest import service as backtest
from app.backtest.schemas import BacktestConfig
from app.errors import SeriesError
from app.metrics import repository as metrics_repo
from app.metrics import service as metrics
from app.metrics.schemas import TABLE_ROWS

from .conftest import SIGMA_TAR, make_series, zero_rate


def _brute_drawdown(r):
    value = np.concatenate(([1.0], np.cumprod(1.0 + np.asarray(r))))
    return max(
        (1.0 - value[j] / value[i] for i, j in itertools.combinations_with_replacement(range(value.size), 2)),
        default=0.0,
    )


# ---------- tracking ----------
def test_tracking_mae():
    assert metrics.vol_tracking_mae(np.full(20, SIGMA_TAR), SIGMA_TAR) == 0.0
    offset = np.full(20, SIGMA_TAR + 0.001 / np.sqrt(252))
    assert metrics.vol_tracking_mae(offset, SIGMA_TAR) == pytest.approx(0.001, rel=1e-9)
    d = 0.0005
    alternating = SIGMA_TAR + d * np.tile([1.0, -1.0], 10)
    assert metrics.vol_tracking_mae(alternating, SIGMA_TAR) == pytest.approx(d * np.sqrt(252), rel=1e-9)


def test_tracking_mae_skips_nan_and_rejects_empty():
    est = np.array([np.nan, SIGMA_TAR + 0.01, SIGMA_TAR + 0.01])
    assert metrics.vol_tracking_mae(est, SIGMA_TAR) == pytest.approx(0.01 * np.sqrt(252))
    with pytest.raises(SeriesError):
        metrics.vol_tracking_mae(est, SIGMA_TAR, window_start=3)


# ---------- drawdown ----------
@pytest.mark.parametrize("r, expected", [([0.01, 0.0, 0.02], 0.0), ([-0.5, 0.5], 0.5), ([-0.1], 0.1)])
def test_max_drawdown_examples(r, expected):
    assert metrics.max_drawdown(np.array(r)) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_max_drawdown_matches_brute_force(seed):
    r = np.random.default_rng(seed).normal(0.0, 0.02, 300)
    assert metrics.max_drawdown(r) == _brute_drawdown(r)


# ---------- return statistics ----------
def test_constant_return_stats():
    risky = make_series(np.full(252, 0.0004))
    rep = metrics.report_underlying(risky, zero_rate(risky), SIGMA_TAR, 126, first_row=0)
    assert rep.ann_return == pytest.approx(1.0004**252 - 1, rel=1e-12)
    assert rep.ann_return == pytest.approx(0.10596, abs=1e-5)
    assert rep.ann_vol == 0.0
    assert rep.sharpe is None
    assert rep.kalmar is None
    assert rep.max_drawdown == 0.0


def test_riskfree_like_returns_have_zero_sharpe():
    r = make_series(np.random.default_rng(0).normal(0.0, 0.01, 500))
    rep = metrics.report_underlying(r, r, SIGMA_TAR, 126)
    assert rep.sharpe == 0.0


def test_vol_scales_linearly():
    r = np.random.default_rng(1).normal(0.0, 0.001, 1000)
    a = metrics.report_underlying(make_series(r), zero_rate(make_series(r)), SIGMA_TAR, 126)
    b = metrics.report_underlying(make_series(4 * r), zero_rate(make_series(r)), SIGMA_TAR, 126)
    assert b.ann_vol == pytest.approx(4 * a.ann_vol, rel=1e-12)


def test_kalmar_is_cagr_over_drawdown():
    r = np.random.default_rng(2).normal(0.0005, 0.01, 1000)
    rep = metrics.report_underlying(make_series(r), zero_rate(make_series(r)), SIGMA_TAR, 126, first_row=0)
    assert rep.kalmar == pytest.approx(rep.ann_return / rep.max_drawdown)
    assert metrics.kalmar(r) == pytest.approx(rep.kalmar)


# ---------- backtest reports ----------
def test_report_of_backtest(iid_risky, control_cfg):
    rf = zero_rate(iid_risky)
    res = backtest.run(iid_risky, rf, control_cfg)
    rep = metrics.report(res, rf, SIGMA_TAR)
    assert rep.n_periods == len(iid_risky) - 1
    assert rep.turnover == pytest.approx(res.turnover)
    assert rep.turnover_per_annum == pytest.approx(res.turnover * 252 / rep.n_periods)
    window = res.sigma_ind_hat[control_cfg.warmup_steps:]
    assert rep.tracking_error_mae == pytest.approx(np.mean(np.abs(window - SIGMA_TAR)) * np.sqrt(252))
    assert rep.log_tracking_error_mae is not None
    assert rep.label == "control"


def test_report_rejects_misaligned_riskfree(iid_risky, open_cfg):
    res = backtest.run(iid_risky, zero_rate(iid_risky), open_cfg)
    with pytest.raises(SeriesError):
        metrics.report(res, make_series(np.zeros(5)), SIGMA_TAR)


def test_comparison_table(tmp_path, iid_risky, control_cfg):
    table = metrics.compare(iid_risky, zero_rate(iid_risky), control_cfg)
    assert list(table.columns) == ["underlying", "open_loop", "control"]
    assert table.columns["underlying"].turnover == 0.0
    frame = table.to_frame()
    assert list(frame["metric"]) == [title for _, title in TABLE_ROWS]
    assert list(frame.columns) == ["metric", "underlying", "open_loop", "control"]

    metrics_repo.write_comparison_csv(table, tmp_path / "c.csv")
    metrics_repo.write_comparison_json(table, tmp_path / "c.json")
    assert (tmp_path / "c.csv").read_text().startswith("metric,underlying,open_loop,control\n")


def test_index_ruin_floors_value_at_zero(target):
    r = np.full(40, 1e-4)
    r[30] = -0.7
    risky = make_series(r)
    rf = zero_rate(risky)
    res = backtest.run(risky, rf, BacktestConfig(target=target, spread_bps=0.0, warmup_steps=5))
    assert res.index_returns.min() <= -1.0
    rep = metrics.report(res, rf, SIGMA_TAR)
    assert rep.max_drawdown == 1.0
    assert rep.ann_return == -1.0
    assert rep.kalmar == -1.0
    assert metrics.max_drawdown(np.array([0.1, -1.2, 0.5])) == 1.0
