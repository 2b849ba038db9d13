import numpy as np
import pandas as pd
import pytest

from app.backtest.schemas import BacktestConfig
from app.policy.schemas import ControllerConfig, TargetSpec
from app.series import service as series
from app.series.schemas import ReturnSeries, SynthKind, SynthSpec
from app.units import vol_to_period

SIGMA_TAR = 0.15 / np.sqrt(252)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale synthetic experiments (deselect with -m 'not slow')")


def make_series(values, start="2020-01-01", label="s") -> ReturnSeries:
    ts = pd.bdate_range(start, periods=len(values))
    return ReturnSeries(timestamps=ts, values=values, label=label)


def zero_rate(risky: ReturnSeries) -> ReturnSeries:
    return series.constant_rate(risky.timestamps, 0.0)


def regime_series(seed: int, length: int = 5000) -> ReturnSeries:
    return series.generate(
        SynthSpec(
            kind=SynthKind.REGIME_SWITCH,
            vols=[vol_to_period(0.10), vol_to_period(0.30)],
            switch_points=[length // 2],
            length=length,
            seed=seed,
            label=f"regime-{seed}",
        )
    )


@pytest.fixture
def target() -> TargetSpec:
    return TargetSpec(sigma_tar=SIGMA_TAR, leverage_limit=1.5)


@pytest.fixture
def open_cfg(target) -> BacktestConfig:
    return BacktestConfig(target=target, spread_bps=0.0)


@pytest.fixture
def control_cfg(target) -> BacktestConfig:
    return BacktestConfig(target=target, controller=ControllerConfig())


@pytest.fixture
def iid_risky() -> ReturnSeries:
    return series.generate(SynthSpec(vols=[2 * SIGMA_TAR], length=2000, seed=7, label="iid"))


@pytest.fixture
def price_csv(tmp_path):
    path = tmp_path / "prices.csv"
    path.write_text("date,close\n2020-01-01,100\n2020-01-02,101\n2020-01-03,99.99\n")
    return path
