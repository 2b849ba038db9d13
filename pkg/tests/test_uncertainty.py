import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import stats

from app.config import settings
from app.errors import InsufficientSamplesError
from app.estimator.service import decay_from_halflife
from app.uncertainty import repository as unc_repo
from app.uncertainty import service as uncertainty
from app.uncertainty.schemas import ChiApprox, McBandSpec

from .conftest import SIGMA_TAR


# ---------- Monte Carlo ----------
def test_zero_vol_band_is_zero():
    band = uncertainty.mc_band(McBandSpec(sigma_true=0.0, n_samples=1000, burn_in=100))
    assert band.levels == [0.0, 0.0]
    assert band.n_retained == 900


def test_too_few_retained_samples():
    with pytest.raises(InsufficientSamplesError):
        uncertainty.mc_estimates(McBandSpec(sigma_true=0.01, n_samples=150, burn_in=100))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n_samples": 252, "burn_in": 252},
        {"percentiles": [90, 10]},
        {"percentiles": [0, 50]},
        {"percentiles": []},
        {"n_paths": 0},
    ],
)
def test_band_spec_validation(kwargs):
    with pytest.raises(ValidationError):
        McBandSpec(sigma_true=0.01, **kwargs)


def test_estimates_do_not_depend_on_partitioning(monkeypatch):
    spec = McBandSpec(sigma_true=0.01, n_samples=300, burn_in=50, halflife=21, n_paths=7, seed=3)
    serial = uncertainty.mc_estimates(spec, n_jobs=1)
    monkeypatch.setattr(settings, "MC_CHUNK", 2)
    chunked = uncertainty.mc_estimates(spec, n_jobs=1)
    parallel = uncertainty.mc_estimates(spec, n_jobs=2)
    assert serial.shape == (7 * 250,)
    assert serial.tobytes() == chunked.tobytes() == parallel.tobytes()
    other = uncertainty.mc_estimates(spec.model_copy(update={"seed": 4}), n_jobs=1)
    assert (other != serial).any()


def test_band_brackets_target_and_matches_chi_gap():
    spec = McBandSpec(sigma_true=SIGMA_TAR, n_samples=10_000, burn_in=252, halflife=126, n_paths=20, seed=1)
    band = uncertainty.mc_band(spec, n_jobs=1)
    assert band.lower < SIGMA_TAR < band.upper
    approx = uncertainty.ewma_distribution(SIGMA_TAR, 126)
    chi_gap = approx.ppf(0.9) - approx.ppf(0.1)
    assert band.upper - band.lower == pytest.approx(chi_gap, rel=0.15)


def test_band_coverage():
    spec = McBandSpec(sigma_true=1.0, n_samples=200, burn_in=0, percentiles=[25, 75])
    band = uncertainty.band_from_estimates(spec, np.arange(1.0, 101.0))
    assert uncertainty.band_coverage(np.arange(1.0, 101.0), band) == pytest.approx(0.50)
    assert math.isnan(uncertainty.band_coverage([np.nan], band))


# ---------- closed form ----------
@pytest.mark.parametrize("m, sigma, scale", [(1, 0.01, 0.01), (4, 0.01, 0.005)])
def test_sma_distribution(m, sigma, scale):
    approx = uncertainty.sma_distribution(sigma, m)
    assert approx.dof == m
    assert approx.scale == pytest.approx(scale, rel=1e-15)


def test_sma_window_must_be_positive():
    with pytest.raises(ValueError):
        uncertainty.sma_distribution(0.01, 0)


def test_ewma_distribution_parameters():
    approx = uncertainty.ewma_distribution(0.02, 1)
    assert approx.dof == pytest.approx(3.0, rel=1e-12)
    assert approx.scale == pytest.approx(0.02 / math.sqrt(3), rel=1e-12)
    assert uncertainty.ewma_distribution(0.02, 126).dof == pytest.approx(363.6, abs=0.1)
    with pytest.raises(ValueError):
        uncertainty.ewma_distribution(0.02, 0)


@pytest.mark.parametrize("h", [1, 21, 126, 1e7])
def test_moment_matching_is_exact(h):
    sigma = 0.013
    beta = decay_from_halflife(h)
    approx = uncertainty.ewma_distribution(sigma, h)
    assert approx.squared_mean() == pytest.approx(sigma**2, rel=1e-12)
    assert approx.squared_var() == pytest.approx(2 * sigma**4 * (1 - beta) / (1 + beta), rel=1e-12)


@pytest.mark.parametrize("dof", [1.0, 3.0, 61.0, 363.6, 5e4])
def test_chi_moments_match_scipy(dof):
    approx = ChiApprox(dof=dof, scale=0.01)
    ref = stats.chi(dof, scale=0.01)
    assert approx.mean() == pytest.approx(ref.mean(), rel=1e-10)
    assert approx.std() == pytest.approx(ref.std(), rel=1e-7)


def test_chi_std_at_huge_dof_stays_finite():
    approx = ChiApprox(dof=1e9, scale=1.0)
    assert approx.std() == pytest.approx(math.sqrt(0.5), rel=1e-6)


def test_std_decreases_with_halflife_and_scales():
    stds = [uncertainty.ewma_estimate_std(SIGMA_TAR, h) for h in (5, 21, 63, 126, 252)]
    assert all(b < a for a, b in zip(stds, stds[1:]))
    assert uncertainty.ewma_estimate_std(3 * SIGMA_TAR, 21) == pytest.approx(3 * stds[1], rel=1e-12)
    dofs = [uncertainty.ewma_distribution(1.0, h).dof for h in (5, 21, 63, 126, 252)]
    assert all(b > a for a, b in zip(dofs, dofs[1:]))


def test_std_curve_frame():
    frame = uncertainty.std_curve(SIGMA_TAR, [21, 126])
    assert list(frame.columns) == ["halflife", "dof", "std", "std_ann"]
    np.testing.assert_allclose(frame["std_ann"], frame["std"] * math.sqrt(252), rtol=1e-12)


def test_sma_squared_variance():
    sq = uncertainty.simulate_sma(1.0, 2, 1_000_000, seed=9)
    assert np.var(sq) == pytest.approx(1.0, rel=0.01)


def test_histogram_density_integrates_to_one():
    est = np.random.default_rng(0).chisquare(10, 5000)
    hist = uncertainty.histogram(est, ChiApprox(dof=10, scale=1.0), bins=40)
    assert hist["count"].sum() == 5000
    width = hist["bin_right"] - hist["bin_left"]
    assert float((hist["density"] * width).sum()) == pytest.approx(1.0, rel=1e-12)


def test_band_files(tmp_path):
    spec = McBandSpec(sigma_true=SIGMA_TAR, n_samples=1000, burn_in=100, halflife=21)
    band = uncertainty.mc_band(spec)
    unc_repo.write_band_csv(band, tmp_path / "band.csv")
    text = (tmp_path / "band.csv").read_text().splitlines()
    assert text[0] == "percentile,level,level_ann"
    assert len(text) == 3
    unc_repo.write_chi_json(uncertainty.ewma_distribution(SIGMA_TAR, 21), tmp_path / "chi.json", halflife=21)
    assert '"halflife": 21' in (tmp_path / "chi.json").read_text()
