"""Annualization helpers. Every conversion uses 252 periods per year."""
import math

from app.config import PERIODS_PER_YEAR

SQRT_PERIODS = math.sqrt(PERIODS_PER_YEAR)


def vol_to_period(annual_vol: float) -> float:
    return annual_vol / SQRT_PERIODS


def vol_to_annual(period_vol: float) -> float:
    return period_vol * SQRT_PERIODS


def mean_to_period(annual_mean: float) -> float:
    return annual_mean / PERIODS_PER_YEAR


def rate_pct_to_period(annual_rate_pct: float) -> float:
    # simple de-annualization, no compounding
    return annual_rate_pct / 100.0 / PERIODS_PER_YEAR
