from __future__ import annotations

import math
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import stats
from scipy.special import gammaln

from app.config import DEFAULT_BURN_IN, DEFAULT_HALFLIFE, DEFAULT_PERCENTILES

# above this many degrees of freedom the chi variance uses its asymptotic
# expansion; nu - mean^2 cancels catastrophically there
ASYMPTOTIC_DOF = 1e5


class McBandSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    sigma_true: float = Field(ge=0, allow_inf_nan=False)  # per period
    n_samples: int = Field(10_000, gt=0)  # path length N
    burn_in: int = Field(DEFAULT_BURN_IN, ge=0)
    halflife: float = Field(DEFAULT_HALFLIFE, gt=0, allow_inf_nan=False)
    percentiles: List[float] = Field(default_factory=lambda: list(DEFAULT_PERCENTILES))
    seed: int = 0
    n_paths: int = Field(1, ge=1)

    @field_validator("percentiles")
    @classmethod
    def _check_percentiles(cls, v):
        if not v:
            raise ValueError("at least one percentile is required")
        if any(not 0 < p < 100 for p in v):
            raise ValueError("percentiles must lie strictly inside (0, 100)")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("percentiles must be strictly increasing")
        return v

    @model_validator(mode="after")
    def _check_burn_in(self) -> "McBandSpec":
        if self.burn_in >= self.n_samples:
            raise ValueError(f"burn-in {self.burn_in} leaves nothing of {self.n_samples} samples")
        return self

    @property
    def retained_per_path(self) -> int:
        return self.n_samples - self.burn_in


class BandResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    spec: McBandSpec
    levels: List[float]  # per-period vol, one per percentile
    n_retained: int

    @property
    def lower(self) -> float:
        return self.levels[0]

    @property
    def upper(self) -> float:
        return self.levels[-1]


class ChiApprox(BaseModel):
    """sigma_hat ~ scale * chi_dof."""

    model_config = ConfigDict(frozen=True)

    dof: float = Field(gt=0, allow_inf_nan=False)
    scale: float = Field(gt=0, allow_inf_nan=False)

    def frozen(self):
        return stats.chi(self.dof, scale=self.scale)

    def _unit_mean(self) -> float:
        # E[chi_nu] = sqrt(2) Gamma((nu+1)/2) / Gamma(nu/2), via log-gamma
        nu = self.dof
        return math.sqrt(2.0) * math.exp(gammaln((nu + 1.0) / 2.0) - gammaln(nu / 2.0))

    def _unit_var(self) -> float:
        nu = self.dof
        if nu > ASYMPTOTIC_DOF:
            return 0.5 - 1.0 / (8.0 * nu)
        return nu - self._unit_mean() ** 2

    def mean(self) -> float:
        return self.scale * self._unit_mean()

    def std(self) -> float:
        return self.scale * math.sqrt(self._unit_var())

    def median(self) -> float:
        return float(self.frozen().median())

    def ppf(self, q):
        return self.frozen().ppf(q)

    def pdf(self, x):
        return self.frozen().pdf(x)

    def cdf(self, x):
        return self.frozen().cdf(x)

    def squared_mean(self) -> float:
        return self.scale**2 * self.dof

    def squared_var(self) -> float:
        return 2.0 * self.dof * self.scale**4

    def squared_cdf(self, y):
        return stats.chi2(self.dof, scale=self.scale**2).cdf(np.asarray(y))
