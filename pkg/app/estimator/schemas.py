from __future__ import annotations

import math
from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, Field


class EwmaParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    halflife: float = Field(gt=0, allow_inf_nan=False)

    @property
    def decay(self) -> float:
        return math.exp(-math.log(2.0) / self.halflife)


@dataclass(frozen=True, slots=True)
class EwmaState:
    """Partial sums of the bias-corrected EWMA of squared returns.

    weighted_sum = sum_j beta^(k-j) r_j^2
    weight_norm  = sum_j beta^(k-j)      == (1 - beta^k) / (1 - beta)
    """

    decay: float
    weighted_sum: float = 0.0
    weight_norm: float = 0.0
    count: int = 0
