import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

SUM_TOLERANCE = 1e-12


class ProbVector(BaseModel):
    """
    Finite probability vector.

    Attributes:
        components: Nonnegative entries summing to one within 1e-12
    """
    model_config = ConfigDict(frozen=True)

    components: Tuple[float, ...]

    @field_validator("components")
    @classmethod
    def check_simplex(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        if not value:
            raise ValueError("probability vector is empty")
        if any(not math.isfinite(p) or p < 0.0 for p in value):
            raise ValueError("components must be finite and nonnegative")
        total = math.fsum(value)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"components sum to {total!r}, not 1")
        return value

    @classmethod
    def of(cls, *components: float) -> "ProbVector":
        return cls(components=tuple(float(p) for p in components))

    @classmethod
    def binary(cls, p: float) -> "ProbVector":
        """Return (p, 1 - p)."""
        return cls.of(p, 1.0 - p)

    def __len__(self) -> int:
        return len(self.components)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.components, dtype=float)


class IndexMap(BaseModel):
    """
    Exponent and divergence index of the alpha-form of the binomial asymptotics.

    Attributes:
        scaling_exponent: Power of n multiplying the divergence, (3 + alpha) / 2
        divergence_index: Alpha index of that divergence, -2 - alpha
    """
    model_config = ConfigDict(frozen=True)

    scaling_exponent: float
    divergence_index: float
