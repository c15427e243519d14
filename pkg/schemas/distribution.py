import math
from enum import Enum
from typing import Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from typing_extensions import Annotated

from .deformation import DeformationParameter


class NormalizationMode(str, Enum):
    """How the q-log weights are turned into probabilities."""
    EXACT_CQ = "exact"  # root-find ln_q C_q so the q-exponentials sum to one
    MAX_SHIFT = "shift"  # subtract the largest weight, then normalize linearly


class QBinomialSpec(BaseModel):
    """
    Parameters of a q-binomial distribution.

    Attributes:
        param: Deformation parameter
        n: Number of trials (at least 2)
        r: Success parameter, strictly inside (0, 1)
        mode: Normalization mode
    """
    model_config = ConfigDict(frozen=True)

    param: DeformationParameter
    n: int = Field(..., ge=2)
    r: float = Field(..., gt=0.0, lt=1.0)
    mode: NormalizationMode = NormalizationMode.MAX_SHIFT

    @property
    def floor_index(self) -> int:
        """Index of the floor of n * r."""
        return int(math.floor(self.n * self.r))

    @property
    def sigma_q(self) -> float:
        return self.n ** (self.param.q / 2.0) * math.sqrt(self.r * (1.0 - self.r))


class ExactNormalization(BaseModel):
    """
    Metadata of the ExactCq mode.

    Attributes:
        t: Root of sum_k exp_q(S_k + t) = 1, i.e. ln_q C_q
        expansions: Lower-bracket expansions that were needed
        iterations: Bisection steps taken
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["exact_cq"] = "exact_cq"
    t: float
    expansions: int = 0
    iterations: int = 0

    @property
    def qlog_offset(self) -> float:
        return self.t


class ShiftNormalization(BaseModel):
    """
    Metadata of the MaxShift mode.

    Attributes:
        shift: Largest q-log weight S_max
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["max_shift"] = "max_shift"
    shift: float

    @property
    def qlog_offset(self) -> float:
        return -self.shift


NormalizationMeta = Annotated[
    Union[ExactNormalization, ShiftNormalization], Field(discriminator="kind")
]


class QBinomialPmf(BaseModel):
    """
    A fully built q-binomial distribution on k = 0..n.

    Attributes:
        spec: Parameters the pmf was built from
        qlog_weights: Unnormalized q-log weights S_k
        probs: Normalized probabilities
        norm_meta: Normalization metadata of the mode in use
        raw_mass: Compensated sum W of the raw weights before linear normalization
        peak_index: First index of the largest probability
        sigma_q: Fluctuation scale n^(q/2) * sqrt(r (1 - r))
        grid: Standardized abscissae (k - n r) / sigma_q
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spec: QBinomialSpec
    qlog_weights: np.ndarray
    probs: np.ndarray
    norm_meta: NormalizationMeta
    raw_mass: float = Field(..., gt=0.0)
    peak_index: int
    sigma_q: float
    grid: np.ndarray

    @property
    def param(self) -> DeformationParameter:
        return self.spec.param

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def qlog_probs(self) -> np.ndarray:
        """
        q-log of the raw weights, S_k plus the mode offset.

        For ExactCq this is S_k + t; for MaxShift it is S_k - S_max, the q-log
        of the peak-relative weight. Differences along k carry the shape of the
        distribution; `services.qbinomial.qlog_probabilities` gives q_ln(probs).
        """
        return self.qlog_weights + self.norm_meta.qlog_offset
