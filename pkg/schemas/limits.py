from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .deformation import DeformationParameter


class LdpEntry(BaseModel):
    """One point of an LDP convergence series."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2)
    scaled_stat: float


class LdpSeries(BaseModel):
    """
    Scaled q-log tail statistic over increasing n, with its analytic limit.

    Attributes:
        param: Deformation parameter
        r: Success parameter
        x: Tail threshold (fraction of successes)
        entries: (n, scaled_stat) pairs, strictly increasing in n
        target: Minus the rate function at x
        ldp_regime: True for 0 < q < 1 and the classical band, where the limit holds
    """
    model_config = ConfigDict(frozen=True)

    param: DeformationParameter
    r: float = Field(..., gt=0.0, lt=1.0)
    x: float = Field(..., gt=0.0, lt=1.0)
    entries: List[LdpEntry]
    target: float
    ldp_regime: bool

    @field_validator("entries")
    @classmethod
    def check_increasing(cls, value: List[LdpEntry]) -> List[LdpEntry]:
        ns = [entry.n for entry in value]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("entries must be strictly increasing in n")
        return value

    @property
    def abs_errors(self) -> List[float]:
        return [abs(entry.scaled_stat - self.target) for entry in self.entries]


class CltResidualReport(BaseModel):
    """
    q-log residuals of the local limit theorem inside |x_k| <= window.

    Attributes:
        param: Deformation parameter
        r: Success parameter
        n: Number of trials
        window: Half-width L of the window in standardized units
        k: Indices inside the window
        x: Standardized abscissae of those indices
        residual: q_ln p_k - q_ln P_n^* + x_k^2 / 2
        max_abs_residual: Largest |residual|
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    param: DeformationParameter
    r: float
    n: int
    window: float = Field(..., gt=0.0)
    k: np.ndarray
    x: np.ndarray
    residual: np.ndarray
    max_abs_residual: float

    def points(self) -> List[Tuple[int, float, float]]:
        return [(int(k), float(x), float(res)) for k, x, res in zip(self.k, self.x, self.residual)]


class DecayPoint(BaseModel):
    """Largest residual observed at one n."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    max_abs_residual: float = Field(..., ge=0.0)


class CltSweep(BaseModel):
    """Largest CLT residual per n and its log-log decay slope."""
    model_config = ConfigDict(frozen=True)

    param: DeformationParameter
    r: float
    window: float
    points: List[DecayPoint]
    slope: Optional[float] = None


class ScaledDensity(BaseModel):
    """
    Step density sigma_q * p_k on the standardized grid.

    Attributes:
        x: Standardized abscissae
        g: Density values
        spacing: Grid step 1 / sigma_q
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: np.ndarray
    g: np.ndarray
    spacing: float = Field(..., gt=0.0)

    def within(self, window: float) -> "ScaledDensity":
        """Restriction to the grid points with |x| <= window."""
        inside = np.abs(self.x) <= window
        return ScaledDensity(x=self.x[inside], g=self.g[inside], spacing=self.spacing)


class QGaussianFit(BaseModel):
    """
    Fitted kernel amplitude * exp_q(-beta x^2).

    Attributes:
        param: Deformation parameter of the kernel
        beta: Quadratic coefficient
        amplitude: Value at x = 0
        sup_error: Largest deviation from the data on the window
        window: Half-width of the fitting window
        points: Number of positive data points used by the regression
    """
    model_config = ConfigDict(frozen=True)

    param: DeformationParameter
    beta: float = Field(..., gt=0.0)
    amplitude: float = Field(..., gt=0.0)
    sup_error: float = Field(..., ge=0.0)
    window: float = Field(..., gt=0.0)
    points: int = Field(..., ge=0)


class CollapseSeries(BaseModel):
    """Scaled density and fit at one n."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    density: ScaledDensity
    fit: QGaussianFit


class CollapseReport(BaseModel):
    """
    Density collapse across several n.

    Attributes:
        param: Deformation parameter
        r: Success parameter
        window: Comparison window
        series: One entry per n, increasing
        sup_distance: Largest sup-distance between consecutive densities, relative to the peak
        beta_spread: (max beta - min beta) / min beta
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    param: DeformationParameter
    r: float
    window: float
    series: List[CollapseSeries]
    sup_distance: float
    beta_spread: float
