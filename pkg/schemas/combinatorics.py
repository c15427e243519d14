import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .deformation import DeformationParameter


class QFactorialTable(BaseModel):
    """
    Prefix sums of q-logarithms of the integers.

    Attributes:
        param: Deformation parameter the table was built for
        max_n: Largest n covered
        prefix: Read-only array with prefix[n] = sum of q_ln(k) for k = 1..n
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    param: DeformationParameter
    max_n: int = Field(..., ge=1)
    prefix: np.ndarray


class StirlingConstant(BaseModel):
    """
    Numerical estimate of the constant term c_q of the refined q-Stirling formula.

    Attributes:
        param: Deformation parameter
        c_q: Estimated constant
        estimation_n: Reference n the estimate was taken at
        residual_bound: Spread between the estimates at n and 2n
        tail_corrected: Whether the Euler-Maclaurin tail was subtracted
    """
    model_config = ConfigDict(frozen=True)

    param: DeformationParameter
    c_q: float
    estimation_n: int = Field(..., ge=1)
    residual_bound: float = Field(..., ge=0.0)
    tail_corrected: bool = True
