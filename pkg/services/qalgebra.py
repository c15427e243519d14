"""
Deformed elementary functions.

Every function accepts a scalar or a numpy array and returns a float for
scalar input. All powers x**a go through `power`/`power_m1` so the library
shares one kernel.
"""
from typing import Union

import numpy as np

from exceptions import DomainError
from schemas.deformation import DeformationParameter

ArrayLike = Union[float, np.ndarray]


def _unwrap(value: np.ndarray) -> ArrayLike:
    if np.ndim(value) == 0:
        return float(value)
    return value


def power(x: ArrayLike, exponent: float) -> ArrayLike:
    """
    Return x**exponent as exp(exponent * ln x) for x >= 0.

    0**exponent is 0 for a positive exponent.
    """
    arr = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return _unwrap(np.exp(exponent * np.log(arr)))


def power_m1(x: ArrayLike, exponent: float) -> ArrayLike:
    """Return x**exponent - 1 without cancellation near exponent * ln x = 0."""
    arr = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return _unwrap(np.expm1(exponent * np.log(arr)))


def q_ln(param: DeformationParameter, x: ArrayLike) -> ArrayLike:
    """
    q-logarithm (x**(1 - q) - 1) / (1 - q).

    Args:
        param: Deformation parameter
        x: Positive argument(s)

    Returns:
        ln x in the classical band, the deformed logarithm otherwise

    Raises:
        DomainError: If any x <= 0
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(arr > 0.0):
        raise DomainError("q-logarithm needs x > 0", {"q": param.q})
    if param.is_classical:
        return _unwrap(np.log(arr))
    e = param.one_minus_q
    return _unwrap(np.asarray(power_m1(arr, e)) / e)


def q_exp(param: DeformationParameter, x: ArrayLike) -> ArrayLike:
    """
    q-exponential [1 + (1 - q) x]**(1 / (1 - q)).

    Below the boundary 1 + (1 - q) x <= 0 the value is 0 for q < 1; for
    q > 1 the power diverges there and a DomainError is raised.

    Args:
        param: Deformation parameter
        x: Argument(s)

    Returns:
        Nonnegative value(s)
    """
    arr = np.asarray(x, dtype=float)
    if param.is_classical:
        with np.errstate(over="ignore"):
            return _unwrap(np.exp(arr))
    e = param.one_minus_q
    base = e * arr
    inside = base > -1.0
    if param.q > 1.0 and not np.all(inside):
        raise DomainError("q-exponential diverges at 1 + (1 - q) x <= 0 for q > 1", {"q": param.q})
    with np.errstate(over="ignore"):
        value = np.exp(np.log1p(np.where(inside, base, 0.0)) / e)
    return _unwrap(np.where(inside, value, 0.0))


def q_product(param: DeformationParameter, x: ArrayLike, y: ArrayLike) -> ArrayLike:
    """
    q-product [x**(1-q) + y**(1-q) - 1]**(1 / (1 - q)).

    Computed as exp_q(ln_q x + ln_q y), which is the same expression.

    Raises:
        DomainError: If x or y <= 0, or x**(1-q) + y**(1-q) - 1 <= 0
    """
    lx = np.asarray(q_ln(param, x))
    ly = np.asarray(q_ln(param, y))
    if param.is_classical:
        return _unwrap(np.asarray(x, dtype=float) * np.asarray(y, dtype=float))
    # x**(1-q) + y**(1-q) - 1 == 1 + (1 - q)(ln_q x + ln_q y)
    if not np.all(1.0 + param.one_minus_q * (lx + ly) > 0.0):
        raise DomainError("q-product needs x**(1-q) + y**(1-q) - 1 > 0", {"q": param.q})
    return q_exp(param, lx + ly)
