"""
Tsallis q-divergence, alpha-divergence and the large-deviation rate function.
"""
import math

import numpy as np

from config import ALPHA_BRANCH_EPS
from exceptions import ConstraintError, DomainError, RangeError, SupportError
from schemas.deformation import DeformationParameter
from schemas.divergence import IndexMap, ProbVector
from services.qalgebra import power_m1


def _pair(p: ProbVector, r: ProbVector):
    if len(p) != len(r):
        raise ConstraintError("probability vectors differ in length", {"len_p": len(p), "len_r": len(r)})
    return p.as_array(), r.as_array()


def _require_support(p: np.ndarray, r: np.ndarray, direction: str) -> None:
    if np.any((p > 0.0) & (r == 0.0)):
        raise SupportError(f"{direction}: reference vanishes where the argument is positive")


def _kl(p: np.ndarray, r: np.ndarray) -> float:
    _require_support(p, r, "KL(p||r)")
    mask = p > 0.0
    return math.fsum(p[mask] * (np.log(p[mask]) - np.log(r[mask])))


def _tsallis_gap(p: np.ndarray, r: np.ndarray, q: float) -> float:
    """
    Return sum_i p_i ln_(2-q)(p_i / r_i) for real q != 1 on the support of p.

    Equal to (1 - sum p_i^q r_i^(1-q)) / (1 - q); the per-term expm1 form keeps
    the result accurate when p is close to r.
    """
    mask = p > 0.0
    pm, rm = p[mask], r[mask]
    with np.errstate(divide="ignore"):
        ratio = pm / rm
    return math.fsum(pm * np.asarray(power_m1(ratio, q - 1.0)) / (q - 1.0))


def q_divergence(param: DeformationParameter, p: ProbVector, r: ProbVector) -> float:
    """
    Tsallis relative entropy D_q(p||r) = (1 - sum p_i^q r_i^(1-q)) / (1 - q).

    Components with p_i = 0 contribute nothing. In the classical band this is
    the Kullback-Leibler divergence.

    Raises:
        ConstraintError: If the vectors differ in length
        SupportError: If p_i > 0 where r_i = 0
    """
    pa, ra = _pair(p, r)
    if param.is_classical:
        return _kl(pa, ra)
    _require_support(pa, ra, "D_q(p||r)")
    return _tsallis_gap(pa, ra, param.q)


def q_from_alpha(alpha: float, validate: bool = False) -> float:
    """Map alpha to q = (1 - alpha) / 2; with validate, require q in (0, 2)."""
    q = (1.0 - alpha) / 2.0
    if validate and not 0.0 < q < 2.0:
        raise RangeError("alpha maps outside q in (0, 2)", {"alpha": alpha, "q": q})
    return q


def alpha_from_q(q: float) -> float:
    """Map q to alpha = 1 - 2 q."""
    return 1.0 - 2.0 * q


def alpha_divergence(alpha: float, p: ProbVector, r: ProbVector) -> float:
    """
    Amari alpha-divergence (4 / (1 - alpha^2)) (1 - sum p_i^((1-alpha)/2) r_i^((1+alpha)/2)).

    Within ALPHA_BRANCH_EPS of alpha = -1 it is KL(p||r), of alpha = 1 it is
    KL(r||p). Elsewhere it equals D_q(p||r) / q with q = (1 - alpha) / 2 and is
    evaluated that way.

    Raises:
        SupportError: When the exponent of the vanishing side is not positive
    """
    pa, ra = _pair(p, r)
    if abs(alpha + 1.0) < ALPHA_BRANCH_EPS:
        return _kl(pa, ra)
    if abs(alpha - 1.0) < ALPHA_BRANCH_EPS:
        return _kl(ra, pa)
    q = q_from_alpha(alpha)
    if q >= 1.0:
        _require_support(pa, ra, "alpha-divergence with alpha < -1")
    if q <= 0.0:
        _require_support(ra, pa, "alpha-divergence with alpha > 1")
        # r carries the support: D^(alpha)(p||r) = D^(-alpha)(r||p)
        return _tsallis_gap(ra, pa, 1.0 - q) / (1.0 - q)
    return _tsallis_gap(pa, ra, q) / q


def rate_function(param: DeformationParameter, x: float, r: float) -> float:
    """
    Large-deviation rate I(x) = D_(2-q)((x, 1-x) || (r, 1-r)) / (2 - q).

    The generalized LDP limit of the scaled q-log tail is -I(x); it is proven
    for 0 < q < 1 and evaluable for all q in (0, 2) as a diagnostic.
    """
    if not 0.0 < x < 1.0:
        raise DomainError("x must lie in (0, 1)", {"x": x})
    if not 0.0 < r < 1.0:
        raise DomainError("r must lie in (0, 1)", {"r": r})
    dual = param.dual()
    return q_divergence(dual, ProbVector.binary(x), ProbVector.binary(r)) / dual.q


def corollary_index_map(alpha: float) -> IndexMap:
    """
    Exponent and divergence index in n^((3+alpha)/2) D^(-2-alpha)(p||r).

    Raises:
        RangeError: If q = (1 - alpha) / 2 falls outside (0, 2)
    """
    q_from_alpha(alpha, validate=True)
    return IndexMap(scaling_exponent=(3.0 + alpha) / 2.0, divergence_index=-2.0 - alpha)


def kl_divergence(p: ProbVector, r: ProbVector) -> float:
    """Kullback-Leibler divergence KL(p||r)."""
    pa, ra = _pair(p, r)
    return _kl(pa, ra)
