"""
Generalized (q-deformed) binomial distribution built in the q-log domain.
"""
import logging
import math
from typing import Tuple

import numpy as np
from scipy import optimize, special

from config import BISECTION_MAX_ITERATIONS, BISECTION_RTOL, BRACKET_MAX_EXPANSIONS
from exceptions import BoundaryError, ConstraintError, DomainError, NumericFailure, RangeError
from schemas.combinatorics import QFactorialTable
from schemas.deformation import DeformationParameter
from schemas.distribution import (
    ExactNormalization,
    NormalizationMode,
    QBinomialPmf,
    QBinomialSpec,
    ShiftNormalization,
)
from services.qalgebra import power, q_exp, q_ln
from services.qcombinatorics import q_ln_binomial_coeff, q_ln_binomial_coeffs

logger = logging.getLogger(__name__)


def _check_table(spec: QBinomialSpec, table: QFactorialTable) -> None:
    if table.param != spec.param:
        raise ConstraintError("table was built for another q", {"q": spec.param.q, "table_q": table.param.q})
    if table.max_n < spec.n:
        raise RangeError("factorial table does not cover n", {"n": spec.n, "max_n": table.max_n})


def _success_terms(spec: QBinomialSpec, k: np.ndarray) -> np.ndarray:
    # (k^(2-q) ln_(2-q) r + (n-k)^(2-q) ln_(2-q)(1-r)) / (2-q); 0^(2-q) = 0 at the ends
    dual = spec.param.dual()
    a = dual.q
    log_r = q_ln(dual, spec.r)
    log_s = q_ln(dual, 1.0 - spec.r)
    return (np.asarray(power(k, a)) * log_r + np.asarray(power(spec.n - k, a)) * log_s) / a


def qlog_weight(spec: QBinomialSpec, table: QFactorialTable, k: int) -> float:
    """
    Unnormalized q-log weight S_k (the q-log of b_q without the ln_q C_q term).

    Args:
        spec: Distribution parameters
        table: Factorial table for spec.param covering spec.n
        k: Number of successes, 0 <= k <= n

    Returns:
        S_k
    """
    _check_table(spec, table)
    if not 0 <= k <= spec.n:
        raise RangeError(f"k={k} outside 0..{spec.n}", {"n": spec.n, "k": k})
    return q_ln_binomial_coeff(table, spec.n, k) + float(_success_terms(spec, np.asarray(float(k))))


def qlog_weights(spec: QBinomialSpec, table: QFactorialTable) -> np.ndarray:
    """Vectorized qlog_weight for k = 0..n."""
    _check_table(spec, table)
    k = np.arange(spec.n + 1, dtype=float)
    return q_ln_binomial_coeffs(table, spec.n) + _success_terms(spec, k)


def _mass(param: DeformationParameter, weights: np.ndarray, t: float) -> float:
    return float(np.sum(q_exp(param, weights + t)))


def solve_normalizer(param: DeformationParameter, weights: np.ndarray) -> ExactNormalization:
    """
    Find t = ln_q C_q with sum_k exp_q(S_k + t) = 1.

    The mass is nondecreasing in t, so bracketing followed by bisection finds
    the unique root. The upper end -S_max + 1 keeps every argument at most 1,
    inside the domain of exp_q for all q in (0, 2).

    Raises:
        NumericFailure: If no lower bracket is found within BRACKET_MAX_EXPANSIONS
            expansions, or bisection does not converge within
            BISECTION_MAX_ITERATIONS steps
    """
    s_max = float(np.max(weights))
    # at hi the peak term alone is exp_q(1) > 1
    hi = -s_max + 1.0
    lo = -abs(s_max) - 1.0
    expansions = 0
    # push lo down geometrically until the mass drops below one
    while _mass(param, weights, lo) >= 1.0:
        if expansions >= BRACKET_MAX_EXPANSIONS:
            raise NumericFailure(
                "could not bracket ln_q C_q",
                {"lo": lo, "hi": hi, "expansions": expansions},
            )
        lo = hi - 2.0 * (hi - lo)
        expansions += 1
    # mass - 1 is negative at lo and positive at hi
    t, result = optimize.bisect(
        lambda s: _mass(param, weights, s) - 1.0,
        lo,
        hi,
        xtol=BISECTION_RTOL,
        rtol=BISECTION_RTOL,
        maxiter=BISECTION_MAX_ITERATIONS,
        full_output=True,
        disp=False,
    )
    if not result.converged:
        raise NumericFailure(
            "bisection for ln_q C_q did not converge",
            {"lo": lo, "hi": hi, "expansions": expansions, "iterations": result.iterations},
        )
    logger.debug("ln_q C_q=%r after %d expansions, %d bisections", t, expansions, result.iterations)
    return ExactNormalization(t=float(t), expansions=expansions, iterations=result.iterations)


def build_pmf(spec: QBinomialSpec, table: QFactorialTable) -> QBinomialPmf:
    """
    Build the normalized q-binomial distribution.

    ExactCq applies exp_q(S_k + t) with t from `solve_normalizer`; MaxShift
    applies exp_q(S_k - S_max), so the peak weight is exactly 1, and
    normalizes linearly. Both finish with a compensated linear
    renormalization so the probabilities sum to one within 1e-12.

    Args:
        spec: Distribution parameters
        table: Factorial table for spec.param covering spec.n

    Returns:
        QBinomialPmf
    """
    weights = qlog_weights(spec, table)
    param = spec.param
    # offset in the q-log domain: t, or -S_max
    if spec.mode is NormalizationMode.EXACT_CQ:
        meta = solve_normalizer(param, weights)
    else:
        meta = ShiftNormalization(shift=float(np.max(weights)))
    # raw weights; zero past the cutoff when q < 1
    raw = np.asarray(q_exp(param, weights + meta.qlog_offset), dtype=float)
    total = math.fsum(raw)
    if not total > 0.0 or not math.isfinite(total):
        raise NumericFailure("q-binomial weights do not sum to a positive finite mass", {"total": total})
    # linear renormalization (W is 1 up to rounding in ExactCq)
    probs = raw / total
    sigma_q = spec.sigma_q
    grid = (np.arange(spec.n + 1, dtype=float) - spec.n * spec.r) / sigma_q
    for array in (weights, probs, grid):
        array.setflags(write=False)
    return QBinomialPmf(
        spec=spec,
        qlog_weights=weights,
        probs=probs,
        norm_meta=meta,
        raw_mass=total,
        peak_index=int(np.argmax(probs)),
        sigma_q=sigma_q,
        grid=grid,
    )


def peak_probability(pmf: QBinomialPmf) -> float:
    """Return P_n^* = probs[floor(n r)] (the floor index, not the argmax)."""
    return float(pmf.probs[pmf.spec.floor_index])


def qlog_curvature(pmf: QBinomialPmf) -> float:
    """
    Second central difference of the q-log probabilities at floor(n r).

    Estimates -1 / (n^q r (1 - r)). Uses `qlog_probs`, so the value does not
    depend on the normalization mode.

    Raises:
        RangeError: If n < 10
        BoundaryError: If floor(n r) is 0 or n
    """
    if pmf.n < 10:
        raise RangeError("curvature needs n >= 10", {"n": pmf.n})
    m = pmf.spec.floor_index
    if m <= 0 or m >= pmf.n:
        raise BoundaryError("peak index is on the boundary", {"index": m, "n": pmf.n})
    ell = pmf.qlog_probs
    return float((ell[m + 1] - ell[m]) - (ell[m] - ell[m - 1]))


def qlog_probabilities(pmf: QBinomialPmf) -> np.ndarray:
    """
    q-log of the normalized probabilities, continued past the support cutoff.

    probs = raw / W with q_ln(raw) = `qlog_probs`, so pseudo-additivity
    ln_q(A B) = ln_q A + A^(1-q) ln_q B with A = 1 / W gives
    q_ln(p_k) = q_ln(1 / W) + W^(q-1) q_ln(raw_k).
    """
    param = pmf.param
    w = pmf.raw_mass
    return q_ln(param, 1.0 / w) + power(w, -param.one_minus_q) * pmf.qlog_probs


def _tail_index(pmf: QBinomialPmf, x: float) -> int:
    if not 0.0 < x < 1.0:
        raise DomainError("tail threshold x must lie in (0, 1)", {"x": x})
    return int(math.floor(pmf.n * x))


def cumulative_below(pmf: QBinomialPmf, x: float) -> float:
    """Return the compensated sum of probs[k] for k <= floor(n x)."""
    return math.fsum(pmf.probs[:_tail_index(pmf, x) + 1])


def qlog_cumulative_below(pmf: QBinomialPmf, x: float) -> Tuple[float, int]:
    """
    q-log of the lower tail mass P(k <= floor(n x)).

    A positive normal tail mass gives q_ln(cumulative_below) directly. An
    underflowed tail is summed in log space from the q-log probabilities
    (`qlog_probabilities`). Past the compact support of q < 1 the tail is
    exactly zero and the largest continued q-log probability l_M of the tail
    is returned, the lower end of [l_M, l_M + ln_q(K + 1)].

    Returns:
        (value, index of l_M)
    """
    param = pmf.param
    upper = _tail_index(pmf, x)
    tail = math.fsum(pmf.probs[:upper + 1])
    ell = qlog_probabilities(pmf)[:upper + 1]
    j = int(np.argmax(ell))
    if tail >= np.finfo(float).tiny:
        return q_ln(param, tail), j
    if param.is_classical:
        return float(special.logsumexp(ell)), j
    e = param.one_minus_q
    # p_k = base_k^(1/(1-q)) wherever base_k > 0
    base = 1.0 + e * ell
    if not base[j] > 0.0:
        logger.debug("tail below floor(n x)=%d lies past the support cutoff", upper)
        return float(ell[j]), j
    log_tail = float(special.logsumexp(np.log(base[base > 0.0]) / e))
    return float(np.expm1(e * log_tail) / e), j
