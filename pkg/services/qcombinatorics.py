"""
q-factorials, q-Stirling approximations, q-binomial/multinomial
coefficients in q-log form and Tsallis entropy.
"""
import logging
import math
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from config import C_Q_MIN_REFERENCE, FACTORIAL_CACHE_SIZE, PREFIX_BLOCK
from exceptions import ConstraintError, RangeError
from schemas.combinatorics import QFactorialTable, StirlingConstant
from schemas.deformation import DeformationParameter
from schemas.divergence import ProbVector
from services.qalgebra import power, q_ln

logger = logging.getLogger(__name__)


def _compensated_prefix(terms: np.ndarray) -> np.ndarray:
    """
    Prefix sums with a leading zero.

    Within a block of PREFIX_BLOCK terms a plain cumulative sum is used; block
    totals (each an exactly rounded fsum) are carried in a two-word
    Neumaier accumulator.
    """
    out = np.empty(terms.size + 1, dtype=float)
    out[0] = 0.0
    hi, lo = 0.0, 0.0
    for start in range(0, terms.size, PREFIX_BLOCK):
        chunk = terms[start:start + PREFIX_BLOCK]
        # in-block partial sums on top of the carried total
        out[start + 1:start + 1 + chunk.size] = hi + (lo + np.cumsum(chunk))
        total = math.fsum(chunk)
        # Neumaier step: lo collects what hi + total rounds away
        s = hi + total
        if abs(hi) >= abs(total):
            lo += (hi - s) + total
        else:
            lo += (total - s) + hi
        hi = s
    return out


@lru_cache(maxsize=FACTORIAL_CACHE_SIZE)
def build_factorial_table(param: DeformationParameter, max_n: int) -> QFactorialTable:
    """
    Build the table of ln_q n!_q for n = 0..max_n.

    Tables are immutable and cached per (param, max_n).

    Args:
        param: Deformation parameter
        max_n: Largest n to cover

    Returns:
        QFactorialTable with a read-only prefix array
    """
    if max_n < 1:
        raise RangeError("factorial table needs max_n >= 1", {"max_n": max_n})
    terms = np.asarray(q_ln(param, np.arange(1, max_n + 1, dtype=float)))
    prefix = _compensated_prefix(terms)
    prefix.setflags(write=False)
    logger.debug("built q-factorial table q=%r max_n=%d", param.q, max_n)
    return QFactorialTable(param=param, max_n=max_n, prefix=prefix)


def _check_index(table: QFactorialTable, n: int) -> None:
    if not 0 <= n <= table.max_n:
        raise RangeError(f"n={n} outside the factorial table 0..{table.max_n}", {"n": n, "max_n": table.max_n})


def q_ln_factorial(table: QFactorialTable, n: int) -> float:
    """Return ln_q n!_q, the sum of q_ln(k) for k = 1..n."""
    _check_index(table, n)
    return float(table.prefix[n])


def _stirling_core(param: DeformationParameter, n: float, half: float) -> float:
    a = 2.0 - param.q
    return (n / a + half) * q_ln(param, float(n)) - n / a


def stirling_leading(param: DeformationParameter, n: int) -> float:
    """Leading q-Stirling form (n / (2 - q)) ln_q n - n / (2 - q)."""
    if n < 1:
        raise RangeError("Stirling forms need n >= 1", {"n": n})
    return _stirling_core(param, n, 0.0)


def stirling_refined(param: DeformationParameter, n: int, const: StirlingConstant) -> float:
    """Refined q-Stirling form (n / (2 - q) + 1/2) ln_q n - n / (2 - q) + c_q."""
    if n < 1:
        raise RangeError("Stirling forms need n >= 1", {"n": n})
    if const.param != param:
        raise ConstraintError(
            "Stirling constant was estimated for another q",
            {"q": param.q, "constant_q": const.param.q},
        )
    return _stirling_core(param, n, 0.5) + const.c_q


def _defect(table: QFactorialTable, n: int, tail_correction: bool) -> float:
    param = table.param
    value = float(table.prefix[n]) - _stirling_core(param, n, 0.5)
    if tail_correction:
        q = param.q
        # next two Euler-Maclaurin terms of the sum of ln_q k
        value -= power(float(n), -q) / 12.0 - q * (q + 1.0) * power(float(n), -q - 2.0) / 720.0
    return value


def estimate_c_q(table: QFactorialTable, n_ref: int, tail_correction: bool = True) -> StirlingConstant:
    """
    Estimate c_q from the defect of the refined Stirling form at n_ref.

    With tail_correction the defect's own O(n_ref**-q) decay is removed
    analytically, so the estimate is accurate far beyond the residual of the
    raw defect.

    Args:
        table: Factorial table covering 2 * n_ref
        n_ref: Reference n, at least C_Q_MIN_REFERENCE
        tail_correction: Subtract the Euler-Maclaurin tail of the defect

    Returns:
        StirlingConstant with residual_bound from the spread over n_ref and 2 * n_ref
    """
    if n_ref < C_Q_MIN_REFERENCE:
        raise RangeError(f"n_ref must be at least {C_Q_MIN_REFERENCE}", {"n_ref": n_ref})
    if 2 * n_ref > table.max_n:
        raise RangeError(
            "2 * n_ref exceeds the factorial table",
            {"n_ref": n_ref, "max_n": table.max_n},
        )
    c_ref = _defect(table, n_ref, tail_correction)
    c_double = _defect(table, 2 * n_ref, tail_correction)
    rounding = 8.0 * np.finfo(float).eps * max(abs(float(table.prefix[2 * n_ref])), 1.0)
    bound = max(abs(c_ref - c_double), rounding)
    logger.debug("c_q estimate q=%r n_ref=%d c=%r bound=%r", table.param.q, n_ref, c_ref, bound)
    return StirlingConstant(
        param=table.param,
        c_q=c_ref,
        estimation_n=n_ref,
        residual_bound=bound,
        tail_corrected=tail_correction,
    )


def q_ln_binomial_coeff(table: QFactorialTable, n: int, k: int) -> float:
    """
    Return ln_q of the q-binomial coefficient, prefix[n] - (prefix[k] + prefix[n - k]).

    The two lower terms are added first so the value is exactly symmetric in k <-> n - k.
    """
    _check_index(table, n)
    if not 0 <= k <= n:
        raise RangeError(f"k={k} outside 0..{n}", {"n": n, "k": k})
    prefix = table.prefix
    return float(prefix[n] - (prefix[k] + prefix[n - k]))


def q_ln_binomial_coeffs(table: QFactorialTable, n: int) -> np.ndarray:
    """Vectorized q_ln_binomial_coeff for k = 0..n."""
    _check_index(table, n)
    prefix = table.prefix
    return prefix[n] - (prefix[:n + 1] + prefix[n::-1])


def q_ln_multinomial_coeff(table: QFactorialTable, n: int, parts: Sequence[int]) -> float:
    """
    Return ln_q of the q-multinomial coefficient, prefix[n] - sum(prefix[part]).

    Raises:
        ConstraintError: If a part is negative or the parts do not sum to n
    """
    _check_index(table, n)
    parts = [int(part) for part in parts]
    if any(part < 0 for part in parts) or sum(parts) != n:
        raise ConstraintError("parts must be nonnegative and sum to n", {"n": n, "parts": parts})
    return float(table.prefix[n] - math.fsum(float(table.prefix[part]) for part in parts))


def tsallis_entropy(param: DeformationParameter, p: ProbVector) -> float:
    """
    Tsallis entropy (1 - sum p_i**q) / (q - 1); Shannon entropy in the classical band.

    Evaluated as sum p_i ln_q(1 / p_i), the same quantity without the
    cancellation of 1 - sum p_i**q near q = 1. Zero components contribute 0.
    """
    arr = p.as_array()
    positive = arr[arr > 0.0]
    return math.fsum(positive * np.asarray(q_ln(param, 1.0 / positive)))


def binomial_entropy_residual(
    table: QFactorialTable,
    param: DeformationParameter,
    n: int,
    k: int,
    const: Optional[StirlingConstant] = None,
) -> float:
    """
    Residual of the entropy expansion of ln_q of the q-binomial coefficient.

    The expansion is -c_q + (ln_q n - ln_q k - ln_q(n - k)) / 2
    + n**(2 - q) / (2 - q) * S_(2-q)(k/n, 1 - k/n); the residual is O(n**-q).

    Args:
        table: Factorial table covering n
        param: Deformation parameter of the table
        n: Number of trials
        k: Index with 1 <= k <= n - 1
        const: Stirling constant; estimated from the table when omitted

    Returns:
        ln_q binomial coefficient minus the expansion
    """
    if param != table.param:
        raise ConstraintError("table was built for another q", {"q": param.q, "table_q": table.param.q})
    if not 1 <= k <= n - 1:
        raise RangeError(f"k={k} outside 1..{n - 1}", {"n": n, "k": k})
    if const is None:
        const = estimate_c_q(table, max(table.max_n // 2, C_Q_MIN_REFERENCE))
    exact = q_ln_binomial_coeff(table, n, k)
    half_log = 0.5 * (q_ln(param, float(n)) - q_ln(param, float(k)) - q_ln(param, float(n - k)))
    a = 2.0 - param.q
    entropy = tsallis_entropy(param.dual(), ProbVector.of(k / n, (n - k) / n))
    expansion = -const.c_q + half_log + power(float(n), a) / a * entropy
    return exact - expansion
