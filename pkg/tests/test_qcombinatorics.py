import math

import numpy as np
import pytest
from scipy import special

from exceptions import ConstraintError, DomainError, RangeError
from schemas.divergence import ProbVector
from services.qcombinatorics import (
    binomial_entropy_residual,
    build_factorial_table,
    estimate_c_q,
    q_ln_binomial_coeff,
    q_ln_binomial_coeffs,
    q_ln_factorial,
    q_ln_multinomial_coeff,
    stirling_leading,
    stirling_refined,
    tsallis_entropy,
)
from services.limits import residual_decay_slope
from services.qalgebra import q_exp, q_ln, q_product

from .conftest import param

HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def test_classical_factorial_matches_lgamma(classical):
    table = build_factorial_table(classical, 1000)
    n = np.arange(1001)
    np.testing.assert_allclose(table.prefix, special.gammaln(n + 1.0), rtol=1e-12, atol=1e-15)
    assert q_ln_factorial(table, 170) == pytest.approx(math.lgamma(171), rel=1e-13)


def test_compact_factorial_matches_compensated_sum(compact):
    table = build_factorial_table(compact, 5000)
    for n in (1, 1023, 1024, 1025, 5000):
        expected = math.fsum(2.0 * (math.sqrt(k) - 1.0) for k in range(1, n + 1))
        assert q_ln_factorial(table, n) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_table_is_cached_and_read_only(heavy):
    table = build_factorial_table(heavy, 300)
    assert build_factorial_table(heavy, 300) is table
    with pytest.raises(ValueError):
        table.prefix[3] = 0.0
    with pytest.raises(RangeError):
        q_ln_factorial(table, 301)


def test_binomial_coefficients(classical, heavy):
    table = build_factorial_table(classical, 50)
    for k in range(51):
        assert math.exp(q_ln_binomial_coeff(table, 50, k)) == pytest.approx(math.comb(50, k), rel=1e-11)
    table = build_factorial_table(heavy, 200)
    for k in range(201):
        assert q_ln_binomial_coeff(table, 200, k) == q_ln_binomial_coeff(table, 200, 200 - k)
    vector = q_ln_binomial_coeffs(table, 200)
    assert vector[0] == 0.0 and vector[200] == 0.0
    assert vector[37] == q_ln_binomial_coeff(table, 200, 37)
    with pytest.raises(RangeError):
        q_ln_binomial_coeff(table, 200, 201)


def test_multinomial(compact):
    table = build_factorial_table(compact, 100)
    assert q_ln_multinomial_coeff(table, 100, [100]) == 0.0
    assert q_ln_multinomial_coeff(table, 100, [30, 70]) == pytest.approx(
        q_ln_binomial_coeff(table, 100, 30), abs=1e-12
    )
    with pytest.raises(ConstraintError):
        q_ln_multinomial_coeff(table, 100, [30, 60])
    with pytest.raises(ConstraintError):
        q_ln_multinomial_coeff(table, 100, [-1, 101])


def test_classical_stirling_constant(classical):
    table = build_factorial_table(classical, 4000)
    const = estimate_c_q(table, 2000)
    assert const.c_q == pytest.approx(HALF_LOG_TWO_PI, abs=1e-9)
    assert const.residual_bound < 1e-9
    raw = estimate_c_q(table, 2000, tail_correction=False)
    assert abs(raw.c_q - HALF_LOG_TWO_PI) == pytest.approx(1.0 / 24000.0, rel=1e-3)


def test_stirling_constant_needs_room(classical):
    table = build_factorial_table(classical, 1500)
    with pytest.raises(RangeError):
        estimate_c_q(table, 999)
    with pytest.raises(RangeError):
        estimate_c_q(table, 1000)


@pytest.mark.parametrize("q", [0.5, 1.0])
def test_refined_stirling_error_decays_like_n_to_minus_q(q):
    p = param(q)
    table = build_factorial_table(p, 1_000_000)
    const = estimate_c_q(table, 1000)
    points = []
    for n in (1_000, 10_000, 100_000, 1_000_000):
        exact = q_ln_factorial(table, n)
        points.append((n, abs(exact - stirling_refined(p, n, const))))
        assert abs(exact - stirling_leading(p, n)) > points[-1][1]
    assert residual_decay_slope(points) == pytest.approx(-q, abs=0.1)


def test_heavy_stirling_error_decays(heavy):
    table = build_factorial_table(heavy, 10_000)
    const = estimate_c_q(table, 5000)
    points = [(n, abs(q_ln_factorial(table, n) - stirling_refined(heavy, n, const))) for n in (100, 1_000, 10_000)]
    assert residual_decay_slope(points) == pytest.approx(-1.5, abs=0.2)


def test_refined_rejects_constant_of_other_q(classical, compact):
    const = estimate_c_q(build_factorial_table(classical, 2000), 1000)
    with pytest.raises(ConstraintError):
        stirling_refined(compact, 10, const)


def test_tsallis_entropy(classical, compact):
    fair = ProbVector.of(0.5, 0.5)
    assert tsallis_entropy(classical, fair) == pytest.approx(math.log(2.0), rel=1e-15)
    expected = (1.0 - 2.0 * 0.5 ** 0.5) / (0.5 - 1.0)
    assert tsallis_entropy(compact, fair) == pytest.approx(expected, rel=1e-12)
    assert tsallis_entropy(compact, ProbVector.of(1.0, 0.0)) == 0.0


def test_classical_entropy_residual(classical):
    table = build_factorial_table(classical, 2000)
    residual = binomial_entropy_residual(table, classical, 1000, 500)
    # -(1/k + 1/(n-k) - 1/n) / 12 from the 1/(12 n) Stirling terms
    assert residual == pytest.approx(-2.5e-4, rel=1e-3)
    with pytest.raises(RangeError):
        binomial_entropy_residual(table, classical, 1000, 0)


def test_heavy_entropy_residual_shrinks(heavy):
    table = build_factorial_table(heavy, 100_000)
    small = abs(binomial_entropy_residual(table, heavy, 1_000, 500))
    large = abs(binomial_entropy_residual(table, heavy, 100_000, 50_000))
    assert large < small / 100.0


def test_entropy_residual_rejects_other_table(classical, compact):
    table = build_factorial_table(classical, 2000)
    with pytest.raises(ConstraintError):
        binomial_entropy_residual(table, compact, 1000, 500)


def test_factorial_is_iterated_q_product(compact):
    table = build_factorial_table(compact, 50)
    running = 1.0
    for n in range(2, 51):
        running = q_product(compact, running, float(n))
        assert running == pytest.approx(q_exp(compact, q_ln_factorial(table, n)), rel=1e-9)


def test_iterated_q_product_leaves_the_domain_for_heavy_tails(heavy):
    # q-logs are bounded by 1/(q-1) for q > 1, so the running product cannot be continued
    running = 1.0
    with pytest.raises(DomainError):
        for n in range(2, 51):
            running = q_product(heavy, running, float(n))


@pytest.mark.parametrize("q", [0.5, 1.0])
def test_multinomial_approaches_tsallis_entropy(q):
    p = param(q)
    table = build_factorial_table(p, 100_000)
    weights = (0.2, 0.3, 0.5)
    entropy = tsallis_entropy(p.dual(), ProbVector.of(*weights))
    gaps, reference = [], []
    for n in (1_000, 10_000, 100_000):
        parts = [round(w * n) for w in weights]
        scaled = (2.0 - q) / n ** (2.0 - q) * q_ln_multinomial_coeff(table, n, parts)
        gaps.append((n, abs(entropy - scaled)))
        reference.append((n, q_ln(p, float(n)) / n ** (2.0 - q)))
    assert gaps[-1][1] < gaps[0][1]
    assert residual_decay_slope(gaps) == pytest.approx(residual_decay_slope(reference), abs=0.2)


@pytest.mark.parametrize("q", [0.5, 1.0, 1.5])
def test_stirling_constant_is_stable_under_doubling(q):
    table = build_factorial_table(param(q), 8000)
    first = estimate_c_q(table, 2000)
    second = estimate_c_q(table, 4000)
    assert abs(first.c_q - second.c_q) < 4.0 * first.residual_bound


def test_compact_entropy_residual_halves_over_four_n(compact):
    table = build_factorial_table(compact, 8000)
    const = estimate_c_q(table, 4000)
    coarse = binomial_entropy_residual(table, compact, 1000, 500, const)
    fine = binomial_entropy_residual(table, compact, 4000, 2000, const)
    assert fine / coarse == pytest.approx(0.5, rel=0.3)
