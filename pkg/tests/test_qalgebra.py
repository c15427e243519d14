import math

import numpy as np
import pytest
import hypothesis.strategies as st
from hypothesis import given

from exceptions import DomainError
from schemas.deformation import DeformationParameter, Regime
from services.qalgebra import power, power_m1, q_exp, q_ln, q_product

from .conftest import param


qs = st.floats(min_value=0.05, max_value=1.95)
positives = st.floats(min_value=1e-2, max_value=1e2)
small = st.floats(min_value=-0.5, max_value=0.5)


def test_regimes():
    assert param(0.5).regime is Regime.COMPACT_SUPPORT
    assert param(1.0 + 1e-9).regime is Regime.CLASSICAL_LIMIT
    assert param(1.5).regime is Regime.HEAVY_TAIL
    assert param(0.3).dual().q == pytest.approx(1.7)


def test_parameter_outside_open_interval():
    with pytest.raises(ValueError):
        DeformationParameter(q=2.0)
    with pytest.raises(ValueError):
        DeformationParameter(q=0.0)


def test_known_values(classical, compact, heavy):
    assert q_ln(classical, math.e) == pytest.approx(1.0, rel=1e-15)
    assert q_ln(compact, 4.0) == pytest.approx(2.0, rel=1e-14)
    assert q_ln(heavy, 4.0) == pytest.approx(1.0, rel=1e-14)
    assert q_exp(compact, 2.0) == pytest.approx(4.0, rel=1e-14)
    assert q_exp(classical, 1.0) == pytest.approx(math.e, rel=1e-15)
    assert q_exp(heavy, 1.0) == pytest.approx(4.0, rel=1e-14)
    assert q_ln(compact, 1.0) == 0.0


def test_q_ln_needs_positive_argument(compact):
    with pytest.raises(DomainError):
        q_ln(compact, 0.0)
    with pytest.raises(DomainError):
        q_ln(compact, np.array([1.0, -2.0]))


def test_q_exp_cutoff_and_divergence(compact, heavy):
    assert q_exp(compact, -3.0) == 0.0
    assert q_exp(compact, -2.0) == 0.0
    assert q_exp(heavy, -3.0) == pytest.approx(2.5 ** -2.0, rel=1e-14)
    with pytest.raises(DomainError):
        q_exp(heavy, 2.0)


def test_array_input_keeps_shape(compact):
    x = np.linspace(0.5, 3.0, 7)
    out = q_ln(compact, x)
    assert isinstance(out, np.ndarray)
    assert out.shape == x.shape
    assert isinstance(q_ln(compact, 2.0), float)


def test_power_kernel():
    assert power(0.0, 1.5) == 0.0
    assert power(9.0, 0.5) == pytest.approx(3.0, rel=1e-15)
    assert power_m1(1.0, 0.7) == 0.0
    assert power_m1(1.0 + 1e-12, 1.0) == pytest.approx(1e-12, rel=1e-3)


@given(qs, positives)
def test_exp_inverts_log(q, x):
    p = param(q)
    assert q_exp(p, q_ln(p, x)) == pytest.approx(x, rel=1e-12)


@given(qs, small)
def test_exp_solves_its_ode(q, x):
    # d/dx exp_q(x) = exp_q(x)^q
    p = param(q)
    h = 1e-6
    derivative = (q_exp(p, x + h) - q_exp(p, x - h)) / (2.0 * h)
    assert derivative == pytest.approx(power(q_exp(p, x), q), rel=1e-6)


@pytest.mark.parametrize("x", [0.1, 2.0, 10.0])
def test_classical_band_is_exact(x):
    for offset in (-5e-9, 5e-9):
        assert q_ln(param(1.0 + offset), x) == math.log(x)


@pytest.mark.parametrize("x", [0.1, 2.0, 10.0])
@pytest.mark.parametrize("offset", [-2e-8, 2e-8])
def test_first_order_departure_outside_band(x, offset):
    p = param(1.0 + offset)
    e = p.one_minus_q
    gap = q_ln(p, x) - math.log(x)
    assert gap == pytest.approx(e * math.log(x) ** 2 / 2.0, abs=1e-12)


def test_q_product(classical, compact, heavy):
    assert q_product(classical, 2.0, 3.0) == pytest.approx(6.0, rel=1e-15)
    expected = (math.sqrt(2.0) + math.sqrt(3.0) - 1.0) ** 2
    assert q_product(compact, 2.0, 3.0) == pytest.approx(expected, rel=1e-12)
    expected = (2.0 ** -0.5 + 3.0 ** -0.5 - 1.0) ** -2.0
    assert q_product(heavy, 2.0, 3.0) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(DomainError):
        q_product(heavy, 10.0, 10.0)


@given(qs, positives, positives)
def test_product_turns_into_sum_of_logs(q, x, y):
    p = param(q)
    if 1.0 + p.one_minus_q * (q_ln(p, x) + q_ln(p, y)) <= 1e-3:
        return
    assert q_ln(p, q_product(p, x, y)) == pytest.approx(q_ln(p, x) + q_ln(p, y), rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("offset", [-1.5e-8, 1.5e-8])
def test_no_jump_at_band_edge(offset):
    # 1.5e-8 * ln(2)^2 / 2 is below 4e-9
    assert abs(q_ln(param(1.0 + offset), 2.0) - math.log(2.0)) < 3e-8


def test_random_grid_is_increasing_and_inverted():
    rng = np.random.default_rng(20240611)
    x = np.sort(rng.uniform(0.05, 20.0, size=2000))
    for q in rng.uniform(0.05, 1.95, size=16):
        p = param(float(q))
        logs = np.asarray(q_ln(p, x))
        assert np.all(np.diff(logs) > 0.0)
        np.testing.assert_allclose(q_exp(p, logs), x, rtol=1e-12)


@given(qs, positives, positives)
def test_log_of_product_is_pseudo_additive(q, x, y):
    p = param(q)
    lx, ly = q_ln(p, x), q_ln(p, y)
    expected = lx + ly + p.one_minus_q * lx * ly
    assert q_ln(p, x * y) == pytest.approx(expected, rel=1e-9, abs=1e-9)
    assert q_ln(p, x * y) == pytest.approx(lx + power(x, p.one_minus_q) * ly, rel=1e-9, abs=1e-9)


@given(qs, small, small)
def test_exp_of_shifted_argument_factorizes(q, x, y):
    p = param(q)
    scale = 1.0 + p.one_minus_q * x
    assert q_exp(p, x + y) == pytest.approx(q_exp(p, x) * q_exp(p, y / scale), rel=1e-9)


@given(qs, small)
def test_rescaled_argument_changes_the_index(q, x):
    a = 0.5
    p = param(q)
    rescaled = param(1.0 - a * p.one_minus_q)
    assert q_exp(p, a * x) == pytest.approx(power(q_exp(rescaled, x), a), rel=1e-8)
