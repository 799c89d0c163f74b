import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sp

from bvmcor.special import (
    bessel_i,
    bessel_i_over_power,
    bessel_i_scaled,
    bessel_i_scaled_seq,
    bessel_ratio,
    log_scaled_i_over_power_seq,
)

XS = [1e-12, 1e-6, 0.05, 0.5, 1.0, 1.999, 2.0, 2.5, 7.3, 10.0, 40.0, 123.4, 700.0, 5e3, 2e8]


@pytest.mark.parametrize("x", XS)
def test_scaled_sequence_matches_scipy(x):
    orders = np.arange(41)
    ours = bessel_i_scaled_seq(40, x)
    ref = sp.ive(orders, x)
    # compare where the reference is comfortably representable
    ok = ref > 1e-290
    np.testing.assert_allclose(ours[ok], ref[ok], rtol=2e-13)


@pytest.mark.parametrize("order", [0, 1, 2, 5, 17])
@pytest.mark.parametrize("x", [0.3, 3.0, 30.0, 300.0])
def test_unscaled_matches_scipy(order, x):
    assert bessel_i(order, x) == pytest.approx(sp.iv(order, x), rel=1e-13)


def test_values_at_zero():
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(3, 0.0) == 0.0
    assert bessel_i_scaled(0, 0.0) == 1.0
    assert bessel_ratio(0.0) == 0.0


@pytest.mark.parametrize("m", range(8))
def test_over_power_limit_at_zero(m):
    # I_m(x)/x^m -> 1/(2^m m!)
    assert bessel_i_over_power(m, 0.0) == 1.0 / (2**m * math.factorial(m))


def test_over_power_examples():
    assert bessel_i_over_power(2, 0.0) == 0.125
    assert bessel_i_over_power(1, 1e-9) == pytest.approx(0.5, rel=1e-15)
    assert bessel_i_over_power(3, 4.0) == pytest.approx(sp.iv(3, 4.0) / 64.0, rel=1e-13)


def test_over_power_continuous_across_tiny_cutoff():
    below = bessel_i_over_power(4, 0.99e-8)
    above = bessel_i_over_power(4, 1.01e-8)
    assert above == pytest.approx(below, rel=1e-14)


def test_log_over_power_matches_direct():
    x = 12.5
    ref = np.log(sp.ive(np.arange(31), x)) - np.arange(31) * math.log(x)
    np.testing.assert_allclose(log_scaled_i_over_power_seq(30, x), ref, rtol=1e-13)


def test_overflow_raises():
    with pytest.raises(OverflowError):
        bessel_i(0, 800.0)
    assert math.isfinite(bessel_i_scaled(0, 1e300))
    assert bessel_i_over_power(0, 800.0) == math.inf


@pytest.mark.parametrize("order, x", [(-1, 1.0), (1.5, 1.0), (0, -1.0), (0, float("nan"))])
def test_invalid_arguments(order, x):
    with pytest.raises(ValueError):
        bessel_i_scaled(order, x)


def test_ratio_known_value():
    assert bessel_ratio(2.0) == pytest.approx(sp.i1(2.0) / sp.i0(2.0), rel=1e-15)
    assert bessel_ratio(1e9) == pytest.approx(1.0 - 0.5e-9, rel=1e-15)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-3, max_value=500.0), st.integers(min_value=1, max_value=30))
def test_recurrence(x, m):
    # I_{m-1}(x) - I_{m+1}(x) = (2m/x) I_m(x)
    seq = bessel_i_scaled_seq(m + 1, x)
    lhs = seq[m - 1] - seq[m + 1]
    rhs = 2.0 * m / x * seq[m]
    assert lhs == pytest.approx(rhs, rel=1e-11, abs=1e-300)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.0, max_value=1e6))
def test_ratio_in_unit_interval_and_monotone(x):
    a = bessel_ratio(x)
    assert 0.0 <= a < 1.0 or (x > 1e15 and a <= 1.0)
    assert bessel_ratio(x * 1.5 + 1e-3) >= a


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e4))
def test_normalization_identity(x):
    # 1 = e^{-x} (I_0 + 2 sum_{m>=1} I_m)
    n = int(x + 10 * math.sqrt(x) + 40)
    seq = bessel_i_scaled_seq(n, x)
    assert seq[0] + 2.0 * seq[1:].sum() == pytest.approx(1.0, rel=1e-13)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.0, max_value=1e3), st.integers(min_value=0, max_value=60))
def test_scaled_orders_decrease(x, m):
    seq = bessel_i_scaled_seq(m + 1, x)
    assert seq[m + 1] <= seq[m]
