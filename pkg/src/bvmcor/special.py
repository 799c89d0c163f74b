r"""Modified Bessel functions of the first kind, integer order.

Everything is built on whole sequences of exponentially scaled values
:math:`\tilde I_m(x) = e^{-x} I_m(x)`, ``m = 0..nmax``:

* ``x < 2``: ascending power series, evaluated per order;
* ``2 <= x <= 1e8``: Miller backward recurrence
  :math:`I_{m-1} = I_{m+1} + (2m/x) I_m` normalised with
  :math:`1 = \tilde I_0 + 2\sum_{m\ge1} \tilde I_m`;
* larger ``x``: Hankel asymptotic expansion.

Forward recurrence in the order is unstable and is never used.
"""

from __future__ import annotations

import math

import numpy as np

_SERIES_CUTOFF = 2.0
_ASYMPTOTIC_CUTOFF = 1e8
_TINY_X = 1e-8
_RESCALE_AT = 1e250


def _check(order, x):
    if order < 0 or int(order) != order:
        raise ValueError(f"order must be a non-negative integer, got {order!r}")
    if not x >= 0:
        raise ValueError(f"x must be non-negative, got {x!r}")


def _log_power_series_ratio(orders, x):
    """log of ``sum_k (x^2/4)^k m! / (k! (k+m)!)`` for each order ``m``.

    The sum is ``I_m(x) / ((x/2)^m / m!)`` and lies in ``[1, e^{x^2/4}]``.
    """
    q = 0.25 * x * x
    m = np.asarray(orders, dtype=float)
    term = np.ones_like(m)
    total = np.ones_like(m)
    k = 0
    while True:
        term = term * q / ((k + 1.0) * (k + 1.0 + m))
        total = total + term
        k += 1
        if np.all(term <= 1e-17 * total):
            break
    return np.log(total)


def _miller_scaled(nmax, x):
    # Start order chosen so the dominant-solution contamination is ~e^{-40}
    # below every requested order and the normalisation tail is negligible.
    start = int(math.sqrt(nmax * nmax + 100.0 * x)) + 40
    start += start % 2
    out = np.zeros(nmax + 1)
    two_over_x = 2.0 / x
    b_next = 0.0
    b = 1e-280
    total = 0.0
    for k in range(start, 0, -1):
        b_prev = b_next + k * two_over_x * b
        b_next, b = b, b_prev
        # b now holds the value at order k-1, b_next at order k
        if k <= nmax:
            out[k] = b_next
        total += 2.0 * b_next
        if b > _RESCALE_AT:
            b *= 1.0 / _RESCALE_AT
            b_next *= 1.0 / _RESCALE_AT
            total *= 1.0 / _RESCALE_AT
            out *= 1.0 / _RESCALE_AT
    out[0] = b
    total += b
    return out / total


def _hankel_scaled(nmax, x):
    out = np.empty(nmax + 1)
    lead = 1.0 / math.sqrt(2.0 * math.pi * x)
    for m in range(nmax + 1):
        mu = 4.0 * m * m
        term = 1.0
        acc = 1.0
        for k in range(1, 60):
            nxt = -term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
            if abs(nxt) >= abs(term):
                break
            term = nxt
            acc += term
            if abs(term) < 1e-17 * abs(acc):
                break
        out[m] = lead * acc
    return out


def bessel_i_scaled_seq(nmax, x):
    """Return ``e^{-x} I_m(x)`` for ``m = 0..nmax`` as a float array."""
    _check(nmax, x)
    nmax = int(nmax)
    x = float(x)
    if x == 0.0:
        out = np.zeros(nmax + 1)
        out[0] = 1.0
        return out
    if x < _SERIES_CUTOFF:
        m = np.arange(nmax + 1)
        with np.errstate(under="ignore"):
            logv = (
                m * (math.log(x) - math.log(2.0))
                - np.array([math.lgamma(k + 1.0) for k in m])
                + _log_power_series_ratio(m, x)
                - x
            )
            return np.exp(logv)
    if x > _ASYMPTOTIC_CUTOFF:
        return _hankel_scaled(nmax, x)
    return _miller_scaled(nmax, x)


def log_scaled_i_over_power_seq(nmax, x):
    r"""Return :math:`\log(e^{-x} I_m(x) / x^m)` for ``m = 0..nmax``.

    Continuous at ``x = 0`` where the value is :math:`-\log(2^m m!)`, the
    leading coefficient of the power series.  Orders whose value underflows
    come back as ``-inf``.
    """
    _check(nmax, x)
    nmax = int(nmax)
    x = float(x)
    m = np.arange(nmax + 1)
    log_lead = -m * math.log(2.0) - np.array([math.lgamma(k + 1.0) for k in m])
    if x < _TINY_X:
        return log_lead - x
    if x < _SERIES_CUTOFF:
        return log_lead + _log_power_series_ratio(m, x) - x
    seq = bessel_i_scaled_seq(nmax, x)
    with np.errstate(divide="ignore"):
        return np.log(seq) - m * math.log(x)


def bessel_i_scaled(order, x):
    """``e^{-x} I_order(x)``; finite for every representable ``x``."""
    _check(order, x)
    return float(bessel_i_scaled_seq(int(order), x)[int(order)])


def bessel_i(order, x):
    """``I_order(x)``.

    Raises
    ------
    OverflowError
        If the unscaled value exceeds the float range (``x`` beyond about 713).
    """
    scaled = bessel_i_scaled(order, x)
    if scaled == 0.0:
        return 0.0
    log_value = math.log(scaled) + x
    if log_value > 709.78:
        raise OverflowError(f"I_{order}({x}) overflows double precision")
    return scaled * math.exp(x)


def bessel_i_over_power(order, x):
    """``I_order(x) / x**order`` with the continuous value ``1/(2^m m!)`` at 0.

    Returns ``inf`` where the quotient is not representable.
    """
    _check(order, x)
    order = int(order)
    if x < _TINY_X:
        if order <= 170:
            return math.ldexp(1.0 / math.factorial(order), -order)
        return math.exp(-order * math.log(2.0) - math.lgamma(order + 1.0))
    log_value = float(log_scaled_i_over_power_seq(order, x)[order]) + x
    if log_value > 709.78:
        return math.inf
    return math.exp(log_value)


def bessel_ratio(x):
    """``A(x) = I_1(x) / I_0(x)``, computed from scaled values only."""
    _check(0, x)
    if x == 0.0:
        return 0.0
    seq = bessel_i_scaled_seq(1, x)
    return float(seq[1] / seq[0])
