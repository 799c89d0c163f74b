"""Periodic trapezoid quadrature on the torus ``[-pi, pi)^2``.

For smooth 2*pi-periodic integrands the uniform-grid rule converges
geometrically, so resolution doubling gives a cheap, deterministic and fully
independent check on the Bessel series.  These routines back the test suite
and the ``oracle-check`` command; they carry no stability guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import QuadratureError
from .moments import TrigMoments
from .params import Family, ModelParams
from .series import SeriesBundle

MAX_RESOLUTION = 4096
DEFAULT_RTOL = 1e-10
_ROW_BLOCK_ELEMS = 1 << 21


@dataclass(frozen=True)
class GridSpec:
    """Starting points per axis; doubled until converged."""

    resolution: int = 64

    def __post_init__(self):
        if self.resolution < 8:
            raise ValueError(f"resolution must be at least 8, got {self.resolution}")


def grid_points(resolution):
    """Uniform nodes ``-pi + 2*pi*j/n`` for ``j = 0..n-1``."""
    return -math.pi + (2.0 * math.pi / resolution) * np.arange(resolution)


def _integrals_at(funcs, n):
    """Trapezoid sums of several vectorised ``f(theta, phi)`` at resolution ``n``."""
    t = grid_points(n)
    rows = max(1, _ROW_BLOCK_ELEMS // n)
    totals = np.zeros(len(funcs))
    l1 = np.zeros(len(funcs))
    for start in range(0, n, rows):
        theta = t[start : start + rows, None]
        phi = t[None, :]
        for k, f in enumerate(funcs):
            vals = np.broadcast_to(f(theta, phi), (theta.shape[0], n))
            totals[k] += vals.sum()
            l1[k] += np.abs(vals).sum()
    cell = (2.0 * math.pi / n) ** 2
    return totals * cell, l1 * cell


def _integrate(funcs, grid, rtol=DEFAULT_RTOL, max_resolution=MAX_RESOLUTION):
    n = grid.resolution
    prev, _ = _integrals_at(funcs, n)
    while True:
        n *= 2
        if n > max_resolution:
            raise QuadratureError(
                f"torus quadrature not converged to {rtol:g} at {n // 2} points per axis"
            )
        cur, l1 = _integrals_at(funcs, n)
        # relative to |value| or, for integrals that cancel, to the integral of |f|
        scale = np.maximum(np.abs(cur), l1)
        if np.all(np.abs(cur - prev) <= rtol * scale):
            return cur
        prev = cur


def integrate_torus(f, grid: GridSpec = GridSpec(), rtol=DEFAULT_RTOL):
    """Integral of ``f(theta, phi)`` over the torus.

    ``f`` must accept broadcastable arrays.  Resolution doubles from
    ``grid.resolution`` until two successive values agree to ``rtol``.

    Raises
    ------
    QuadratureError
        If more than 4096 points per axis would be needed.
    """
    return float(_integrate([f], grid, rtol)[0])


def _exponent(params: ModelParams):
    k1, k2, a, m1, m2 = params.kappa1, params.kappa2, params.assoc, params.mu1, params.mu2
    shift = params.envelope_exponent()
    if params.family is Family.SINE:
        def g(theta, phi):
            return (k1 * np.cos(theta - m1) + k2 * np.cos(phi - m2)
                    + a * np.sin(theta - m1) * np.sin(phi - m2) - shift)
    else:
        def g(theta, phi):
            return (k1 * np.cos(theta - m1) + k2 * np.cos(phi - m2)
                    + a * np.cos(theta - m1 - phi + m2) - shift)
    return g


def _weighted(params, factors, grid):
    g = _exponent(params)
    m1, m2 = params.mu1, params.mu2
    funcs = [
        (lambda f: (lambda t, p: f(t - m1, p - m2) * np.exp(g(t, p))))(f)
        for f in factors
    ]
    return _integrate(funcs, grid)


def oracle_scaled_constant(params: ModelParams, grid: GridSpec = GridSpec()):
    """Integral of ``exp(exponent - (k1 + k2 + |assoc|))``; matches ``SeriesBundle.c``."""
    return float(_weighted(params, [lambda t, p: 1.0], grid)[0])


def oracle_constant(params: ModelParams, grid: GridSpec = GridSpec()):
    """Integral of the unnormalized density over the torus."""
    return oracle_scaled_constant(params, grid) * math.exp(params.envelope_exponent())


_BUNDLE_FACTORS = {
    "c": lambda t, p: 1.0,
    "d_k1": lambda t, p: np.cos(t),
    "d_k2": lambda t, p: np.cos(p),
    "d_k1k1": lambda t, p: np.cos(t) ** 2,
    "d_k2k2": lambda t, p: np.cos(p) ** 2,
    "d_k1k2": lambda t, p: np.cos(t) * np.cos(p),
    "d_ss": lambda t, p: np.sin(t) * np.sin(p),
}


def oracle_bundle(params: ModelParams, grid: GridSpec = GridSpec()) -> SeriesBundle:
    """Every ``SeriesBundle`` field as a weighted torus integral.

    Differentiating under the integral sign turns each partial derivative of
    the constant into the integral of the unnormalized density times a
    trigonometric factor: ``cos t`` for ``kappa1``, ``sin t sin p`` for
    ``lambda`` and ``cos(t - p)`` for ``kappa3``, and so on.
    """
    factors = dict(_BUNDLE_FACTORS)
    if params.family is Family.SINE:
        factors["d_assoc"] = _BUNDLE_FACTORS["d_ss"]
    else:
        factors["d_assoc"] = lambda t, p: np.cos(t - p)
    names = list(factors)
    values = dict(zip(names, _weighted(params, [factors[k] for k in names], grid)))
    return SeriesBundle(
        family=params.family,
        terms_used=0,
        converged=True,
        log_scale_exponent=params.envelope_exponent(),
        **{k: float(v) for k, v in values.items()},
    )


@dataclass(frozen=True)
class OracleMoments:
    moments: TrigMoments
    e_sin_p_cos_t: float
    e_sin_t_cos_p: float
    e_sin_t_cos_t: float
    e_sin_p_cos_p: float


def oracle_moments(params: ModelParams, grid: GridSpec = GridSpec()) -> OracleMoments:
    """Trigonometric moments by quadrature, plus the cross moments that vanish by symmetry."""
    factors = [
        lambda t, p: 1.0,
        lambda t, p: np.cos(t),
        lambda t, p: np.cos(p),
        lambda t, p: np.cos(t) ** 2,
        lambda t, p: np.cos(p) ** 2,
        lambda t, p: np.sin(t) * np.sin(p),
        lambda t, p: np.cos(t) * np.cos(p),
        lambda t, p: np.sin(p) * np.cos(t),
        lambda t, p: np.sin(t) * np.cos(p),
        lambda t, p: np.sin(t) * np.cos(t),
        lambda t, p: np.sin(p) * np.cos(p),
    ]
    v = _weighted(params, factors, grid)
    r = v[1:] / v[0]
    return OracleMoments(
        moments=TrigMoments(
            e_cos_t=float(r[0]),
            e_cos_p=float(r[1]),
            e_cos2_t=float(r[2]),
            e_cos2_p=float(r[3]),
            e_ss=float(r[4]),
            e_cc=float(r[5]),
        ),
        e_sin_p_cos_t=float(r[6]),
        e_sin_t_cos_p=float(r[7]),
        e_sin_t_cos_t=float(r[8]),
        e_sin_p_cos_p=float(r[9]),
    )


DISCREPANCY_FLOOR = 1e-6


def _discrepancy(a, b):
    # relative, except that values below the floor are compared on the floor's scale
    return abs(a - b) / max(abs(a), abs(b), DISCREPANCY_FLOOR)


def compare_with_series(params: ModelParams, grid: GridSpec = GridSpec(), control=None):
    """Relative discrepancies between the series and the torus quadrature.

    Covers the scaled constant, every derivative divided by the constant and
    the six trigonometric moments, plus the two cross moments that should
    vanish (reported as absolute values).  Returns a dict of name -> float.
    """
    from .moments import moments_from_bundle
    from .series import series_bundle

    series = series_bundle(params) if control is None else series_bundle(params, control)
    oracle = oracle_bundle(params, grid)
    out = {"c": _discrepancy(series.c, oracle.c)}
    sr, orr = series.ratios(), oracle.ratios()
    for key in sr:
        out[f"{key}/c"] = _discrepancy(sr[key], orr[key])
    sm = moments_from_bundle(series).to_dict()
    om = oracle_moments(params, grid)
    for key, value in om.moments.to_dict().items():
        out[key] = _discrepancy(sm[key], value)
    out["abs_e_sin_p_cos_t"] = abs(om.e_sin_p_cos_t)
    out["abs_e_sin_t_cos_p"] = abs(om.e_sin_t_cos_p)
    return out
