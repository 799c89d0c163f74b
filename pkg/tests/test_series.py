import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sp

from bvmcor.exceptions import SeriesCancellationError, SeriesConvergenceError
from bvmcor.params import ModelParams, SeriesControl
from bvmcor.quadrature import oracle_bundle
from bvmcor.series import (
    FOUR_PI_SQ,
    cosine_bundle,
    log_normalizing_constant,
    series_bundle,
    sine_bundle,
)

FIELDS = ("c", "d_k1", "d_k2", "d_assoc", "d_k1k1", "d_k2k2", "d_k1k2", "d_ss")


def unscaled(bundle, name):
    return getattr(bundle, name) * math.exp(bundle.log_scale_exponent)


def test_uniform_constant():
    b = sine_bundle(ModelParams.sine(0, 0, 0))
    assert b.c == pytest.approx(FOUR_PI_SQ, rel=1e-15)
    assert b.d_k1 == 0.0 and b.d_assoc == 0.0
    assert b.d_k1k1 / b.c == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("family", ["sine", "cosine"])
def test_independence_constant(family):
    k1, k2 = 1.3, 4.2
    p = ModelParams(family, k1, k2, 0.0)
    b = series_bundle(p)
    assert unscaled(b, "c") == pytest.approx(FOUR_PI_SQ * sp.iv(0, k1) * sp.iv(0, k2), rel=1e-14)
    assert unscaled(b, "d_k1") == pytest.approx(FOUR_PI_SQ * sp.iv(1, k1) * sp.iv(0, k2), rel=1e-14)
    assert b.d_ss == 0.0


def test_sine_closed_form_terms():
    # direct (lambda^2/(4 k1 k2))^m binom(2m, m) I_m I_m sum
    k1, k2, lam = 2.0, 3.0, 1.7
    m = np.arange(60)
    ref = FOUR_PI_SQ * np.sum(sp.comb(2 * m, m) * (lam**2 / (4 * k1 * k2)) ** m * sp.iv(m, k1) * sp.iv(m, k2))
    assert unscaled(sine_bundle(ModelParams.sine(k1, k2, lam)), "c") == pytest.approx(ref, rel=1e-13)


def test_cosine_closed_form_terms():
    k1, k2, k3 = 2.0, 3.0, -1.5
    m = np.arange(1, 60)
    ref = FOUR_PI_SQ * (sp.iv(0, k1) * sp.iv(0, k2) * sp.iv(0, k3)
                        + 2 * np.sum(sp.iv(m, k1) * sp.iv(m, k2) * sp.iv(m, k3)))
    assert unscaled(cosine_bundle(ModelParams.cosine(k1, k2, k3)), "c") == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("p", [
    ModelParams.sine(2, 3, 1.5),
    ModelParams.sine(0, 1, 0.5),
    ModelParams.sine(1, 0, -3),
    ModelParams.sine(0, 0, 2),
    ModelParams.sine(10, 10, -20),
    ModelParams.cosine(2, 3, 1.5),
    ModelParams.cosine(1, 1, -2),
    ModelParams.cosine(0, 1, 0.7),
    ModelParams.cosine(0, 0, -0.3),
    ModelParams.cosine(10, 10, 20),
])
def test_bundle_matches_quadrature(p):
    s, q = series_bundle(p), oracle_bundle(p)
    for name in FIELDS:
        a, b = getattr(s, name), getattr(q, name)
        assert abs(a - b) <= 1e-10 * s.c, name


@pytest.mark.parametrize("p", [ModelParams.sine(1.5, 2.5, 0.8), ModelParams.cosine(1.5, 2.5, -0.8)])
def test_first_derivatives_by_finite_differences(p):
    h = 1e-5
    b = series_bundle(p)

    def logc(**kw):
        return log_normalizing_constant(ModelParams(p.family, **{**dict(kappa1=p.kappa1, kappa2=p.kappa2, assoc=p.assoc), **kw}))

    for field, name in (("d_k1", "kappa1"), ("d_k2", "kappa2"), ("d_assoc", "assoc")):
        x = getattr(p, name)
        fd = (logc(**{name: x + h}) - logc(**{name: x - h})) / (2 * h)
        assert getattr(b, field) / b.c == pytest.approx(fd, rel=1e-7), field


def test_cosine_sign_convention_by_quadrature():
    # +k3 in the exponent: flipping its sign changes the constant
    pos = cosine_bundle(ModelParams.cosine(1, 2, 1.5))
    neg = cosine_bundle(ModelParams.cosine(1, 2, -1.5))
    assert unscaled(pos, "c") > unscaled(neg, "c")
    assert pos.c == pytest.approx(oracle_bundle(ModelParams.cosine(1, 2, 1.5)).c, rel=1e-12)


def test_swap_symmetry():
    a = series_bundle(ModelParams.sine(1.0, 4.0, 2.0))
    b = series_bundle(ModelParams.sine(4.0, 1.0, 2.0))
    assert a.c == pytest.approx(b.c, rel=1e-14)
    assert a.d_k1 == pytest.approx(b.d_k2, rel=1e-14)
    assert a.d_k1k1 == pytest.approx(b.d_k2k2, rel=1e-14)


def test_means_do_not_change_bundle():
    a = series_bundle(ModelParams.cosine(1.0, 2.0, -1.0))
    b = series_bundle(ModelParams.cosine(1.0, 2.0, -1.0, mu1=2.0, mu2=-1.0))
    assert a == b


def test_non_convergence_raises():
    with pytest.raises(SeriesConvergenceError) as info:
        sine_bundle(ModelParams.sine(50, 50, 90), SeriesControl(max_terms=5))
    assert info.value.terms_used == 5


def test_terms_used_reported():
    b = sine_bundle(ModelParams.sine(1, 1, 0.5))
    assert b.converged and 1 <= b.terms_used < 50


def test_large_parameters_stay_finite():
    b = cosine_bundle(ModelParams.cosine(500, 400, 300))
    assert math.isfinite(b.log_c) and b.c > 0
    b = sine_bundle(ModelParams.sine(800, 800, 700))
    assert math.isfinite(b.log_c)


@pytest.mark.parametrize("args", [(40, 40, -40), (500, 400, -300)])
def test_heavy_cancellation_raises(args):
    with pytest.raises(SeriesCancellationError) as info:
        cosine_bundle(ModelParams.cosine(*args))
    assert info.value.condition > 1e10


def test_moderate_cancellation_accepted():
    # condition ~ e^17.5; quadrature agreement is checked elsewhere
    p = ModelParams.cosine(10, 10, -20)
    s, q = cosine_bundle(p), oracle_bundle(p)
    assert s.d_k1k2 == pytest.approx(q.d_k1k2, rel=1e-8)


def test_tiny_concentrations_finite():
    b = cosine_bundle(ModelParams.cosine(5e-324, 5e-324, 5e-324))
    assert b.c == pytest.approx(FOUR_PI_SQ)
    assert math.isfinite(b.d_ss)


@pytest.mark.parametrize("func, family", [(sine_bundle, "cosine"), (cosine_bundle, "sine")])
def test_family_mismatch(func, family):
    with pytest.raises(ValueError):
        func(ModelParams(family, 1, 1, 1))


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(["sine", "cosine"]),
    st.floats(0, 8), st.floats(0, 8), st.floats(-8, 8),
)
def test_series_vs_quadrature_property(family, k1, k2, a):
    p = ModelParams(family, k1, k2, a)
    try:
        s = series_bundle(p)
    except SeriesCancellationError:
        return
    q = oracle_bundle(p)
    for name in FIELDS:
        assert abs(getattr(s, name) - getattr(q, name)) <= 1e-9 * s.c


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 30), st.floats(0, 30), st.floats(-30, 30))
def test_sine_lambda_flip_leaves_constant(k1, k2, lam):
    a = sine_bundle(ModelParams.sine(k1, k2, lam))
    b = sine_bundle(ModelParams.sine(k1, k2, -lam))
    assert a.c == b.c
    assert a.d_assoc == -b.d_assoc
