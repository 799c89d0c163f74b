"""Trigonometric moments, circular correlations and circular variances.

All quantities for one parameter set come from a single :class:`SeriesBundle`,
so identities such as ``rho_fl == delta * rho_js`` hold to rounding.  Means
``mu1, mu2`` never enter: every moment is taken about the means.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple, Optional

from .exceptions import DegenerateDistributionError
from .params import DEFAULT_CONTROL, Family, ModelParams, SeriesControl
from .series import SeriesBundle, series_bundle

DEGENERATE_TOL = 1e-14


@dataclass(frozen=True)
class TrigMoments:
    """Moments of ``(T, P) = (Theta - mu1, Phi - mu2)``."""

    e_cos_t: float  # E cos T
    e_cos_p: float  # E cos P
    e_cos2_t: float  # E cos^2 T
    e_cos2_p: float  # E cos^2 P
    e_ss: float  # E sin T sin P
    e_cc: float  # E cos T cos P

    def to_dict(self):
        return asdict(self)


class NormalApprox(NamedTuple):
    """Correlation of the approximating bivariate normal.

    ``value`` is ``None`` when the closed form is undefined; ``valid`` says
    whether the parameter condition for the approximation holds.
    """

    value: Optional[float]
    valid: bool


@dataclass(frozen=True)
class CorrelationReport:
    family: Family
    rho_js: float
    rho_fl: float
    var_t: float
    var_p: float
    delta: float
    normal_approx: Optional[float]
    normal_approx_valid: bool
    moments: TrigMoments
    terms_used: int
    converged: bool

    def to_dict(self):
        d = asdict(self)
        d["family"] = self.family.value
        return d


def moments_from_bundle(bundle: SeriesBundle) -> TrigMoments:
    r = bundle.ratios()
    return TrigMoments(
        e_cos_t=r["d_k1"],
        e_cos_p=r["d_k2"],
        e_cos2_t=r["d_k1k1"],
        e_cos2_p=r["d_k2k2"],
        e_ss=r["d_ss"],
        e_cc=r["d_k1k2"],
    )


def trig_moments(params: ModelParams, control: SeriesControl = DEFAULT_CONTROL) -> TrigMoments:
    return moments_from_bundle(series_bundle(params, control))


def _rho_js(m: TrigMoments):
    denom = (1.0 - m.e_cos2_t) * (1.0 - m.e_cos2_p)
    if denom <= DEGENERATE_TOL:
        raise DegenerateDistributionError(
            f"E sin^2 vanishes (product {denom:.3e}); rho_js undefined"
        )
    return m.e_ss / math.sqrt(denom)


def _rho_fl(m: TrigMoments):
    factors = (m.e_cos2_t, 1.0 - m.e_cos2_t, m.e_cos2_p, 1.0 - m.e_cos2_p)
    if min(factors) <= DEGENERATE_TOL:
        raise DegenerateDistributionError(
            f"Fisher-Lee denominator factor vanishes ({min(factors):.3e}); rho_fl undefined"
        )
    return m.e_ss * m.e_cc / math.sqrt(factors[0] * factors[1] * factors[2] * factors[3])


def _delta(m: TrigMoments):
    denom = m.e_cos2_t * m.e_cos2_p
    if denom <= DEGENERATE_TOL:
        raise DegenerateDistributionError("E cos^2 vanishes; delta undefined")
    return m.e_cc / math.sqrt(denom)


def rho_js(params: ModelParams, control: SeriesControl = DEFAULT_CONTROL) -> float:
    """Jammalamadaka-Sarma correlation ``E[sin T sin P] / sqrt(E sin^2 T E sin^2 P)``."""
    return _rho_js(trig_moments(params, control))


def rho_fl(params: ModelParams, control: SeriesControl = DEFAULT_CONTROL) -> float:
    """Fisher-Lee correlation.

    For i.i.d. copies the pairwise expectations factor as
    ``E sin(T1-T2) sin(P1-P2) = 2 E[sin T sin P] E[cos T cos P]`` and
    ``E sin^2(T1-T2) = 2 E[cos^2 T] E[sin^2 T]``.
    """
    return _rho_fl(trig_moments(params, control))


def circular_variance(params: ModelParams, control: SeriesControl = DEFAULT_CONTROL):
    """``(1 - E cos T, 1 - E cos P)``."""
    m = trig_moments(params, control)
    return 1.0 - m.e_cos_t, 1.0 - m.e_cos_p


def normal_approx_rho(params: ModelParams) -> NormalApprox:
    """Correlation of the bivariate normal that approximates a concentrated model.

    Sine: ``lam / sqrt(k1 k2)``, valid when ``lam^2 < k1 k2``.
    Cosine: ``k3 / sqrt((k1 + k3)(k2 + k3))``, valid when
    ``k3 >= -k1 k2 / (k1 + k2)``.  The cosine value is reported whenever the
    product under the root is positive, even if both factors are negative.
    """
    k1, k2, a = params.kappa1, params.kappa2, params.assoc
    if params.family is Family.SINE:
        prod = k1 * k2
        if prod <= 0.0:
            return NormalApprox(None, False)
        return NormalApprox(a / math.sqrt(prod), a * a < prod)
    prod = (k1 + a) * (k2 + a)
    value = a / math.sqrt(prod) if prod > 0.0 else None
    valid = k1 + k2 > 0.0 and a >= -k1 * k2 / (k1 + k2) and value is not None
    return NormalApprox(value, valid)


def report_from_bundle(params: ModelParams, bundle: SeriesBundle) -> CorrelationReport:
    m = moments_from_bundle(bundle)
    approx = normal_approx_rho(params)
    return CorrelationReport(
        family=params.family,
        rho_js=_rho_js(m),
        rho_fl=_rho_fl(m),
        var_t=1.0 - m.e_cos_t,
        var_p=1.0 - m.e_cos_p,
        delta=_delta(m),
        normal_approx=approx.value,
        normal_approx_valid=approx.valid,
        moments=m,
        terms_used=bundle.terms_used,
        converged=bundle.converged,
    )


def correlation_report(params: ModelParams, control: SeriesControl = DEFAULT_CONTROL) -> CorrelationReport:
    return report_from_bundle(params, series_bundle(params, control))


def report_to_text(report: CorrelationReport) -> str:
    """One ``key=value`` pair per line, floats with 17 significant digits."""
    lines = [f"family={report.family.value}"]
    for key in ("rho_js", "rho_fl", "var_t", "var_p", "delta"):
        lines.append(f"{key}={getattr(report, key):.17g}")
    approx = report.normal_approx
    lines.append("normal_approx=" + ("none" if approx is None else f"{approx:.17g}"))
    lines.append(f"normal_approx_valid={str(report.normal_approx_valid).lower()}")
    for key, value in report.moments.to_dict().items():
        lines.append(f"{key}={value:.17g}")
    lines.append(f"terms_used={report.terms_used}")
    lines.append(f"converged={str(report.converged).lower()}")
    return "\n".join(lines) + "\n"
