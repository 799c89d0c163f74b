r"""Bessel-series evaluation of the normalizing constants and their derivatives.

Sine model, with :math:`t_m = \binom{2m}{m} 4^{-m}` and :math:`P_n(x) = I_n(x)/x^n`::

    C        = 4pi^2 sum_m t_m lam^{2m} P_m(k1) P_m(k2)
    dC/dk1   = 4pi^2 sum_m t_m lam^{2m} k1 P_{m+1}(k1) P_m(k2)
    dC/dlam  = 4pi^2 sum_m t_m lam^{2m} (2m/lam) P_m(k1) P_m(k2)
    d2C/dk1^2 = 4pi^2 sum_m t_m lam^{2m} [P_{m+1}(k1) + k1^2 P_{m+2}(k1)] P_m(k2)
    d2C/dk1dk2 = 4pi^2 sum_m t_m lam^{2m} k1 k2 P_{m+1}(k1) P_{m+1}(k2)

which is the usual ``(lam^2 / 4 k1 k2)^m I_m(k1) I_m(k2)`` form rewritten so
that ``k1 = 0`` or ``k2 = 0`` needs no special case.

Cosine model: the ``I_0 I_0 I_0 + 2 sum I_m I_m I_m`` expansion and its
termwise derivatives, with ``I_m(k3) = (-1)^m I_m(|k3|)``.  The combination
``dC/dk3 - d2C/dk1dk2`` (``C * E[sin sin]``) is summed directly as
``2pi^2 sum_{m>=1} (2m/k1) I_m(k1) (2m/k2) I_m(k2) I_m(k3)`` rather than by
subtraction, which keeps its sign exact for tiny ``k3``.

Every term is formed from exponentially scaled Bessel values; the common
factor ``exp(k1 + k2 + |assoc|)`` is carried in ``log_scale_exponent``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import SeriesCancellationError, SeriesConvergenceError
from .params import DEFAULT_CONTROL, Family, ModelParams, SeriesControl
from .special import bessel_i_scaled_seq, log_scaled_i_over_power_seq

FOUR_PI_SQ = 4.0 * math.pi * math.pi
# sum|t| / |sum t| above this leaves fewer than ~6 correct digits
CANCELLATION_LIMIT = 1e10


@dataclass(frozen=True)
class SeriesBundle:
    """Normalizing constant and its partial derivatives, all scaled by ``exp(-log_scale_exponent)``.

    ``d_assoc`` is the derivative in ``lambda`` (sine) or ``kappa3`` (cosine).
    ``d_ss`` is ``C * E[sin(T - mu1) sin(P - mu2)]``: equal to ``d_assoc``
    for the sine model and to ``d_assoc - d_k1k2`` for the cosine model.
    """

    family: Family
    c: float
    d_k1: float
    d_k2: float
    d_assoc: float
    d_k1k1: float
    d_k2k2: float
    d_k1k2: float
    d_ss: float
    terms_used: int
    converged: bool
    log_scale_exponent: float

    @property
    def log_c(self):
        """Natural log of the unscaled normalizing constant."""
        return math.log(self.c) + self.log_scale_exponent

    def ratios(self):
        """Each derivative divided by ``c``; the common scale cancels."""
        c = self.c
        return {
            "d_k1": self.d_k1 / c,
            "d_k2": self.d_k2 / c,
            "d_assoc": self.d_assoc / c,
            "d_k1k1": self.d_k1k1 / c,
            "d_k2k2": self.d_k2k2 / c,
            "d_k1k2": self.d_k1k2 / c,
            "d_ss": self.d_ss / c,
        }

    def to_dict(self):
        d = asdict(self)
        d["family"] = self.family.value
        return d


def _truncation_index(terms, rel_tol, consecutive):
    """Index of the last term kept, or ``None`` if the criterion is never met."""
    running = np.cumsum(terms)
    small = np.abs(terms) <= rel_tol * np.abs(running)
    if consecutive > 1:
        # run[j] = number of consecutive True values ending at j
        idx = np.arange(small.size)
        last_false = np.maximum.accumulate(np.where(~small, idx, -1))
        run = idx - last_false
    else:
        run = small.astype(int)
    hits = np.flatnonzero(run >= consecutive)
    return int(hits[0]) if hits.size else None


def _initial_terms(params):
    scale = max(params.kappa1, params.kappa2, abs(params.assoc))
    return 24 + int(2.0 * scale + 4.0 * math.sqrt(scale))


def _sum_series(params, control, build):
    """Grow the term count until every series meets the truncation rule.

    Raises ``SeriesCancellationError`` when a converged series is too badly
    conditioned to trust (the alternating cosine series with strongly
    negative ``kappa3``).
    """
    nterms = min(_initial_terms(params), control.max_terms)
    while True:
        series = build(nterms)
        if not all(np.all(np.isfinite(t)) for t in series.values()):
            raise SeriesConvergenceError(
                f"{params.family.value} series produced non-finite terms "
                f"(kappa1={params.kappa1}, kappa2={params.kappa2}, assoc={params.assoc})",
                terms_used=nterms,
            )
        cut = [_truncation_index(t, control.rel_tol, control.consecutive_small) for t in series.values()]
        if all(j is not None for j in cut):
            last = max(cut)
            sums, worst = {}, 1.0
            for name, terms in series.items():
                kept = terms[: last + 1]
                sums[name] = float(np.sum(kept))
                mass = float(np.sum(np.abs(kept)))
                if mass > 0.0:
                    worst = max(worst, mass / abs(sums[name]) if sums[name] else math.inf)
            if worst > CANCELLATION_LIMIT:
                raise SeriesCancellationError(
                    f"{params.family.value} series cancels too heavily (condition {worst:.3g}) "
                    f"for kappa1={params.kappa1}, kappa2={params.kappa2}, assoc={params.assoc}",
                    terms_used=last + 1,
                    condition=worst,
                )
            return sums, last + 1
        if nterms >= control.max_terms:
            raise SeriesConvergenceError(
                f"{params.family.value} series not converged after {nterms} terms "
                f"(kappa1={params.kappa1}, kappa2={params.kappa2}, assoc={params.assoc})",
                terms_used=nterms,
            )
        nterms = min(2 * nterms, control.max_terms)


def _sine_terms(params, nterms):
    k1, k2, lam = params.kappa1, params.kappa2, params.assoc
    m = np.arange(nterms)
    a = log_scaled_i_over_power_seq(nterms + 1, k1)
    b = log_scaled_i_over_power_seq(nterms + 1, k2)
    if lam == 0.0:
        weight = np.full(nterms, -np.inf)
        weight[0] = 0.0
    else:
        # log t_m via t_{m+1} = t_m (2m+1)/(2m+2)
        log_t = np.concatenate(([0.0], np.cumsum(np.log((2.0 * m[:-1] + 1.0) / (2.0 * m[:-1] + 2.0)))))
        weight = log_t + 2.0 * m * math.log(abs(lam)) - abs(lam)
    with np.errstate(under="ignore", invalid="ignore"):
        base = np.exp(weight + a[m] + b[m])
        up1 = np.exp(weight + a[m + 1] + b[m])
        up2 = np.exp(weight + a[m] + b[m + 1])
        up11 = np.exp(weight + a[m + 1] + b[m + 1])
        if lam == 0.0:
            d_assoc = np.zeros(nterms)
        else:
            # (2m/lam) * base, with the division folded into the log
            expo = weight + a[m] + b[m] + np.log(np.maximum(2.0 * m, 1.0)) - math.log(abs(lam))
            expo[0] = -np.inf
            d_assoc = math.copysign(1.0, lam) * np.exp(expo)
        return {
            "c": base,
            "d_k1": k1 * up1,
            "d_k2": k2 * up2,
            "d_assoc": d_assoc,
            "d_k1k1": up1 + k1 * k1 * np.exp(weight + a[m + 2] + b[m]),
            "d_k2k2": up2 + k2 * k2 * np.exp(weight + a[m] + b[m + 2]),
            "d_k1k2": k1 * k2 * up11,
        }


def _diff_seq(seq, x):
    """``e^{-x}(I_{m-1}(x) - I_{m+1}(x)) = e^{-x} (2m/x) I_m(x)`` for ``m = 0..len-1``."""
    m = np.arange(seq.size)
    if x >= 1.0:
        return (2.0 * m / x) * seq
    out = np.zeros(seq.size)
    if x == 0.0:
        if seq.size > 1:
            out[1] = 1.0
        return out
    # 2m x^{m-1} (e^{-x} I_m / x^m) keeps tiny x free of overflow
    log_ratio = log_scaled_i_over_power_seq(seq.size - 1, x)
    with np.errstate(under="ignore"):
        out[1:] = 2.0 * m[1:] * np.exp((m[1:] - 1) * math.log(x) + log_ratio[1:])
    return out


def _cosine_terms(params, nterms):
    k1, k2, k3 = params.kappa1, params.kappa2, params.assoc
    m = np.arange(nterms)
    i1 = bessel_i_scaled_seq(nterms + 1, k1)
    i2 = bessel_i_scaled_seq(nterms + 1, k2)
    i3 = bessel_i_scaled_seq(nterms + 1, abs(k3))
    if k3 < 0:
        i3 = i3 * np.where(np.arange(nterms + 2) % 2 == 0, 1.0, -1.0)
    # I_{m-1} and I_{m-2} with negative orders folded (I_{-n} = I_n)
    lo1 = np.abs(m - 1)
    lo2 = np.abs(m - 2)

    def plus_minus(seq):
        return seq[m + 1] + seq[lo1]

    pm1, pm2, pm3 = plus_minus(i1), plus_minus(i2), plus_minus(i3)
    # the m = 0 entries of the generic expressions double count; fix them up below
    c = 2.0 * i1[m] * i2[m] * i3[m]
    c[0] = i1[0] * i2[0] * i3[0]
    d_k1 = i2[m] * i3[m] * pm1
    d_k1[0] = i1[1] * i2[0] * i3[0]
    d_k2 = i1[m] * i3[m] * pm2
    d_k2[0] = i1[0] * i2[1] * i3[0]
    d_assoc = i1[m] * i2[m] * pm3
    d_assoc[0] = i1[0] * i2[0] * i3[1]
    d_k1k1 = 0.5 * i2[m] * i3[m] * (i1[lo2] + 2.0 * i1[m] + i1[m + 2])
    d_k1k1[0] = 0.5 * i2[0] * i3[0] * (i1[0] + i1[2])
    d_k2k2 = 0.5 * i1[m] * i3[m] * (i2[lo2] + 2.0 * i2[m] + i2[m + 2])
    d_k2k2[0] = 0.5 * i1[0] * i3[0] * (i2[0] + i2[2])
    d_k1k2 = 0.5 * i3[m] * pm1 * pm2
    d_k1k2[0] = i1[1] * i2[1] * i3[0]
    d_ss = 0.5 * _diff_seq(i1[:nterms], k1) * _diff_seq(i2[:nterms], k2) * i3[m]
    d_ss[0] = 0.0
    return {
        "c": c,
        "d_k1": d_k1,
        "d_k2": d_k2,
        "d_assoc": d_assoc,
        "d_k1k1": d_k1k1,
        "d_k2k2": d_k2k2,
        "d_k1k2": d_k1k2,
        "d_ss": d_ss,
    }


def _bundle(params, sums, terms_used):
    return SeriesBundle(
        family=params.family,
        c=FOUR_PI_SQ * sums["c"],
        d_k1=FOUR_PI_SQ * sums["d_k1"],
        d_k2=FOUR_PI_SQ * sums["d_k2"],
        d_assoc=FOUR_PI_SQ * sums["d_assoc"],
        d_k1k1=FOUR_PI_SQ * sums["d_k1k1"],
        d_k2k2=FOUR_PI_SQ * sums["d_k2k2"],
        d_k1k2=FOUR_PI_SQ * sums["d_k1k2"],
        d_ss=FOUR_PI_SQ * sums.get("d_ss", sums["d_assoc"]),
        terms_used=terms_used,
        converged=True,
        log_scale_exponent=params.envelope_exponent(),
    )


def sine_bundle(params: ModelParams, control: SeriesControl = DEFAULT_CONTROL) -> SeriesBundle:
    """Sine-model normalizing constant and its six partial derivatives.

    Raises
    ------
    SeriesConvergenceError
        If the terms do not become negligible within ``control.max_terms``.
    """
    if params.family is not Family.SINE:
        raise ValueError("sine_bundle requires a sine-model parameter set")
    sums, used = _sum_series(params, control, lambda n: _sine_terms(params, n))
    return _bundle(params, sums, used)


def cosine_bundle(params: ModelParams, control: SeriesControl = DEFAULT_CONTROL) -> SeriesBundle:
    """Cosine-model normalizing constant and its partial derivatives."""
    if params.family is not Family.COSINE:
        raise ValueError("cosine_bundle requires a cosine-model parameter set")
    sums, used = _sum_series(params, control, lambda n: _cosine_terms(params, n))
    return _bundle(params, sums, used)


def series_bundle(params: ModelParams, control: SeriesControl = DEFAULT_CONTROL) -> SeriesBundle:
    if params.family is Family.SINE:
        return sine_bundle(params, control)
    return cosine_bundle(params, control)


def log_normalizing_constant(params: ModelParams, control: SeriesControl = DEFAULT_CONTROL) -> float:
    """``log C`` where ``C`` is the integral of the unnormalized density over the torus."""
    return series_bundle(params, control).log_c
