"""Sample circular statistics and the Monte Carlo replication harness.

The sample Fisher-Lee coefficient is defined as a U-statistic over all pairs,

    sum_{i<j} sin(t_i - t_j) sin(p_i - p_j)
    / sqrt(sum_{i<j} sin^2(t_i - t_j) * sum_{i<j} sin^2(p_i - p_j)),

and is computed here in linear time from the identities

    sum_{i,j} sin(t_i - t_j) sin(p_i - p_j) = (|sum e^{i(t-p)}|^2 - |sum e^{i(t+p)}|^2) / 2
    sum_{i,j} sin^2(t_i - t_j)              = (n^2 - |sum e^{2it}|^2) / 2.

Using the angle sums and differences directly (rather than products of
sines and cosines) makes identical or mirrored coordinates give exactly +1
or -1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import DegenerateDataError, UndefinedMeanError
from .moments import correlation_report
from .params import DEFAULT_CONTROL, ModelParams, SeriesControl
from .sampling import AngleSampleMatrix, SamplerConfig, replicate_rngs, sample_bivariate

DEGENERATE_TOL = 1e-12


class Quantity(str, enum.Enum):
    RHO_JS = "RhoJS"
    RHO_FL = "RhoFL"
    VAR_THETA = "VarTheta"


@dataclass(frozen=True)
class McValidation:
    quantity: Quantity
    analytic: float
    estimate_mean: float
    estimate_se: float
    replicates: int
    sample_size: int
    z_score: float

    def to_dict(self):
        d = asdict(self)
        d["quantity"] = self.quantity.value
        return d


def _angles(x):
    a = np.asarray(x, dtype=float).ravel()
    if a.size == 0:
        raise ValueError("need at least one angle")
    return a


def _resultant(a):
    return float(np.mean(np.cos(a))), float(np.mean(np.sin(a)))


def circular_mean(angles) -> float:
    """``atan2(mean sin, mean cos)`` in ``[-pi, pi)``.

    Raises
    ------
    UndefinedMeanError
        If the mean resultant length is at most 1e-12.
    """
    c, s = _resultant(_angles(angles))
    if math.hypot(c, s) <= DEGENERATE_TOL:
        raise UndefinedMeanError("mean resultant length vanishes; circular mean undefined")
    m = math.atan2(s, c)
    return -math.pi if m >= math.pi else m


def _centre(a):
    # a vanishing resultant leaves the mean undefined; every centre is then
    # equally valid and 0 is used
    try:
        return circular_mean(a)
    except UndefinedMeanError:
        return 0.0


def _split(data, phi):
    if phi is None:
        return _angles(data.theta), _angles(data.phi)
    t, p = _angles(data), _angles(phi)
    if t.size != p.size:
        raise ValueError("theta and phi must have the same length")
    return t, p


def sample_rho_js(data, phi=None) -> float:
    """Sample Jammalamadaka-Sarma correlation about the sample circular means.

    Accepts an :class:`AngleSampleMatrix` or two angle arrays.
    """
    t, p = _split(data, phi)
    if t.size < 2:
        raise ValueError("need at least two pairs")
    st = np.sin(t - _centre(t))
    sp = np.sin(p - _centre(p))
    a, b = np.sum(st * st), np.sum(sp * sp)
    if a * b / (t.size * t.size) <= DEGENERATE_TOL:
        raise DegenerateDataError("sine variance about the mean vanishes; rho_js undefined")
    return float(np.clip(np.sum(st * sp) / math.sqrt(a * b), -1.0, 1.0))


def _sq_modulus(angles):
    return np.sum(np.cos(angles)) ** 2 + np.sum(np.sin(angles)) ** 2


def sample_rho_fl(data, phi=None) -> float:
    """Sample Fisher-Lee correlation in linear time."""
    t, p = _split(data, phi)
    n = t.size
    if n < 2:
        raise ValueError("need at least two pairs")
    n2 = float(n) * n
    num = _sq_modulus(t - p) - _sq_modulus(t + p)
    dt = n2 - _sq_modulus(2.0 * t)
    dp = n2 - _sq_modulus(2.0 * p)
    if dt * dp / (n2 * n2) <= DEGENERATE_TOL:
        raise DegenerateDataError("pairwise sine variance vanishes; rho_fl undefined")
    return float(np.clip(num / math.sqrt(dt * dp), -1.0, 1.0))


def sample_circular_variance(angles) -> float:
    """``1 - R`` with ``R`` the mean resultant length; in ``[0, 1]``."""
    c, s = _resultant(_angles(angles))
    return float(min(1.0, max(0.0, 1.0 - math.hypot(c, s))))


def batch_means_se(values, batches=50):
    """Standard error of the mean of a correlated series by non-overlapping batch means."""
    x = np.asarray(values, dtype=float).ravel()
    size = x.size // batches
    if size < 1:
        raise ValueError("fewer values than batches")
    means = x[: size * batches].reshape(batches, size).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(batches))


def replicate_estimates(params: ModelParams, sample_size: int, replicates: int, seed=0,
                        config: SamplerConfig = SamplerConfig()):
    """Array of shape ``(replicates, 3)``: rho_js, rho_fl and var(theta) per replicate.

    Replicate ``r`` draws from the ``r``-th child of ``SeedSequence(seed)``,
    so results do not depend on evaluation order.
    """
    out = np.empty((replicates, 3))
    for r, rng in enumerate(replicate_rngs(seed, replicates)):
        s = sample_bivariate(params, sample_size, config, rng=rng)
        out[r] = (sample_rho_js(s), sample_rho_fl(s), sample_circular_variance(s.theta))
    return out


def mc_validate(params: ModelParams, sample_size: int, replicates: int, seed=0,
                config: SamplerConfig = SamplerConfig(), control: SeriesControl = DEFAULT_CONTROL):
    """Compare replicate estimates of rho_js, rho_fl and var(theta) with their analytic values.

    ``estimate_se`` is the standard deviation of the single-replicate
    estimates (``ddof=1``), i.e. the standard error of one sample of size
    ``sample_size``, not of the replicate mean.  ``z_score`` uses that SE.

    Returns
    -------
    list of McValidation
        One entry per quantity, in the order RhoJS, RhoFL, VarTheta.
    """
    if replicates < 2:
        raise ValueError("replicates must be at least 2")
    if sample_size < 2:
        raise ValueError("sample_size must be at least 2")
    report = correlation_report(params, control)
    est = replicate_estimates(params, sample_size, replicates, seed, config)
    analytic = (report.rho_js, report.rho_fl, report.var_t)
    rows = []
    for k, q in enumerate(Quantity):
        mean = float(np.mean(est[:, k]))
        se = float(np.std(est[:, k], ddof=1))
        z = (mean - analytic[k]) / se if se > 0 else (0.0 if mean == analytic[k] else math.copysign(math.inf, mean - analytic[k]))
        rows.append(McValidation(q, analytic[k], mean, se, replicates, sample_size, z))
    return rows


__all__ = [
    "AngleSampleMatrix",
    "McValidation",
    "Quantity",
    "batch_means_se",
    "circular_mean",
    "mc_validate",
    "replicate_estimates",
    "sample_circular_variance",
    "sample_rho_fl",
    "sample_rho_js",
]
