"""Random generation and density evaluation for the sine and cosine models.

Both full conditionals are univariate von Mises:

* sine, ``Phi | Theta = theta``: concentration
  ``sqrt(k2^2 + lam^2 sin^2(theta - mu1))``, mean
  ``mu2 + atan2(lam sin(theta - mu1), k2)``;
* cosine, ``Phi | Theta = theta``: concentration
  ``sqrt(k2^2 + k3^2 + 2 k2 k3 cos(theta - mu1))``, mean
  ``mu2 + atan2(k3 sin(theta - mu1), k2 + k3 cos(theta - mu1))``.

``Theta | Phi`` follows by swapping the coordinate roles.  Univariate draws
use the Best-Fisher wrapped-Cauchy envelope.  All randomness comes from
numpy's PCG64 bit generator; Monte Carlo replicates get independent child
streams from ``numpy.random.SeedSequence.spawn``.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import NamedTuple

import numba
import numpy as np

from .exceptions import EnvelopeError
from .params import DEFAULT_CONTROL, Family, ModelParams, SeriesControl, wrap_angle
from .quadrature import grid_points
from .series import log_normalizing_constant

RNG_NAME = "numpy.random.PCG64"
REJECTION_MAX_EXPONENT = 12.0
_UNIFORM_KAPPA = 1e-10


class Method(str, enum.Enum):
    GIBBS = "gibbs"
    REJECTION = "rejection"


@dataclass(frozen=True)
class SamplerConfig:
    """Sampler settings.

    ``reflect`` adds, after each Gibbs sweep, a move that reflects the pair
    through the means with probability 1/2.  The density is invariant under
    that reflection, so the move is exact; it lets the chain cross between the
    two symmetric modes of bimodal models, which plain Gibbs updates cannot do
    in any reasonable time once the modes are well separated.
    """

    seed: int = 0
    method: Method = Method.GIBBS
    burn_in: int = 1000
    thin: int = 1
    reflect: bool = True

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.burn_in < 0:
            raise ValueError("burn_in must be non-negative")
        if self.thin < 1:
            raise ValueError("thin must be at least 1")

    def to_dict(self):
        d = asdict(self)
        d["method"] = self.method.value
        d["rng"] = RNG_NAME
        return d


@dataclass(frozen=True)
class AngleSampleMatrix:
    theta: np.ndarray
    phi: np.ndarray
    params: ModelParams
    config: SamplerConfig
    accepted: int = 0
    proposed: int = 0
    provenance: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.theta.size

    @property
    def acceptance_rate(self):
        return self.accepted / self.proposed if self.proposed else float("nan")

    def to_provenance(self):
        out = {"params": self.params.to_dict(), "sampler": self.config.to_dict(), "n": self.n}
        if self.config.method is Method.REJECTION:
            out["accepted"] = self.accepted
            out["proposed"] = self.proposed
        out.update(self.provenance)
        return out


class ConditionalSpec(NamedTuple):
    kappa: float
    mu: float


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def replicate_rngs(seed, count):
    """Independent generators, one per replicate, fixed by ``(seed, index)``."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.PCG64(s)) for s in children]


# --- compiled kernels -------------------------------------------------------

@numba.njit(cache=True)
def _wrap(x):
    if -math.pi <= x < math.pi:
        return x
    two_pi = 2.0 * math.pi
    w = (x + math.pi) % two_pi
    if w < 0.0:
        w += two_pi
    w -= math.pi
    if w >= math.pi:
        w -= two_pi
    return w


@numba.njit(cache=True)
def _vm_draw(rng, mu, kappa):
    if kappa < _UNIFORM_KAPPA:
        return _wrap(-math.pi + 2.0 * math.pi * rng.random())
    tau = 1.0 + math.sqrt(1.0 + 4.0 * kappa * kappa)
    # 1 - rho written without cancellation: tau - 2 kappa = 1 + 1/(sqrt(1+4k^2) + 2k)
    one_minus_rho = (math.sqrt(2.0 * tau) - 1.0 - 1.0 / (tau - 1.0 + 2.0 * kappa)) / (2.0 * kappa)
    rho = 1.0 - one_minus_rho
    r = 1.0 + one_minus_rho * one_minus_rho / (2.0 * rho)
    while True:
        u1 = rng.random()
        u2 = rng.random()
        z = math.cos(math.pi * u1)
        f = (1.0 + r * z) / (r + z)
        c = kappa * (r - f)
        if c * (2.0 - c) - u2 > 0.0 or math.log(c / u2) + 1.0 - c >= 0.0:
            break
    if f > 1.0:
        f = 1.0
    elif f < -1.0:
        f = -1.0
    angle = math.acos(f)
    if rng.random() < 0.5:
        angle = -angle
    return _wrap(mu + angle)


@numba.njit(cache=True)
def _vm_many(rng, mu, kappa, n):
    out = np.empty(n)
    for i in range(n):
        out[i] = _vm_draw(rng, mu, kappa)
    return out


@numba.njit(cache=True)
def _conditional(is_sine, k_self, k_other, assoc, mu_self, given_offset):
    # parameters of the coordinate with concentration k_self given the other
    # coordinate at offset `given_offset` from its mean
    if is_sine:
        s = assoc * math.sin(given_offset)
        return math.sqrt(k_self * k_self + s * s), _wrap(mu_self + math.atan2(s, k_self))
    a = k_self + assoc * math.cos(given_offset)
    b = assoc * math.sin(given_offset)
    return math.sqrt(a * a + b * b), _wrap(mu_self + math.atan2(b, a))


@numba.njit(cache=True)
def _gibbs(rng, is_sine, k1, k2, assoc, mu1, mu2, n, burn_in, thin, reflect):
    theta = np.empty(n)
    phi = np.empty(n)
    t = mu1
    p = mu2
    total = burn_in + n * thin
    kept = 0
    for it in range(total):
        kc, mc = _conditional(is_sine, k1, k2, assoc, mu1, p - mu2)
        t = _vm_draw(rng, mc, kc)
        kc, mc = _conditional(is_sine, k2, k1, assoc, mu2, t - mu1)
        p = _vm_draw(rng, mc, kc)
        if reflect and rng.random() < 0.5:
            t = _wrap(2.0 * mu1 - t)
            p = _wrap(2.0 * mu2 - p)
        if it >= burn_in and (it - burn_in) % thin == thin - 1:
            theta[kept] = t
            phi[kept] = p
            kept += 1
    return theta, phi


# --- public API -------------------------------------------------------------

def sample_univariate_vm(mu, kappa, n, seed=0):
    """``n`` i.i.d. von Mises draws wrapped to ``[-pi, pi)``.

    ``seed`` may be an integer or a ``numpy.random.Generator``.
    """
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    return _vm_many(rng, float(mu), float(kappa), int(n))


def _require(params, family):
    if params.family is not family:
        raise ValueError(f"expected a {family.value}-model parameter set")


def sine_conditional(params: ModelParams, theta: float) -> ConditionalSpec:
    """Von Mises parameters of ``Phi`` given ``Theta = theta`` in the sine model."""
    _require(params, Family.SINE)
    k, m = _conditional(True, params.kappa2, params.kappa1, params.assoc, params.mu2, theta - params.mu1)
    return ConditionalSpec(k, m)


def cosine_conditional(params: ModelParams, theta: float) -> ConditionalSpec:
    """Von Mises parameters of ``Phi`` given ``Theta = theta`` in the cosine model."""
    _require(params, Family.COSINE)
    k, m = _conditional(False, params.kappa2, params.kappa1, params.assoc, params.mu2, theta - params.mu1)
    return ConditionalSpec(k, m)


def conditional(params: ModelParams, theta: float) -> ConditionalSpec:
    if params.family is Family.SINE:
        return sine_conditional(params, theta)
    return cosine_conditional(params, theta)


def _gibbs_sample(params, n, config, rng):
    return _gibbs(
        rng,
        params.family is Family.SINE,
        params.kappa1,
        params.kappa2,
        params.assoc,
        params.mu1,
        params.mu2,
        int(n),
        int(config.burn_in),
        int(config.thin),
        bool(config.reflect),
    )


def sample_bivariate(params: ModelParams, n: int, config: SamplerConfig = SamplerConfig(), rng=None):
    """Draw ``n`` angle pairs.

    The Gibbs chain starts at ``(mu1, mu2)``, discards ``burn_in`` sweeps and
    keeps every ``thin``-th sweep after that.  ``rng`` overrides the generator
    built from ``config.seed`` (used for per-replicate streams).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if config.method is Method.REJECTION:
        return sample_bivariate_rejection(params, n, config.seed, rng=rng)
    rng = make_rng(config.seed) if rng is None else rng
    theta, phi = _gibbs_sample(params, n, config, rng)
    return AngleSampleMatrix(theta, phi, params, config)


def _unnormalized_log(params, theta, phi):
    t = theta - params.mu1
    p = phi - params.mu2
    base = params.kappa1 * np.cos(t) + params.kappa2 * np.cos(p)
    if params.family is Family.SINE:
        return base + params.assoc * np.sin(t) * np.sin(p)
    return base + params.assoc * np.cos(t - p)


def sample_bivariate_rejection(params: ModelParams, n: int, seed=0, rng=None):
    """Exact i.i.d. draws by rejection from the uniform torus.

    The envelope is ``exp(k1 + k2 + |assoc|)``, which bounds the unnormalized
    density; acceptance collapses as that exponent grows, so it is capped.

    Raises
    ------
    EnvelopeError
        If ``k1 + k2 + |assoc| > 12``.
    """
    bound = params.envelope_exponent()
    if bound > REJECTION_MAX_EXPONENT:
        raise EnvelopeError(
            f"rejection sampling needs kappa1 + kappa2 + |assoc| <= {REJECTION_MAX_EXPONENT:g}, got {bound:g}"
        )
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = make_rng(seed) if rng is None else rng
    thetas, phis = [], []
    have = accepted = proposed = 0
    while have < n:
        batch = max(1024, 2 * (n - have))
        u = rng.random((3, batch))
        theta = -math.pi + 2.0 * math.pi * u[0]
        phi = -math.pi + 2.0 * math.pi * u[1]
        keep = np.log(u[2]) <= _unnormalized_log(params, theta, phi) - bound
        proposed += batch
        idx = np.flatnonzero(keep)
        if have + idx.size > n:
            idx = idx[: n - have]
            proposed -= batch - (idx[-1] + 1)
        accepted += idx.size
        thetas.append(theta[idx])
        phis.append(phi[idx])
        have += idx.size
    theta = np.concatenate(thetas)
    phi = np.concatenate(phis)
    # uniform proposals lie in [-pi, pi) already; wrap guards the rounding edge
    theta = np.where(theta >= math.pi, theta - 2.0 * math.pi, theta)
    phi = np.where(phi >= math.pi, phi - 2.0 * math.pi, phi)
    config = SamplerConfig(seed=seed if isinstance(seed, int) else 0, method=Method.REJECTION, burn_in=0)
    return AngleSampleMatrix(theta, phi, params, config, accepted=int(accepted), proposed=int(proposed))


def log_density(params: ModelParams, theta, phi, control: SeriesControl = DEFAULT_CONTROL, log_c=None):
    """Log of the normalized density at ``(theta, phi)``; broadcasts over arrays."""
    if log_c is None:
        log_c = log_normalizing_constant(params, control)
    out = _unnormalized_log(params, np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)) - log_c
    return float(out) if np.ndim(out) == 0 else out


def density_grid(params: ModelParams, resolution: int, control: SeriesControl = DEFAULT_CONTROL):
    """Normalized density on the uniform ``resolution x resolution`` grid.

    Returns ``(t, density)`` with ``density[i, j]`` at ``(t[i], t[j])``.
    """
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    t = grid_points(resolution)
    log_c = log_normalizing_constant(params, control)
    dens = np.exp(log_density(params, t[:, None], t[None, :], log_c=log_c))
    return t, dens


def _negative_definite_at(v, i, j):
    # central-difference Hessian on the periodic grid (unit spacing)
    rows, cols = v.shape

    def at(a, b):
        return v[(i + a) % rows, (j + b) % cols]

    h11 = at(1, 0) - 2.0 * at(0, 0) + at(-1, 0)
    h22 = at(0, 1) - 2.0 * at(0, 0) + at(0, -1)
    h12 = 0.25 * (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1))
    return h11 < 0.0 and h11 * h22 - h12 * h12 > 0.0


def count_local_maxima(values, rel_tol=1e-12):
    """Number of local maxima of a periodic 2-D grid.

    Candidates are weak maxima over the 8-neighbourhood (no neighbour larger
    by more than ``rel_tol`` in relative terms); adjacent candidates, which
    arise from ties on symmetric grids, are merged.  A cluster counts only if
    one of its points has a negative definite difference Hessian, which
    discards saddles whose rising direction falls between grid directions.
    A flat grid has no maxima.
    """
    v = np.asarray(values, dtype=float)
    if np.max(v) - np.min(v) <= rel_tol * np.max(np.abs(v)):
        return 0
    offsets = [(di, dj) for di in (-1, 0, 1) for dj in (-1, 0, 1) if di or dj]
    is_max = np.ones(v.shape, dtype=bool)
    for di, dj in offsets:
        nb = np.roll(v, (di, dj), axis=(0, 1))
        is_max &= v >= nb - rel_tol * np.maximum(np.abs(v), np.abs(nb))
    rows, cols = v.shape
    seen = np.zeros(v.shape, dtype=bool)
    count = 0
    for i, j in zip(*np.nonzero(is_max)):
        if seen[i, j]:
            continue
        stack = [(i, j)]
        seen[i, j] = True
        peak = False
        while stack:
            a, b = stack.pop()
            peak = peak or _negative_definite_at(v, a, b)
            for di, dj in offsets:
                na, nb_ = (a + di) % rows, (b + dj) % cols
                if is_max[na, nb_] and not seen[na, nb_]:
                    seen[na, nb_] = True
                    stack.append((na, nb_))
        count += peak
    return count


def write_sample_csv(sample: AngleSampleMatrix, path):
    """Write ``theta,phi`` rows in radians with 17 significant digits."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write("theta,phi\n")
        for t, p in zip(sample.theta, sample.phi):
            fh.write(f"{t:.17g},{p:.17g}\n")
    return path


def read_sample_csv(path):
    """Read a ``theta,phi`` CSV; returns ``(theta, phi)`` arrays wrapped to ``[-pi, pi)``."""
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        if header != ["theta", "phi"]:
            raise ValueError(f"expected header 'theta,phi', got {','.join(header)!r}")
        rows = [(float(a), float(b)) for a, b in reader]
    if not rows:
        raise ValueError("sample file has no rows")
    data = np.array(rows)
    wrap = np.vectorize(wrap_angle, otypes=[float])
    return wrap(data[:, 0]), wrap(data[:, 1])


def write_provenance(sample: AngleSampleMatrix, path, extra=None):
    payload = sample.to_provenance()
    if extra:
        payload.update(extra)
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
