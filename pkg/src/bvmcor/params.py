"""Parameter containers for the bivariate von Mises sine and cosine models."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, replace

TWO_PI = 2.0 * math.pi


def wrap_angle(x):
    """Wrap a scalar angle into ``[-pi, pi)``; values already inside are returned unchanged."""
    if -math.pi <= x < math.pi:
        return float(x)
    w = math.fmod(x + math.pi, TWO_PI)
    if w < 0.0:
        w += TWO_PI
    w -= math.pi
    if w >= math.pi:
        w -= TWO_PI
    return w


class Family(str, enum.Enum):
    SINE = "sine"
    COSINE = "cosine"


@dataclass(frozen=True)
class ModelParams:
    """Five-parameter bivariate von Mises model.

    ``assoc`` is the association parameter: ``lambda`` in the sine model
    (interaction ``lambda*sin(t - mu1)*sin(p - mu2)``) and ``kappa3`` in the
    cosine model (interaction ``kappa3*cos(t - mu1 - p + mu2)``).  The sign of
    ``kappa3`` follows that exponent exactly; the alternative convention with
    ``-kappa3`` in the exponent is not used anywhere in this package.

    Means are wrapped into ``[-pi, pi)`` on construction.
    """

    family: Family
    kappa1: float
    kappa2: float
    assoc: float
    mu1: float = 0.0
    mu2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        for name in ("kappa1", "kappa2", "assoc", "mu1", "mu2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.kappa1 < 0 or self.kappa2 < 0:
            raise ValueError(
                f"concentrations must be non-negative, got kappa1={self.kappa1}, kappa2={self.kappa2}"
            )
        object.__setattr__(self, "mu1", wrap_angle(self.mu1))
        object.__setattr__(self, "mu2", wrap_angle(self.mu2))

    @classmethod
    def sine(cls, kappa1, kappa2, lam, mu1=0.0, mu2=0.0):
        return cls(Family.SINE, kappa1, kappa2, lam, mu1, mu2)

    @classmethod
    def cosine(cls, kappa1, kappa2, kappa3, mu1=0.0, mu2=0.0):
        return cls(Family.COSINE, kappa1, kappa2, kappa3, mu1, mu2)

    @property
    def is_sine(self):
        return self.family is Family.SINE

    def swapped(self):
        """Return the model of ``(Phi, Theta)``; both families are symmetric under the swap."""
        return replace(self, kappa1=self.kappa2, kappa2=self.kappa1, mu1=self.mu2, mu2=self.mu1)

    def with_assoc(self, assoc):
        return replace(self, assoc=assoc)

    def envelope_exponent(self):
        """Upper bound ``kappa1 + kappa2 + |assoc|`` of the density exponent."""
        return self.kappa1 + self.kappa2 + abs(self.assoc)

    def to_dict(self):
        d = asdict(self)
        d["family"] = self.family.value
        return d


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for the Bessel series.

    A series stops once ``consecutive_small`` successive terms are each below
    ``rel_tol`` times the running sum.
    """

    rel_tol: float = 1e-14
    consecutive_small: int = 3
    max_terms: int = 20000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.consecutive_small < 1:
            raise ValueError("consecutive_small must be at least 1")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")

    def to_dict(self):
        return asdict(self)


DEFAULT_CONTROL = SeriesControl()
