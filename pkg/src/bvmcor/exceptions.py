"""Exception hierarchy shared by the numeric, sampling and CLI layers."""


class BvmError(Exception):
    """Base class for every error raised by bvmcor."""


class SeriesConvergenceError(BvmError, ArithmeticError):
    """A Bessel series did not meet its truncation criterion within ``max_terms``."""

    def __init__(self, message, terms_used):
        super().__init__(message)
        self.terms_used = terms_used


class SeriesCancellationError(SeriesConvergenceError):
    """The terms converged but cancel so heavily that the sum has lost its precision.

    ``condition`` is ``sum |term| / |sum term|`` for the worst series.
    """

    def __init__(self, message, terms_used, condition):
        super().__init__(message, terms_used)
        self.condition = condition


class DegenerateDistributionError(BvmError, ArithmeticError):
    """An analytic correlation denominator vanished."""


class DegenerateDataError(BvmError, ValueError):
    """A sample statistic has a zero denominator."""


class UndefinedMeanError(DegenerateDataError):
    """The mean resultant length is too small for a circular mean to exist."""


class EnvelopeError(BvmError, ValueError):
    """Rejection sampling requested outside the supported concentration range."""


class QuadratureError(BvmError, ArithmeticError):
    """Torus quadrature failed to converge below the resolution cap."""
