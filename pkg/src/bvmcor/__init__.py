"""Circular correlations and variances of the bivariate von Mises sine and cosine models."""

__version__ = "0.1.0"

from .exceptions import (
    BvmError,
    DegenerateDataError,
    DegenerateDistributionError,
    EnvelopeError,
    QuadratureError,
    SeriesConvergenceError,
    UndefinedMeanError,
)
from .params import DEFAULT_CONTROL, Family, ModelParams, SeriesControl, wrap_angle
from .special import bessel_i, bessel_i_over_power, bessel_i_scaled, bessel_ratio
from .series import SeriesBundle, cosine_bundle, log_normalizing_constant, series_bundle, sine_bundle
from .moments import (
    CorrelationReport,
    TrigMoments,
    circular_variance,
    correlation_report,
    normal_approx_rho,
    rho_fl,
    rho_js,
    trig_moments,
)
from .sampling import (
    AngleSampleMatrix,
    ConditionalSpec,
    Method,
    SamplerConfig,
    cosine_conditional,
    log_density,
    sample_bivariate,
    sample_bivariate_rejection,
    sample_univariate_vm,
    sine_conditional,
)
from .estimation import (
    McValidation,
    Quantity,
    circular_mean,
    mc_validate,
    sample_circular_variance,
    sample_rho_fl,
    sample_rho_js,
)
