from infobound.models.exponential import ExponentialModel, exponential_centered_cgf, sub_exponential_envelope
from infobound.models.ising import (
    EnumerationResult,
    GibbsEstimate,
    IsingChain,
    SiteWindow,
    enumerate_expectations,
    ising_enumerate,
    ising_gibbs_sample,
    ising_kl_defect,
    ising_kl_estimate,
    window_averages,
)
from infobound.models.truncnormal import TruncatedNormalModel, truncated_normal_cgf, truncated_normal_moments
from infobound.models.weibull import (
    BatteryExpectations,
    FailureData,
    LifetimeBand,
    WeibullModel,
    battery_expectations,
    lifetime_band,
    lifetime_qois,
    load_battery_data,
    weibull_cdf,
    weibull_loglik_gradient,
    weibull_mle,
    weibull_pdf,
    weibull_sample,
)

__all__ = [
    "BatteryExpectations",
    "EnumerationResult",
    "ExponentialModel",
    "FailureData",
    "GibbsEstimate",
    "IsingChain",
    "LifetimeBand",
    "SiteWindow",
    "TruncatedNormalModel",
    "WeibullModel",
    "battery_expectations",
    "enumerate_expectations",
    "exponential_centered_cgf",
    "ising_enumerate",
    "ising_gibbs_sample",
    "ising_kl_defect",
    "ising_kl_estimate",
    "lifetime_band",
    "lifetime_qois",
    "load_battery_data",
    "sub_exponential_envelope",
    "truncated_normal_cgf",
    "truncated_normal_moments",
    "weibull_cdf",
    "weibull_loglik_gradient",
    "weibull_mle",
    "weibull_pdf",
    "weibull_sample",
    "window_averages",
]
