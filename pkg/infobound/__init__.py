"""
infobound: certified bounds on the model bias E_Q[f] - E_P[f] over KL balls R(Q||P) <= eta^2,
from goal-oriented divergences, concentration envelopes and exponential tilting.
"""

__version__ = "0.1.0"

from infobound.concentration import (
    AdmissibleFamilyDescriptor,
    Bennett,
    BennettAB,
    ConcentrationBound,
    ExplicitMGF,
    Hoeffding,
    IntervalSubGaussian,
    SubGaussian,
    admissible_family,
    bennett_contour,
    bias_band,
    hierarchy_check,
    load_bound,
    phi_curvature,
    phi_eval,
    u_divergence,
)
from infobound.cumulant import ClosedFormCumulant, DiscreteCumulant, QuadratureCumulant, gaussian_cgf
from infobound.divergence import (
    BiasCertificate,
    DiscreteDistribution,
    TiltedSolution,
    cgf_discrete,
    cgf_quadrature,
    go_certificate,
    go_divergence,
    kl_discrete,
    kl_exponential_pair,
    kl_normal_pair,
    linearized_go,
    relative_bias_band,
    solve_tilt,
    tilt_discrete,
)
from infobound.empirical import (
    MomentEstimate,
    empirical_cgf,
    mean_estimate,
    mgf_cost_profile,
    mgf_estimate,
    variance_estimate,
)
from infobound.estimators import (
    BoundedDifferences,
    ConfidenceBand,
    band_coverage,
    cdf_bias_bound,
    confidence_band,
    dkw_epsilon,
    empirical_cdf,
    estimator_bias_bound,
    mcdiarmid_mgf_envelope,
    pinsker_bound,
    sample_variance_bias_bound,
    sample_variance_oscillation,
)

__all__ = [
    "AdmissibleFamilyDescriptor",
    "Bennett",
    "BennettAB",
    "BiasCertificate",
    "BoundedDifferences",
    "ClosedFormCumulant",
    "ConcentrationBound",
    "ConfidenceBand",
    "DiscreteCumulant",
    "DiscreteDistribution",
    "ExplicitMGF",
    "Hoeffding",
    "IntervalSubGaussian",
    "MomentEstimate",
    "QuadratureCumulant",
    "SubGaussian",
    "TiltedSolution",
    "__version__",
    "admissible_family",
    "band_coverage",
    "bennett_contour",
    "bias_band",
    "cdf_bias_bound",
    "cgf_discrete",
    "cgf_quadrature",
    "confidence_band",
    "dkw_epsilon",
    "empirical_cdf",
    "empirical_cgf",
    "estimator_bias_bound",
    "gaussian_cgf",
    "go_certificate",
    "go_divergence",
    "hierarchy_check",
    "kl_discrete",
    "kl_exponential_pair",
    "kl_normal_pair",
    "linearized_go",
    "load_bound",
    "mcdiarmid_mgf_envelope",
    "mean_estimate",
    "mgf_cost_profile",
    "mgf_estimate",
    "phi_curvature",
    "phi_eval",
    "pinsker_bound",
    "relative_bias_band",
    "sample_variance_bias_bound",
    "sample_variance_oscillation",
    "solve_tilt",
    "tilt_discrete",
    "u_divergence",
    "variance_estimate",
]
