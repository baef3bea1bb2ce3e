"""
Plot data for the worked examples: one column per curve, plus the parameters that produced it.
"""

import logging
import math
from collections.abc import Sequence
from typing import Any

import numpy as np

from infobound.base.schema import BaseSchema
from infobound.concentration import Bennett, BennettAB, Hoeffding, bennett_contour
from infobound.config import SamplerConfigSchema
from infobound.divergence import go_certificate, go_divergence, kl_exponential_pair
from infobound.errors import TooLarge
from infobound.models.exponential import ExponentialModel, exponential_centered_cgf, sub_exponential_envelope
from infobound.models.ising import (
    MAX_ENUMERATION_SITES,
    IsingChain,
    SiteWindow,
    batch_means,
    ising_enumerate,
    sample_states,
    window_averages,
)
from infobound.models.truncnormal import TruncatedNormalModel, truncated_normal_cgf, truncated_normal_moments
from infobound.models.weibull import (
    battery_expectations,
    lifetime_band,
    load_battery_data,
    weibull_mle,
)

logger = logging.getLogger(__name__)

Columns = dict[str, list[Any]]


class FigureData(BaseSchema):
    name: str
    columns: Columns
    parameters: dict[str, Any]


def exponential_figure(rates: Sequence[float] | None = None) -> FigureData:
    """Exact mean gap 1/lambda_Q - 1 of Exp(lambda_Q) against Exp(1), with the GO and sub-exponential bands."""
    rates = np.linspace(1.01, 10.0, 50) if rates is None else np.asarray(rates, dtype=float)
    base = ExponentialModel(rate=1.0)
    h = exponential_centered_cgf(base)
    envelope = sub_exponential_envelope(base)
    columns: Columns = {k: [] for k in ("rate_q", "eta_sq", "gap", "go_lower", "go_upper", "env_lower", "env_upper")}
    for rate in rates.tolist():
        eta_sq = kl_exponential_pair(rate, base.rate)
        cert = go_certificate(h, eta_sq)
        columns["rate_q"].append(rate)
        columns["eta_sq"].append(eta_sq)
        columns["gap"].append(1.0 / rate - base.mean)
        columns["go_lower"].append(cert.lower)
        columns["go_upper"].append(cert.upper)
        columns["env_lower"].append(-envelope.u_divergence(eta_sq, "-"))
        columns["env_upper"].append(envelope.u_divergence(eta_sq, "+"))
    parameters = {"rate_p": base.rate, "envelope": envelope.dump_model()}
    return FigureData(name="exponential", columns=columns, parameters=parameters)


def truncated_normal_figure(
    eta_sqs: Sequence[float] | None = None, model: TruncatedNormalModel | None = None
) -> FigureData:
    """Upper bias bounds of f(x) = x under TN(0, 1, -1, 1): GO, Bennett, Bennett-(a,b) and Hoeffding."""
    eta_sqs = np.arange(1, 81) * 0.05 if eta_sqs is None else np.asarray(eta_sqs, dtype=float)
    model = model or TruncatedNormalModel()
    mean, variance = truncated_normal_moments(model)
    h = truncated_normal_cgf(model)
    bennett = Bennett.from_variance(model.hi, mean, variance, a=model.lo)
    bennett_ab = BennettAB(a=model.lo, b=model.hi, mu=mean)
    hoeffding = Hoeffding(a=model.lo, b=model.hi)
    columns: Columns = {k: [] for k in ("eta_sq", "go", "bennett", "bennett_ab", "hoeffding")}
    for eta_sq in eta_sqs.tolist():
        columns["eta_sq"].append(eta_sq)
        columns["go"].append(go_divergence(h, eta_sq))
        columns["bennett"].append(bennett.u_divergence(eta_sq))
        columns["bennett_ab"].append(bennett_ab.u_divergence(eta_sq))
        columns["hoeffding"].append(hoeffding.u_divergence(eta_sq))
    parameters = {"model": model.dump_model(), "mean": mean, "variance": variance}
    return FigureData(name="truncated-normal", columns=columns, parameters=parameters)


def battery_figure(
    times: Sequence[float] | None = None, eta_sqs: Sequence[float] = (0.01, 0.1), w: float = 5.0
) -> FigureData:
    """Failure probabilities E[f1], E[f2] of the fitted Weibull model and Bennett-(a,b) bands for f2."""
    times = np.linspace(0.0, 2500.0, 500) if times is None else np.asarray(times, dtype=float)
    data = load_battery_data()
    model = weibull_mle(data)
    columns: Columns = {
        "time": times.tolist(),
        "e_f1": [],
        "e_f2": [],
    }
    for threshold in times.tolist():
        expectations = battery_expectations(model, threshold, w)
        columns["e_f1"].append(expectations.e_f1)
        columns["e_f2"].append(expectations.e_f2)
    for eta_sq in eta_sqs:
        band = lifetime_band(model, times, eta_sq, w, means=columns["e_f2"])
        columns[f"lower_{eta_sq:g}"] = band.lower
        columns[f"upper_{eta_sq:g}"] = band.upper
    parameters = {
        "failure_times": data.times,
        "shape": model.shape,
        "scale": model.scale,
        "w": w,
        "eta_sq": list(eta_sqs),
    }
    return FigureData(name="battery", columns=columns, parameters=parameters)


def _bennett_pair(mean: float, variance: float, eta_sq: float) -> tuple[float, float, float, float]:
    """(lower, upper) of the Bennett and Bennett-(a,b) bands of a QoI with values in [-1, 1]."""
    mean = min(max(mean, -1.0), 1.0)
    bab = BennettAB(a=-1.0, b=1.0, mu=mean)
    bab_band = (mean - bab.u_divergence(eta_sq, "-"), mean + bab.u_divergence(eta_sq, "+"))
    if variance <= 0:
        return mean, mean, *bab_band
    bennett = Bennett.from_variance(1.0, mean, variance, a=-1.0)
    return mean - bennett.u_divergence(eta_sq, "-"), mean + bennett.u_divergence(eta_sq, "+"), *bab_band


def _z_score(estimate: float, exact: float, se: float) -> float:
    if se > 0:
        return (estimate - exact) / se
    return 0.0 if estimate == exact else math.copysign(math.inf, estimate - exact)


def ising_figure(
    chain: IsingChain,
    eta_sqs: Sequence[float] = (0.05, 0.5),
    radius: int = 1,
    exact: bool = False,
    config: SamplerConfigSchema | None = None,
) -> FigureData:
    """Mean of the local magnetization at each center with Bennett and Bennett-(a,b) bands.

    Moments come from Gibbs sampling; with `exact` they come from enumeration and the sampled
    means are kept alongside, with their deviation from the exact means in standard errors.
    """
    if exact and chain.n_sites > MAX_ENUMERATION_SITES:
        raise TooLarge(f"exact moments need at most {MAX_ENUMERATION_SITES} sites, got {chain.n_sites}")
    config = config or SamplerConfigSchema()
    centers = list(range(radius, chain.n_sites - radius))
    states = sample_states(chain, config)
    windows = [window_averages(s, radius) for s in states]
    mc_mean = batch_means(windows, config.batches)
    centre = mc_mean.mean(axis=0)
    mc_spread = batch_means([(w - centre) ** 2 for w in windows], config.batches)
    columns: Columns = {
        "center": centers,
        "mcmc_mean": centre.tolist(),
        "mcmc_se": (mc_mean.std(axis=0, ddof=1) / math.sqrt(mc_mean.shape[0])).tolist(),
    }
    if exact:
        results = [ising_enumerate(chain, SiteWindow(center=c, radius=radius)) for c in centers]
        means = [r.mean for r in results]
        variances = [r.variance for r in results]
        columns["exact_mean"] = means
        columns["exact_variance"] = variances
        columns["mcmc_z"] = [_z_score(m, e, se) for m, e, se in zip(columns["mcmc_mean"], means, columns["mcmc_se"])]
    else:
        means = centre.tolist()
        variances = mc_spread.mean(axis=0).tolist()
    columns["variance"] = variances
    for eta_sq in eta_sqs:
        rows = [_bennett_pair(m, v, eta_sq) for m, v in zip(means, variances)]
        for i, name in enumerate(("bennett_lower", "bennett_upper", "bennett_ab_lower", "bennett_ab_upper")):
            columns[f"{name}_{eta_sq:g}"] = [row[i] for row in rows]
    parameters = {
        "chain": {"n": chain.n_sites, "beta": chain.inverse_temperature, "j": chain.couplings, "h": chain.field},
        "radius": radius,
        "eta_sq": list(eta_sqs),
        "exact": exact,
        "sampler": config.model_dump(),
    }
    return FigureData(name="ising", columns=columns, parameters=parameters)


def bennett_contour_figure(
    sigmas: Sequence[float] | None = None, eta_sqs: Sequence[float] | None = None, b: float = 1.0, mu: float = 0.0
) -> FigureData:
    """Upper Bennett bound over a (sigma_B, eta^2) grid, in long format."""
    sigmas = np.linspace(0.05, 1.0, 20) if sigmas is None else np.asarray(sigmas, dtype=float)
    eta_sqs = np.linspace(0.05, 1.0, 20) if eta_sqs is None else np.asarray(eta_sqs, dtype=float)
    surface = bennett_contour(sigmas, eta_sqs, b=b, mu=mu)
    grid_sigma, grid_eta = np.meshgrid(sigmas, eta_sqs, indexing="ij")
    columns: Columns = {
        "sigma_b": grid_sigma.ravel().tolist(),
        "eta_sq": grid_eta.ravel().tolist(),
        "upper": surface.ravel().tolist(),
    }
    return FigureData(name="bennett-contour", columns=columns, parameters={"b": b, "mu": mu})
