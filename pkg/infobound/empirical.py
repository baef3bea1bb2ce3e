"""
Sample estimates of the moments the bounds consume, with the variance of each estimator.

Mean and variance estimators cost O(var/n); the MGF estimator's variance carries an extra
c^2 exp(2 c E[Y]) factor, which grows with the optimal tilt c* ~ eta.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np
from pydantic import Field, model_validator

from infobound.base.schema import BaseSchema
from infobound.config import DEFAULT_SOLVER, SolverConfigSchema
from infobound.cumulant import DiscreteCumulant
from infobound.divergence import solve_tilt
from infobound.errors import EmptySample, OverflowGuard, TooFewPoints

logger = logging.getLogger(__name__)

EXPONENT_LIMIT = 700.0

ArrayLike = Sequence[float] | np.ndarray


class MomentEstimate(BaseSchema):
    value: float
    variance_of_estimator: float = Field(ge=0)
    n: int = Field(ge=1)

    @property
    def standard_error(self) -> float:
        return math.sqrt(self.variance_of_estimator)

    @model_validator(mode="after")
    def _check(self):
        if not math.isfinite(self.value):
            raise ValueError(f"estimate must be finite, got {self.value}")
        return self


class MgfCostPoint(BaseSchema):
    eta: float
    c_star: float
    mgf_estimator_variance: float


def _as_sample(sample: ArrayLike) -> np.ndarray:
    data = np.asarray(sample, dtype=float).ravel()
    if data.size == 0:
        raise EmptySample("empty sample")
    if data.size < 2:
        raise TooFewPoints(f"need at least 2 points, got {data.size}")
    return data


def mean_estimate(sample: ArrayLike) -> MomentEstimate:
    data = _as_sample(sample)
    variance = float(data.var(ddof=1))
    return MomentEstimate(value=float(data.mean()), variance_of_estimator=variance / data.size, n=data.size)


def variance_estimate(sample: ArrayLike, bias_adjusted: bool = True) -> MomentEstimate:
    """V_n = sum (X_i - mean)^2 / (n - 1), or the plug-in (n-1)/n V_n; estimator variance 2 V_n^2 / (n - 1)."""
    data = _as_sample(sample)
    n = data.size
    v_n = float(data.var(ddof=1))
    value = v_n if bias_adjusted else v_n * (n - 1) / n
    return MomentEstimate(value=value, variance_of_estimator=2.0 * v_n**2 / (n - 1), n=n)


def mgf_estimate(sample: ArrayLike, c: float) -> MomentEstimate:
    """(1/n) sum exp(c X_i), estimator variance c^2 exp(2 c mean) var / n to first order."""
    data = _as_sample(sample)
    exponents = c * data
    if exponents.max() > EXPONENT_LIMIT:
        raise OverflowGuard(f"c * X reaches {exponents.max():.6g}, above {EXPONENT_LIMIT}")
    mean, var = float(data.mean()), float(data.var(ddof=1))
    est_var = c * c * math.exp(2.0 * c * mean) * var / data.size
    return MomentEstimate(value=float(np.exp(exponents).mean()), variance_of_estimator=est_var, n=data.size)


def empirical_cgf(sample: ArrayLike) -> DiscreteCumulant:
    """Cumulant of the centered sample with equal weights; finite for every c."""
    return DiscreteCumulant(_as_sample(sample))


def mgf_cost_profile(
    sample: ArrayLike, etas: ArrayLike, config: SolverConfigSchema = DEFAULT_SOLVER
) -> list[MgfCostPoint]:
    """Optimal tilt c* per eta and the variance an MGF estimate at c* would carry."""
    data = _as_sample(sample)
    h = empirical_cgf(data)
    profile = []
    for eta in np.asarray(etas, dtype=float).tolist():
        c_star = solve_tilt(h, eta * eta, "+", config).c_star
        est_var = mgf_estimate(data, c_star).variance_of_estimator if math.isfinite(c_star) else math.inf
        profile.append(MgfCostPoint(eta=eta, c_star=c_star, mgf_estimator_variance=est_var))
    logger.debug("mgf cost profile over %d etas", len(profile))
    return profile
