"""
Two-parameter Weibull lifetimes, maximum likelihood fit and the failure-probability QoIs.

f(t) = (beta/xi) (t/xi)^(beta-1) exp(-(t/xi)^beta), t > 0
"""

import csv
import logging
import math
from collections.abc import Callable, Sequence
from importlib import resources

import numpy as np
from pydantic import Field, PositiveFloat, field_validator
from scipy import integrate, optimize, stats
from scipy.special import expit

from infobound.base.schema import BaseSchema
from infobound.concentration import BennettAB
from infobound.config import DEFAULT_QUADRATURE, DEFAULT_SOLVER, QuadratureConfigSchema, SolverConfigSchema
from infobound.errors import DegenerateData, DomainError, NonconvergenceError, ParameterError

logger = logging.getLogger(__name__)

BETA_BRACKET = (0.1, 50.0)
MAX_ITERATIONS = 200
# the density above xi * TAIL_EXPONENT^(1/beta) carries mass exp(-TAIL_EXPONENT)
TAIL_EXPONENT = 50.0
BATTERY_DATA = "battery_failures.csv"

Qoi = Callable[[float | np.ndarray], float | np.ndarray]


class WeibullModel(BaseSchema):
    shape: float = Field(gt=0)
    scale: float = Field(gt=0)


class FailureData(BaseSchema):
    times: list[PositiveFloat] = Field(min_length=1)

    @field_validator("times")
    @classmethod
    def _finite(cls, v: list[float]) -> list[float]:
        if not all(math.isfinite(t) for t in v):
            raise ValueError("failure times must be finite")
        return v


class BatteryExpectations(BaseSchema):
    threshold: float
    w: float
    e_f1: float
    var_f1: float
    e_f2: float
    var_f2: float


class LifetimeBand(BaseSchema):
    times: list[float]
    mean: list[float]
    lower: list[float]
    upper: list[float]
    eta_sq: float


def load_battery_data() -> FailureData:
    """Bundled failure times, in cycles, of the twelve battery test samples."""
    text = resources.files("infobound.models").joinpath("data", BATTERY_DATA).read_text()
    return read_failure_times(text.splitlines())


def read_failure_times(lines: Sequence[str]) -> FailureData:
    reader = csv.reader(line for line in lines if line.strip())
    rows = list(reader)
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    return FailureData(times=[float(row[0]) for row in rows])


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def weibull_pdf(model: WeibullModel, t: float | np.ndarray) -> float | np.ndarray:
    return _unwrap(stats.weibull_min.pdf(t, model.shape, scale=model.scale))


def weibull_cdf(model: WeibullModel, t: float | np.ndarray) -> float | np.ndarray:
    """F(t) = 1 - exp(-(t/xi)^beta)."""
    if np.any(np.asarray(t) < 0):
        raise DomainError("failure times are nonnegative")
    return _unwrap(-np.expm1(-((np.asarray(t, dtype=float) / model.scale) ** model.shape)))


def weibull_sample(model: WeibullModel, size: int, seed: int = 0) -> np.ndarray:
    return stats.weibull_min.rvs(model.shape, scale=model.scale, size=size, random_state=np.random.default_rng(seed))


def _unwrap(values: np.ndarray) -> float | np.ndarray:
    return float(values) if np.ndim(values) == 0 else values


def weibull_loglik(model: WeibullModel, data: FailureData) -> float:
    return float(stats.weibull_min.logpdf(data.times, model.shape, scale=model.scale).sum())


def weibull_loglik_gradient(model: WeibullModel, data: FailureData) -> tuple[float, float]:
    """(d/dbeta, d/dxi) of the log-likelihood."""
    t = np.asarray(data.times)
    n, beta, xi = t.size, model.shape, model.scale
    log_ratio = np.log(t / xi)
    powered = np.exp(beta * log_ratio)
    d_beta = n / beta + log_ratio.sum() - np.dot(powered, log_ratio)
    d_xi = beta / xi * (powered.sum() - n)
    return float(d_beta), float(d_xi)


def _profile_equation(log_t: np.ndarray) -> tuple[Callable[[float], float], Callable[[float], float]]:
    """sum t^b log t / sum t^b - 1/b - mean(log t), and its derivative in b; increasing in b."""
    centered = log_t - log_t.max()
    mean_log = log_t.mean()

    def weights(b: float) -> np.ndarray:
        w = np.exp(b * centered)
        return w / w.sum()

    def score(b: float) -> float:
        return float(np.dot(weights(b), log_t) - 1.0 / b - mean_log)

    def slope(b: float) -> float:
        w = weights(b)
        m1 = np.dot(w, log_t)
        return float(np.dot(w, (log_t - m1) ** 2) + 1.0 / b**2)

    return score, slope


def weibull_mle(data: FailureData) -> WeibullModel:
    """Profile-likelihood MLE: Newton on the shape equation, bracketed root finding as the fallback."""
    t = np.asarray(data.times, dtype=float)
    if np.unique(t).size < 2:
        raise DegenerateData("the Weibull MLE needs at least two distinct failure times")
    log_t = np.log(t)
    score, slope = _profile_equation(log_t)

    # the shape of the log-times gives a moment starting point
    start = min(max(math.pi / (math.sqrt(6.0) * log_t.std(ddof=1)), BETA_BRACKET[0]), BETA_BRACKET[1])
    beta = None
    try:
        beta = optimize.newton(score, start, fprime=slope, tol=1e-14, maxiter=MAX_ITERATIONS)
    except (RuntimeError, OverflowError, ZeroDivisionError) as e:
        logger.debug("newton on the Weibull shape failed: %s", e)
    if beta is None or not BETA_BRACKET[0] <= beta <= BETA_BRACKET[1] or abs(score(beta)) > 1e-12:
        lo, hi = BETA_BRACKET
        if score(lo) > 0 or score(hi) < 0:
            raise NonconvergenceError(f"the Weibull shape equation has no root in {BETA_BRACKET}")
        beta, result = optimize.brentq(score, lo, hi, xtol=1e-14, maxiter=MAX_ITERATIONS, full_output=True, disp=False)
        if not result.converged:
            raise NonconvergenceError(f"Weibull shape did not converge after {MAX_ITERATIONS} iterations")
    beta = float(beta)
    log_scale = (np.log(np.mean(np.exp(beta * (log_t - log_t.max())))) + beta * log_t.max()) / beta
    model = WeibullModel(shape=beta, scale=float(math.exp(log_scale)))
    logger.debug("weibull MLE: shape=%r scale=%r", model.shape, model.scale)
    return model


def lifetime_qois(threshold: float, w: float) -> tuple[Qoi, Qoi]:
    """f1 = 1{0 <= t <= T} and its logistic smoothing f2(t; w) = 1/(1 + exp(w (t - T)))."""
    if threshold <= 0:
        raise DomainError(f"threshold must be positive, got {threshold}")
    if w < 1:
        raise DomainError(f"w must be at least 1, got {w}")

    def f1(t):
        values = ((np.asarray(t) >= 0) & (np.asarray(t) <= threshold)).astype(float)
        return _unwrap(values)

    def f2(t):
        return _unwrap(expit(-w * (np.asarray(t, dtype=float) - threshold)))

    return f1, f2


def battery_expectations(
    model: WeibullModel, threshold: float, w: float, config: QuadratureConfigSchema = DEFAULT_QUADRATURE
) -> BatteryExpectations:
    """Mean and variance of f1 (exact) and f2 (quadrature split at T) under the Weibull model."""
    f1_mean = weibull_cdf(model, threshold)
    beta, xi = model.shape, model.scale
    end = max(xi * TAIL_EXPONENT ** (1.0 / beta), 2 * threshold)

    def pdf(t: float) -> float:
        if t <= 0:
            return 0.0
        r = t / xi
        return beta / xi * r ** (beta - 1) * math.exp(-(r**beta))

    def f2(t: float) -> float:
        return float(expit(-w * (t - threshold)))

    def integral(fn: Callable[[float], float]) -> float:
        total = 0.0
        for lo, hi in ((0.0, threshold), (threshold, end)):
            value, _ = integrate.quad(fn, lo, hi, epsabs=config.tol, epsrel=config.tol, limit=config.limit)
            total += value
        return total

    e_f2 = integral(lambda t: f2(t) * pdf(t))
    e_f2_sq = integral(lambda t: f2(t) ** 2 * pdf(t))
    return BatteryExpectations(
        threshold=threshold,
        w=w,
        e_f1=f1_mean,
        var_f1=f1_mean * (1.0 - f1_mean),
        e_f2=e_f2,
        var_f2=max(e_f2_sq - e_f2**2, 0.0),
    )


def lifetime_band(
    model: WeibullModel,
    times: Sequence[float] | np.ndarray,
    eta_sq: float,
    w: float = 5.0,
    means: Sequence[float] | None = None,
    config: SolverConfigSchema = DEFAULT_SOLVER,
) -> LifetimeBand:
    """Bennett-(a,b) band, clipped to [0, 1], for the failure probability E[f2] at each threshold.

    `means` are precomputed E[f2] values on the same grid.
    """
    grid = np.asarray(times, dtype=float)
    if grid.size == 0:
        raise ParameterError("empty time grid")
    if means is None:
        means = [battery_expectations(model, threshold, w).e_f2 for threshold in grid.tolist()]
    elif len(means) != grid.size:
        raise ParameterError(f"{len(means)} means for {grid.size} times")
    clipped, lower, upper = [], [], []
    for mean in means:
        mean = min(max(float(mean), 0.0), 1.0)
        bound = BennettAB(a=0.0, b=1.0, mu=mean)
        clipped.append(mean)
        lower.append(max(mean - bound.u_divergence(eta_sq, "-", config), 0.0))
        upper.append(min(mean + bound.u_divergence(eta_sq, "+", config), 1.0))
    return LifetimeBand(times=grid.tolist(), mean=clipped, lower=lower, upper=upper, eta_sq=eta_sq)
