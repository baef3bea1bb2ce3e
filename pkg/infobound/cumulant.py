"""
Concrete cumulant generating functions.

DiscreteCumulant is exact on finite atoms (and on samples, with equal weights); ClosedFormCumulant
wraps analytic expressions; QuadratureCumulant integrates tilted moments of a 1-D density.
"""

import logging
import math
import warnings
from collections.abc import Callable, Sequence

import numpy as np
from scipy import integrate, optimize
from scipy.special import logsumexp

from infobound.base.cumulant import BaseCumulant
from infobound.config import DEFAULT_QUADRATURE, DEFAULT_SOLVER, QuadratureConfigSchema, SolverConfigSchema
from infobound.errors import LengthMismatch, PreconditionViolation, QuadratureNonconvergence

logger = logging.getLogger(__name__)

ScalarFn = Callable[[float], float]


class DiscreteCumulant(BaseCumulant):
    """H(c) = log sum_i p_i exp(c (f_i - mu)); derivatives are tilted moments."""

    def __init__(self, values: Sequence[float] | np.ndarray, weights: Sequence[float] | np.ndarray | None = None):
        values = np.asarray(values, dtype=float)
        if weights is None:
            weights = np.full(values.shape, 1.0 / values.size)
        weights = np.asarray(weights, dtype=float)
        if values.shape != weights.shape:
            raise LengthMismatch(f"{values.size} values for {weights.size} weights")
        keep = weights > 0
        self.weights = weights[keep] / weights[keep].sum()
        self.mean = float(np.dot(self.weights, values[keep]))
        self.centered = values[keep] - self.mean
        self.log_weights = np.log(self.weights)
        self.upper = float(self.centered.max())
        self.lower = float(self.centered.min())

    def tilted_weights(self, c: float) -> np.ndarray:
        logits = self.log_weights + c * self.centered
        return np.exp(logits - logsumexp(logits))

    def _eval(self, c: float) -> float:
        return float(logsumexp(self.log_weights + c * self.centered))

    def _deriv1(self, c: float) -> float:
        return float(np.dot(self.tilted_weights(c), self.centered))

    def _deriv2(self, c: float) -> float:
        pi = self.tilted_weights(c)
        m1 = np.dot(pi, self.centered)
        return float(np.dot(pi, (self.centered - m1) ** 2))

    def g_sup(self, config: SolverConfigSchema = DEFAULT_SOLVER) -> float:
        # As c -> inf the tilt concentrates on the largest atom: g -> -log P(f~ = max).
        top = self.centered == self.upper
        return float(-math.log(self.weights[top].sum()))

    def boundary_gap(self, config: SolverConfigSchema = DEFAULT_SOLVER) -> float:
        return self.upper

    def mirror(self) -> "DiscreteCumulant":
        return DiscreteCumulant(-(self.centered + self.mean), self.weights)


class ClosedFormCumulant(BaseCumulant):
    def __init__(
        self,
        eval_fn: ScalarFn,
        deriv1_fn: ScalarFn,
        deriv2_fn: ScalarFn,
        domain_lo: float = -math.inf,
        domain_hi: float = math.inf,
        upper: float = math.inf,
        lower: float = -math.inf,
        g_sup_value: float | None = None,
    ):
        self._eval_fn = eval_fn
        self._deriv1_fn = deriv1_fn
        self._deriv2_fn = deriv2_fn
        self.domain_lo = domain_lo
        self.domain_hi = domain_hi
        self.upper = upper
        self.lower = lower
        self._g_sup = g_sup_value

    def _eval(self, c: float) -> float:
        return float(self._eval_fn(c))

    def _deriv1(self, c: float) -> float:
        return float(self._deriv1_fn(c))

    def _deriv2(self, c: float) -> float:
        return float(self._deriv2_fn(c))

    def g_sup(self, config: SolverConfigSchema = DEFAULT_SOLVER) -> float | None:
        return self._g_sup


def gaussian_cgf(sigma: float) -> ClosedFormCumulant:
    """H(c) = sigma^2 c^2 / 2, the cumulant of N(mu, sigma^2) and the sub-Gaussian envelope."""
    var = sigma * sigma
    return ClosedFormCumulant(lambda c: 0.5 * var * c * c, lambda c: var * c, lambda c: var)


RANGE_GRID_POINTS = 2049


def qoi_range(f: ScalarFn, support: tuple[float, float], points: int = RANGE_GRID_POINTS) -> tuple[float, float]:
    """(min f, max f) over a bounded support: a grid with both end points, refined around the extremes."""
    lo, hi = float(support[0]), float(support[1])
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return (-math.inf, math.inf)
    grid = np.linspace(lo, hi, points)
    values = np.array([f(x) for x in grid], dtype=float)

    def refine(sign: float) -> float:
        i = int(np.argmax(sign * values))
        a, b = grid[max(i - 1, 0)], grid[min(i + 1, points - 1)]
        best = float(sign * values[i])
        if a < b:
            res = optimize.minimize_scalar(
                lambda x: -sign * f(x), bounds=(a, b), method="bounded", options={"xatol": 1e-12}
            )
            if res.success:
                best = max(best, -float(res.fun))
        return sign * best

    return refine(-1.0), refine(1.0)


class QuadratureCumulant(BaseCumulant):
    """Tilted moments of f under a 1-D density by adaptive Gauss-Kronrod quadrature."""

    def __init__(
        self,
        density: ScalarFn,
        support: tuple[float, float],
        qoi: ScalarFn,
        c_domain: tuple[float, float] = (-math.inf, math.inf),
        f_bounds: tuple[float, float] = (-math.inf, math.inf),
        config: QuadratureConfigSchema = DEFAULT_QUADRATURE,
    ):
        self.density = density
        self.support = (float(support[0]), float(support[1]))
        self.qoi = qoi
        self.config = config
        self.domain_lo, self.domain_hi = float(c_domain[0]), float(c_domain[1])
        self._cache: dict[float, tuple[float, float, float]] = {}

        mass = self._integrate(density)
        if abs(mass - 1.0) > config.tol:
            raise PreconditionViolation(f"density integrates to {mass!r} on {self.support}, not 1")
        self.mean = self._integrate(lambda x: qoi(x) * density(x))
        self.upper = f_bounds[1] - self.mean
        self.lower = f_bounds[0] - self.mean

    def _integrate(self, fn: ScalarFn) -> float:
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                value, abserr = integrate.quad(
                    fn,
                    *self.support,
                    epsabs=self.config.tol,
                    epsrel=self.config.tol,
                    limit=self.config.limit,
                )
            except integrate.IntegrationWarning as e:
                raise QuadratureNonconvergence(str(e)) from e
        logger.debug("quad on %s: value=%r abserr=%.3g", self.support, value, abserr)
        return value

    def _shift(self, c: float) -> float:
        if c > 0 and math.isfinite(self.upper):
            return c * self.upper
        if c < 0 and math.isfinite(self.lower):
            return c * self.lower
        return 0.0

    def _moments(self, c: float) -> tuple[float, float, float]:
        """(H, H', H'') at c, cached."""
        if c in self._cache:
            return self._cache[c]
        shift = self._shift(c)
        mean = self.mean

        def weight(x: float) -> float:
            return math.exp(c * (self.qoi(x) - mean) - shift) * self.density(x)

        m0 = self._integrate(weight)
        m1 = self._integrate(lambda x: (self.qoi(x) - mean) * weight(x)) / m0
        m2 = self._integrate(lambda x: (self.qoi(x) - mean) ** 2 * weight(x)) / m0
        result = (math.log(m0) + shift, m1, max(m2 - m1 * m1, 0.0))
        self._cache[c] = result
        return result

    def _eval(self, c: float) -> float:
        return 0.0 if c == 0.0 else self._moments(c)[0]

    def _deriv1(self, c: float) -> float:
        return self._moments(c)[1]

    def _deriv2(self, c: float) -> float:
        return self._moments(c)[2]
