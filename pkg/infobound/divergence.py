"""
Divergence core: KL divergences, cumulant constructors, the goal-oriented (GO) divergence

    Xi(Q||P; f) = inf_{c>0} (H(c) + R(Q||P)) / c

and the exponential-tilting solver that certifies its tightness. The minimizer solves
g(c) = c H'(c) - H(c) = eta^2; g is nondecreasing (g' = c H'' >= 0) so a doubling bracket
followed by bisection is globally safe.
"""

import logging
import math
from collections.abc import Callable, Sequence
from typing import Literal

import numpy as np
from pydantic import Field, model_validator
from scipy import optimize
from scipy.special import logsumexp, rel_entr

from infobound.base.cumulant import BaseCumulant
from infobound.base.schema import BaseSchema
from infobound.config import DEFAULT_QUADRATURE, DEFAULT_SOLVER, QuadratureConfigSchema, SolverConfigSchema
from infobound.cumulant import DiscreteCumulant, QuadratureCumulant, qoi_range
from infobound.errors import (
    AbsolutelyContinuityViolation,
    DegenerateQoI,
    DomainError,
    LengthMismatch,
    NonconvergenceError,
)

logger = logging.getLogger(__name__)

Sign = Literal["+", "-"]
WEIGHT_SUM_TOL = 1e-12


class DiscreteDistribution(BaseSchema):
    """Finite list of distinct atoms with probability weights."""

    atoms: list[float]
    weights: list[float]

    @model_validator(mode="after")
    def _check(self):
        if len(self.atoms) != len(self.weights):
            raise ValueError(f"{len(self.atoms)} atoms for {len(self.weights)} weights")
        if not self.atoms:
            raise ValueError("a distribution needs at least one atom")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if abs(math.fsum(self.weights) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {math.fsum(self.weights)!r}, not 1")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("atoms must be distinct")
        return self

    @classmethod
    def from_unnormalized(cls, atoms: Sequence[float], weights: Sequence[float] | np.ndarray) -> "DiscreteDistribution":
        w = np.asarray(weights, dtype=float)
        return cls(atoms=list(map(float, atoms)), weights=(w / w.sum()).tolist())

    def mean(self, values: Sequence[float] | None = None) -> float:
        values = self.atoms if values is None else values
        if len(values) != len(self.weights):
            raise LengthMismatch(f"{len(values)} QoI values for {len(self.weights)} atoms")
        return float(np.dot(self.weights, values))


class TiltedSolution(BaseSchema):
    """Optimizer of the GO objective on one side, with the extremal tilt it defines."""

    c_star: float = Field(ge=0)
    regime: Literal["interior", "boundary"]
    kl_attained: float = Field(ge=0)
    tilted_mean_gap: float
    value: float = Field(ge=0)
    iterations: int = 0
    residual: float = 0.0


class CertificateDiagnostics(BaseSchema):
    iterations: int = 0
    residual: float = 0.0
    lower: TiltedSolution | None = None
    upper: TiltedSolution | None = None


class BiasCertificate(BaseSchema):
    """-Xi(-f) <= E_Q[f] - E_P[f] <= Xi(f) for every Q with R(Q||P) <= eta_sq."""

    eta_sq: float = Field(ge=0)
    lower: float
    upper: float
    method: Literal["goal-oriented", "concentration-family"]
    diagnostics: CertificateDiagnostics = Field(default_factory=CertificateDiagnostics)

    @model_validator(mode="after")
    def _check(self):
        if self.eta_sq == 0 and (self.lower != 0 or self.upper != 0):
            raise ValueError("a zero-radius certificate must be (0, 0)")
        if not self.lower <= 0 <= self.upper:
            raise ValueError(f"certificate ({self.lower}, {self.upper}) must straddle 0")
        return self

    def contains(self, bias: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= bias <= self.upper + tol

    @classmethod
    def from_solutions(
        cls,
        eta_sq: float,
        lower: TiltedSolution | None,
        upper: TiltedSolution | None,
        method: Literal["goal-oriented", "concentration-family"],
    ) -> "BiasCertificate":
        solutions = [s for s in (lower, upper) if s is not None]
        diagnostics = CertificateDiagnostics(
            iterations=sum(s.iterations for s in solutions),
            residual=max((s.residual for s in solutions), default=0.0),
            lower=lower,
            upper=upper,
        )
        return cls(
            eta_sq=eta_sq,
            lower=-lower.value if lower is not None else 0.0,
            upper=upper.value if upper is not None else 0.0,
            method=method,
            diagnostics=diagnostics,
        )


def kl_discrete(q: DiscreteDistribution, p: DiscreteDistribution) -> float:
    """R(Q||P) = sum_i q_i log(q_i/p_i), atoms aligned by value, 0 log 0 = 0."""
    p_weights = dict(zip(p.atoms, p.weights))
    qw = np.asarray(q.weights)
    pw = np.zeros_like(qw)
    for i, (atom, weight) in enumerate(zip(q.atoms, q.weights)):
        pw[i] = p_weights.get(atom, 0.0)
        if weight > 0 and pw[i] <= 0:
            raise AbsolutelyContinuityViolation(f"atom {atom} has Q-weight {weight} but P-weight 0")
    return max(float(rel_entr(qw, pw).sum()), 0.0)


def kl_exponential_pair(lambda_q: float, lambda_p: float) -> float:
    if lambda_q <= 0 or lambda_p <= 0:
        raise DomainError(f"rates must be positive, got ({lambda_q}, {lambda_p})")
    return math.log(lambda_q / lambda_p) + lambda_p / lambda_q - 1.0


def kl_normal_pair(mu_q: float, sigma_q: float, mu_p: float, sigma_p: float) -> float:
    if sigma_q <= 0 or sigma_p <= 0:
        raise DomainError(f"standard deviations must be positive, got ({sigma_q}, {sigma_p})")
    return math.log(sigma_p / sigma_q) + (sigma_q**2 + (mu_q - mu_p) ** 2) / (2 * sigma_p**2) - 0.5


def cgf_discrete(p: DiscreteDistribution, f_values: Sequence[float] | None = None) -> DiscreteCumulant:
    values = p.atoms if f_values is None else f_values
    if len(values) != len(p.weights):
        raise LengthMismatch(f"{len(values)} QoI values for {len(p.weights)} atoms")
    return DiscreteCumulant(values, p.weights)


def cgf_quadrature(
    density: Callable[[float], float],
    support: tuple[float, float],
    f: Callable[[float], float],
    tol: float | None = None,
    c_domain: tuple[float, float] = (-math.inf, math.inf),
    f_bounds: tuple[float, float] | None = None,
) -> QuadratureCumulant:
    """Cumulant of f under a density on `support`.

    f_bounds defaults to the range of f over a bounded support and is unbounded otherwise.
    """
    config = DEFAULT_QUADRATURE if tol is None else QuadratureConfigSchema(tol=tol)
    if f_bounds is None:
        f_bounds = qoi_range(f, support)
    return QuadratureCumulant(density, support, f, c_domain=c_domain, f_bounds=f_bounds, config=config)


def tilt_discrete(p: DiscreteDistribution, f_values: Sequence[float], c: float) -> DiscreteDistribution:
    """dP^c/dP = exp(c f - log M_P(c; f))."""
    if len(f_values) != len(p.weights):
        raise LengthMismatch(f"{len(f_values)} QoI values for {len(p.weights)} atoms")
    w = np.asarray(p.weights)
    f = np.asarray(f_values, dtype=float)
    logits = np.full(w.shape, -np.inf)
    pos = w > 0
    logits[pos] = np.log(w[pos]) + c * (f[pos] - f[pos].max())
    tilted = np.exp(logits - logsumexp(logits))
    return DiscreteDistribution(atoms=list(p.atoms), weights=(tilted / tilted.sum()).tolist())


def _side(h: BaseCumulant, sign: Sign) -> BaseCumulant:
    if sign == "+":
        return h
    if sign == "-":
        return h.mirror()
    raise DomainError(f"sign must be '+' or '-', got {sign!r}")


def _boundary_solution(
    h: BaseCumulant, eta_sq: float, edge: float, sup_g: float, config: SolverConfigSchema
) -> TiltedSolution:
    if math.isinf(h.domain_hi):
        gap = h.boundary_gap(config)
        return TiltedSolution(
            c_star=math.inf, regime="boundary", kl_attained=sup_g, tilted_mean_gap=gap, value=max(gap, 0.0)
        )
    # MGF finite at a finite right end: the objective is decreasing up to the end point.
    value = h.objective(edge, eta_sq)
    return TiltedSolution(c_star=edge, regime="boundary", kl_attained=sup_g, tilted_mean_gap=value, value=value)


def solve_tilt(
    h: BaseCumulant, eta_sq: float, sign: Sign = "+", config: SolverConfigSchema = DEFAULT_SOLVER
) -> TiltedSolution:
    """Solve c H'(c) - H(c) = eta^2 on the `sign` side of h.

    Interior regime: the root c* gives Xi = H'(c*), the mean gap of the tilted measure P^{c*}.
    Boundary regime (sup g < eta^2, only for QoIs bounded on that side): Xi = lim H(c)/c.
    """
    if not eta_sq > 0:
        raise DomainError(f"solve_tilt needs eta^2 > 0, got {eta_sq}")
    h = _side(h, sign)
    if h.is_degenerate(config):
        raise DegenerateQoI("H''(0) = 0: the QoI is almost surely constant")

    edge = h.right_edge(config)
    exact_sup = h.g_sup(config)
    if exact_sup is not None and exact_sup < eta_sq:
        logger.debug("boundary regime: sup g = %r < eta^2 = %r", exact_sup, eta_sq)
        return _boundary_solution(h, eta_sq, edge, exact_sup, config)

    lo, hi = 0.0, min(config.c_start, edge)
    doublings = 0
    while h.g(hi) < eta_sq:
        if hi >= edge:
            sup_g = h.g(edge)
            logger.debug("boundary regime: g(%r) = %r < eta^2 = %r", edge, sup_g, eta_sq)
            return _boundary_solution(h, eta_sq, edge, sup_g, config)
        if doublings >= config.max_doublings:
            raise NonconvergenceError(f"no bracket for g(c) = {eta_sq} after {doublings} doublings")
        lo, hi = hi, min(2.0 * hi, edge)
        doublings += 1
    logger.debug("bracket [%r, %r] after %d doublings", lo, hi, doublings)

    c_star, result = optimize.bisect(
        lambda c: h.g(c) - eta_sq,
        lo,
        hi,
        xtol=config.xtol,
        maxiter=config.maxiter,
        full_output=True,
        disp=False,
    )
    if not result.converged:
        raise NonconvergenceError(f"bisection on g(c) = {eta_sq} did not converge: {result.flag}")
    residual = abs(h.g(c_star) - eta_sq)
    value = h.objective(c_star, eta_sq)
    if residual > config.residual_tol * max(1.0, eta_sq):
        logger.warning("tilt residual %.3g above tolerance at c*=%r; refining by direct minimization", residual, c_star)
        refined = optimize.minimize_scalar(
            lambda c: h.objective(c, eta_sq), bounds=(max(lo, config.c_start), hi), method="bounded"
        )
        if refined.success and refined.fun < value:
            value = float(refined.fun)
    return TiltedSolution(
        c_star=c_star,
        regime="interior",
        kl_attained=h.g(c_star),
        tilted_mean_gap=h.deriv1(c_star),
        value=max(value, 0.0),
        iterations=doublings + result.iterations,
        residual=residual,
    )


def go_solution(
    h: BaseCumulant, eta_sq: float, sign: Sign, config: SolverConfigSchema
) -> TiltedSolution | None:
    if eta_sq < 0 or not math.isfinite(eta_sq):
        raise DomainError(f"eta^2 must be finite and nonnegative, got {eta_sq}")
    side = _side(h, sign)
    if eta_sq == 0 or side.is_degenerate(config):
        return None
    return solve_tilt(side, eta_sq, "+", config)


def go_divergence(
    h: BaseCumulant, eta_sq: float, sign: Sign = "+", config: SolverConfigSchema = DEFAULT_SOLVER
) -> float:
    """Xi(Q||P; +-f) for R(Q||P) = eta_sq; 0 when eta_sq = 0 or the QoI is constant."""
    solution = go_solution(h, eta_sq, sign, config)
    return 0.0 if solution is None else solution.value


def go_certificate(h: BaseCumulant, eta_sq: float, config: SolverConfigSchema = DEFAULT_SOLVER) -> BiasCertificate:
    return BiasCertificate.from_solutions(
        eta_sq,
        lower=go_solution(h, eta_sq, "-", config),
        upper=go_solution(h, eta_sq, "+", config),
        method="goal-oriented",
    )


def linearized_go(variance: float, eta_sq: float) -> float:
    """sqrt(var_P[f]) sqrt(2 eta^2): the first-order term of Xi in eta."""
    if variance < 0 or eta_sq < 0:
        raise DomainError(f"variance and eta^2 must be nonnegative, got ({variance}, {eta_sq})")
    return math.sqrt(variance) * math.sqrt(2.0 * eta_sq)


def relative_bias_band(mu: float, sigma: float, eta_sq: float) -> tuple[float, float]:
    """Relative bias band +-c_v sqrt(2) eta of a Gaussian (or sub-Gaussian) QoI, c_v = sigma/|mu|."""
    if mu == 0:
        raise DomainError("the coefficient of variation is undefined for a zero mean")
    if sigma < 0 or eta_sq < 0:
        raise DomainError(f"sigma and eta^2 must be nonnegative, got ({sigma}, {eta_sq})")
    half = sigma / abs(mu) * math.sqrt(2.0 * eta_sq)
    return -half, half
