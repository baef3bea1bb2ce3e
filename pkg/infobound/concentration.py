"""
Concentration envelopes Phi(c) >= M_P(c; f~) and the concentration/information divergence

    U+-(eta; F) = inf_{c>0} (log Phi(+-c) + eta^2) / c

which bounds the bias of every QoI in the admissible family F_P = {g: M_P(c; g~) <= Phi(c)}.
"""

import logging
import math
from abc import abstractmethod
from collections.abc import Sequence
from typing import Annotated, Any, ClassVar, Literal

import numpy as np
from pydantic import AliasChoices, ConfigDict, Field, TypeAdapter, model_validator

from infobound.base.cumulant import BaseCumulant
from infobound.base.schema import BaseSchema
from infobound.config import DEFAULT_SOLVER, SolverConfigSchema
from infobound.cumulant import ClosedFormCumulant, DiscreteCumulant, gaussian_cgf
from infobound.divergence import BiasCertificate, Sign, TiltedSolution, go_solution
from infobound.errors import DomainError, PreconditionViolation

logger = logging.getLogger(__name__)

HIERARCHY_TOL = 1e-12
# exp overflows a double just above this exponent
_LOG_MAX = 709.0


def _exp(log_value: float) -> float:
    return math.inf if log_value > _LOG_MAX else math.exp(log_value)


def _check_eta_sq(eta_sq: float) -> None:
    if eta_sq < 0 or not math.isfinite(eta_sq):
        raise DomainError(f"eta^2 must be finite and nonnegative, got {eta_sq}")


class BaseBound(BaseSchema):
    """Common behaviour of the envelope variants; `envelope()` is the cumulant-like function log Phi."""

    variant: str

    @abstractmethod
    def envelope(self) -> BaseCumulant: ...

    @abstractmethod
    def curvature(self) -> float:
        """Phi''(0); U+-(eta)/eta -> sqrt(2 Phi''(0)) as eta -> 0."""

    @abstractmethod
    def describe(self) -> str: ...

    def log_phi(self, c: float) -> float:
        return self.envelope().eval(c)

    def phi(self, c: float) -> float:
        return _exp(self.log_phi(c))

    def solution(
        self, eta_sq: float, sign: Sign = "+", config: SolverConfigSchema = DEFAULT_SOLVER
    ) -> TiltedSolution | None:
        """Minimizer of (log Phi(+-c) + eta^2)/c; None when the band collapses to 0."""
        _check_eta_sq(eta_sq)
        return go_solution(self.envelope(), eta_sq, sign, config)

    def u_divergence(self, eta_sq: float, sign: Sign = "+", config: SolverConfigSchema = DEFAULT_SOLVER) -> float:
        solution = self.solution(eta_sq, sign, config)
        return 0.0 if solution is None else solution.value


def _closed_form_solution(variance: float, eta_sq: float) -> TiltedSolution | None:
    """Minimizer of (variance c^2 / 2 + eta^2) / c."""
    if eta_sq == 0 or variance == 0:
        return None
    c_star = math.sqrt(2.0 * eta_sq / variance)
    value = math.sqrt(2.0 * variance * eta_sq)
    return TiltedSolution(c_star=c_star, regime="interior", kl_attained=eta_sq, tilted_mean_gap=value, value=value)


class SubGaussian(BaseBound):
    variant: Literal["subgaussian"] = "subgaussian"
    sigma_b: float = Field(ge=0)

    def envelope(self) -> BaseCumulant:
        return gaussian_cgf(self.sigma_b)

    def log_phi(self, c: float) -> float:
        return 0.5 * self.sigma_b**2 * c * c

    def curvature(self) -> float:
        return self.sigma_b**2

    def solution(
        self, eta_sq: float, sign: Sign = "+", config: SolverConfigSchema = DEFAULT_SOLVER
    ) -> TiltedSolution | None:
        # symmetric envelope: both signs share sigma_B sqrt(2) eta
        _check_eta_sq(eta_sq)
        return _closed_form_solution(self.curvature(), eta_sq)

    def describe(self) -> str:
        return f"QoIs g with E_P[exp(c g~)] <= exp(c^2 {self.sigma_b**2:g} / 2) for all real c"


class IntervalSubGaussian(BaseBound):
    """Phi(c) = exp(c^2 / (2 sigma_B^2)) for |c| < c_max, +inf outside.

    `drift` records the linear term exp(drift * c) removed from an uncentered bound.
    """

    variant: Literal["interval_subgaussian"] = "interval_subgaussian"
    sigma_b: float = Field(gt=0)
    c_max: float = Field(gt=0)
    drift: float = 0.0

    def envelope(self) -> BaseCumulant:
        v = self.curvature()
        return ClosedFormCumulant(
            lambda c: 0.5 * v * c * c,
            lambda c: v * c,
            lambda c: v,
            domain_lo=-self.c_max,
            domain_hi=self.c_max,
        )

    def log_phi(self, c: float) -> float:
        if abs(c) >= self.c_max:
            return math.inf
        return 0.5 * c * c / self.sigma_b**2

    def curvature(self) -> float:
        return 1.0 / self.sigma_b**2

    def solution(
        self, eta_sq: float, sign: Sign = "+", config: SolverConfigSchema = DEFAULT_SOLVER
    ) -> TiltedSolution | None:
        _check_eta_sq(eta_sq)
        interior = _closed_form_solution(self.curvature(), eta_sq)
        if interior is None or interior.c_star < self.c_max:
            return interior
        # unconstrained minimizer past the finiteness interval: the objective decreases up to c_max
        v, c = self.curvature(), self.c_max
        value = 0.5 * v * c + eta_sq / c
        logger.debug("interval sub-Gaussian at boundary: c* would be %r >= c_max %r", interior.c_star, c)
        return TiltedSolution(
            c_star=c, regime="boundary", kl_attained=0.5 * v * c * c, tilted_mean_gap=value, value=value
        )

    def describe(self) -> str:
        return (
            f"QoIs g with E_P[exp(c g~)] <= exp(c^2 / (2 * {self.sigma_b**2:g})) for |c| < {self.c_max:g}"
        )


class Bennett(BaseBound):
    """Bennett envelope for f <= b with variance at most sigma_B^2, valid for c >= 0.

    log Phi is the cumulant of the two-point law {-sigma_B^2/b~, b~}; the lower side needs the
    optional lower bound `a` and is Bennett applied to -f.
    """

    variant: Literal["bennett"] = "bennett"
    b: float = Field(validation_alias=AliasChoices("b", "b_upper"))
    mu: float
    sigma_b: float = Field(gt=0)
    a: float | None = None

    @model_validator(mode="after")
    def _check(self):
        if self.mu > self.b:
            raise ValueError(f"mean {self.mu} exceeds the upper bound {self.b}")
        if self.a is not None and self.a > self.mu:
            raise ValueError(f"lower bound {self.a} exceeds the mean {self.mu}")
        return self

    @classmethod
    def from_variance(cls, b: float, mu: float, sigma_sq: float, a: float | None = None) -> "Bennett":
        return cls(b=b, mu=mu, sigma_b=math.sqrt(sigma_sq), a=a)

    def envelope(self) -> BaseCumulant:
        b_tilde = self.b - self.mu
        var = self.sigma_b**2
        if b_tilde == 0:
            return DiscreteCumulant([0.0])
        return DiscreteCumulant([-var / b_tilde, b_tilde], [b_tilde**2 / (b_tilde**2 + var), var / (b_tilde**2 + var)])

    def log_phi(self, c: float) -> float:
        if c < 0:
            raise DomainError(f"the Bennett envelope holds for c >= 0 only, got c={c}")
        return super().log_phi(c)

    def curvature(self) -> float:
        return self.sigma_b**2

    def mirrored(self) -> "Bennett":
        """Bennett envelope of -f, built from the lower bound."""
        if self.a is None:
            raise DomainError("the lower Bennett bound needs a lower bound `a` on the QoI")
        return Bennett(b=-self.a, mu=-self.mu, sigma_b=self.sigma_b, a=-self.b)

    def solution(
        self, eta_sq: float, sign: Sign = "+", config: SolverConfigSchema = DEFAULT_SOLVER
    ) -> TiltedSolution | None:
        _check_eta_sq(eta_sq)
        if eta_sq == 0:
            return None
        if sign == "-":
            return self.mirrored().solution(eta_sq, "+", config)
        return go_solution(self.envelope(), eta_sq, "+", config)

    def describe(self) -> str:
        text = f"QoIs g <= {self.b:g} with E_P[g] = {self.mu:g} and Var_P[g] <= {self.sigma_b**2:g}"
        return text if self.a is None else f"{text} and g >= {self.a:g}"


class BennettAB(BaseBound):
    """Bennett-(a,b): the MGF of the two-point law on {a, b} with mean mu, the worst case on [a, b]."""

    variant: Literal["bennett_ab"] = "bennett_ab"
    a: float
    b: float
    mu: float

    @model_validator(mode="after")
    def _check(self):
        if not self.a <= self.mu <= self.b:
            raise ValueError(f"need a <= mu <= b, got ({self.a}, {self.mu}, {self.b})")
        if self.a == self.b:
            raise ValueError("need a < b")
        return self

    def envelope(self) -> BaseCumulant:
        a_tilde, b_tilde = self.a - self.mu, self.b - self.mu
        width = self.b - self.a
        return DiscreteCumulant([a_tilde, b_tilde], [b_tilde / width, -a_tilde / width])

    def curvature(self) -> float:
        return (self.mu - self.a) * (self.b - self.mu)

    def describe(self) -> str:
        return f"QoIs g with values in [{self.a:g}, {self.b:g}] and E_P[g] = {self.mu:g}"


class Hoeffding(BaseBound):
    variant: Literal["hoeffding"] = "hoeffding"
    a: float
    b: float

    @model_validator(mode="after")
    def _check(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got ({self.a}, {self.b})")
        return self

    def as_subgaussian(self) -> SubGaussian:
        return SubGaussian(sigma_b=(self.b - self.a) / 2)

    def envelope(self) -> BaseCumulant:
        return self.as_subgaussian().envelope()

    def log_phi(self, c: float) -> float:
        return c * c * (self.b - self.a) ** 2 / 8

    def curvature(self) -> float:
        return (self.b - self.a) ** 2 / 4

    def solution(
        self, eta_sq: float, sign: Sign = "+", config: SolverConfigSchema = DEFAULT_SOLVER
    ) -> TiltedSolution | None:
        # (b-a) eta / sqrt(2): the minimum of c (b-a)^2 / 8 + eta^2 / c
        return self.as_subgaussian().solution(eta_sq, sign, config)

    def describe(self) -> str:
        return f"QoIs g with values in [{self.a:g}, {self.b:g}]"


class ExplicitMGF(BaseBound):
    """Phi = the true MGF of a known cumulant; U+- is then the GO divergence itself."""

    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True)

    variant: Literal["explicit_mgf"] = "explicit_mgf"
    cumulant: BaseCumulant = Field(exclude=True)

    def envelope(self) -> BaseCumulant:
        return self.cumulant

    def curvature(self) -> float:
        return self.cumulant.deriv2(0.0)

    def describe(self) -> str:
        return f"QoIs g with E_P[exp(c g~)] <= exp(H(c)) for {self.cumulant!r}"


ConcentrationBound = Annotated[
    SubGaussian | IntervalSubGaussian | Bennett | BennettAB | Hoeffding | ExplicitMGF,
    Field(discriminator="variant"),
]
_BOUND_ADAPTER: TypeAdapter[Any] = TypeAdapter(ConcentrationBound)


def load_bound(data: dict[str, Any] | str | bytes) -> BaseBound:
    """Parse the tagged JSON form, e.g. {"variant": "bennett_ab", "a": -1, "b": 1, "mu": 0}."""
    if isinstance(data, dict):
        return _BOUND_ADAPTER.validate_python(data)
    return _BOUND_ADAPTER.validate_json(data)


class AdmissibleFamilyDescriptor(BaseSchema):
    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True)

    bound: ConcentrationBound
    description: str


class HierarchyViolation(BaseSchema):
    c: float
    tighter: str
    looser: str
    excess: float


def phi_eval(bound: BaseBound, c: float) -> float:
    return bound.phi(c)


def u_divergence(
    bound: BaseBound, eta_sq: float, sign: Sign = "+", config: SolverConfigSchema = DEFAULT_SOLVER
) -> float:
    return bound.u_divergence(eta_sq, sign, config)


def bias_band(bound: BaseBound, eta_sq: float, config: SolverConfigSchema = DEFAULT_SOLVER) -> BiasCertificate:
    """-U-(eta) <= E_Q[g] - E_P[g] <= U+(eta) for every g in the family and every Q in the ball."""
    return BiasCertificate.from_solutions(
        eta_sq,
        lower=bound.solution(eta_sq, "-", config),
        upper=bound.solution(eta_sq, "+", config),
        method="concentration-family",
    )


def phi_curvature(bound: BaseBound) -> float:
    return bound.curvature()


def admissible_family(bound: BaseBound) -> AdmissibleFamilyDescriptor:
    return AdmissibleFamilyDescriptor(bound=bound, description=bound.describe())


def hierarchy_check(
    mu: float,
    a: float,
    b: float,
    sigma_sq_true: float,
    c_grid: Sequence[float] | np.ndarray,
    true_cgf: BaseCumulant | None = None,
) -> list[HierarchyViolation]:
    """Check M_P <= Bennett <= Bennett-(a,b) <= Hoeffding on c_grid.

    Levels are compared as log Phi, so HIERARCHY_TOL is a relative tolerance on Phi and `excess`
    is reported in log units; Phi itself overflows long before log Phi does. The true MGF level is
    included when `true_cgf` is given.
    """
    if not a <= mu <= b or a == b:
        raise PreconditionViolation(f"need a <= mu <= b and a < b, got ({a}, {mu}, {b})")
    max_var = (mu - a) * (b - mu)
    if sigma_sq_true < 0 or sigma_sq_true > max_var * (1 + 1e-12) + 1e-15:
        raise PreconditionViolation(f"variance {sigma_sq_true} outside [0, (mu-a)(b-mu)] = [0, {max_var}]")
    grid = np.asarray(c_grid, dtype=float)
    if (grid < 0).any():
        raise PreconditionViolation("the hierarchy holds for c >= 0 only")

    levels: list[tuple[str, Any]] = []
    if true_cgf is not None:
        levels.append(("mgf", true_cgf.eval))
    if sigma_sq_true > 0:
        levels.append(("bennett", Bennett.from_variance(b, mu, sigma_sq_true).log_phi))
    else:
        levels.append(("bennett", lambda c: 0.0))
    levels.append(("bennett_ab", BennettAB(a=a, b=b, mu=mu).log_phi))
    levels.append(("hoeffding", Hoeffding(a=a, b=b).log_phi))

    violations = []
    for c in grid.tolist():
        values = [(name, fn(c)) for name, fn in levels]
        for (tight_name, tight), (loose_name, loose) in zip(values, values[1:]):
            if tight - loose > HIERARCHY_TOL:
                violations.append(HierarchyViolation(c=c, tighter=tight_name, looser=loose_name, excess=tight - loose))
    if violations:
        logger.warning("%d hierarchy violations for mu=%r a=%r b=%r", len(violations), mu, a, b)
    return violations


def bennett_contour(
    sigma_grid: Sequence[float] | np.ndarray,
    eta_sq_grid: Sequence[float] | np.ndarray,
    b: float = 1.0,
    mu: float = 0.0,
    config: SolverConfigSchema = DEFAULT_SOLVER,
) -> np.ndarray:
    """U+ of the Bennett envelope on the (sigma_B, eta^2) grid; rows follow sigma_grid."""
    surface = np.empty((len(sigma_grid), len(eta_sq_grid)))
    for i, sigma in enumerate(sigma_grid):
        bound = Bennett(b=b, mu=mu, sigma_b=sigma)
        for j, eta_sq in enumerate(eta_sq_grid):
            surface[i, j] = bound.u_divergence(float(eta_sq), "+", config)
    return surface
