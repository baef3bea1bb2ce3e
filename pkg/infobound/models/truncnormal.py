import math

from pydantic import Field, model_validator
from scipy import stats

from infobound.base.schema import BaseSchema
from infobound.config import DEFAULT_QUADRATURE, QuadratureConfigSchema
from infobound.cumulant import QuadratureCumulant

_SQRT_2PI = math.sqrt(2.0 * math.pi)


class TruncatedNormalModel(BaseSchema):
    """N(mu, sigma^2) conditioned on (lo, hi); either end may be infinite."""

    mu: float = 0.0
    sigma: float = Field(default=1.0, gt=0)
    lo: float = -1.0
    hi: float = 1.0

    @model_validator(mode="after")
    def _check(self):
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got ({self.lo}, {self.hi})")
        if self.mass <= 0:
            raise ValueError(f"no normal mass on ({self.lo}, {self.hi})")
        return self

    @property
    def alpha(self) -> float:
        return (self.lo - self.mu) / self.sigma

    @property
    def beta(self) -> float:
        return (self.hi - self.mu) / self.sigma

    @property
    def mass(self) -> float:
        return float(stats.norm.cdf(self.beta) - stats.norm.cdf(self.alpha))

    def density(self):
        """Scalar density on [lo, hi]; plain math keeps quadrature fast."""
        mu, sigma, lo, hi = self.mu, self.sigma, self.lo, self.hi
        scale = 1.0 / (sigma * _SQRT_2PI * self.mass)

        def pdf(x: float) -> float:
            if x < lo or x > hi:
                return 0.0
            z = (x - mu) / sigma
            return scale * math.exp(-0.5 * z * z)

        return pdf

    def distribution(self):
        return stats.truncnorm(self.alpha, self.beta, loc=self.mu, scale=self.sigma)


def _z_phi(z: float) -> float:
    """z * phi(z), 0 at infinite z."""
    return 0.0 if math.isinf(z) else z * float(stats.norm.pdf(z))


def truncated_normal_moments(model: TruncatedNormalModel) -> tuple[float, float]:
    """Closed-form mean and variance of the truncated normal."""
    a, b, z = model.alpha, model.beta, model.mass
    pa, pb = float(stats.norm.pdf(a)), float(stats.norm.pdf(b))
    shift = (pa - pb) / z
    mean = model.mu + model.sigma * shift
    variance = model.sigma**2 * (1.0 + (_z_phi(a) - _z_phi(b)) / z - shift**2)
    return mean, variance


def truncated_normal_cgf(
    model: TruncatedNormalModel, config: QuadratureConfigSchema = DEFAULT_QUADRATURE
) -> QuadratureCumulant:
    """Cumulant of f(x) = x under the truncated normal, by quadrature."""
    return QuadratureCumulant(
        model.density(), (model.lo, model.hi), lambda x: x, f_bounds=(model.lo, model.hi), config=config
    )
