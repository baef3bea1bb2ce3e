import math

from pydantic import Field

from infobound.base.schema import BaseSchema
from infobound.concentration import IntervalSubGaussian
from infobound.cumulant import ClosedFormCumulant
from infobound.errors import Unsupported


class ExponentialModel(BaseSchema):
    rate: float = Field(gt=0)

    @property
    def mean(self) -> float:
        return 1.0 / self.rate


def exponential_centered_cgf(model: ExponentialModel) -> ClosedFormCumulant:
    """H(c) = -log(1 - c/lambda) - c/lambda on (-inf, lambda)."""
    lam = model.rate
    return ClosedFormCumulant(
        lambda c: -math.log1p(-c / lam) - c / lam,
        lambda c: 1.0 / (lam - c) - 1.0 / lam,
        lambda c: 1.0 / (lam - c) ** 2,
        domain_hi=lam,
        lower=-1.0 / lam,
    )


def sub_exponential_envelope(model: ExponentialModel) -> IntervalSubGaussian:
    """exp(c^2 / (2 sigma_B^2)) with sigma_B = 1/2 on |c| < 1/2, for Exp(1).

    Centered form of M(c; X) = 1/(1-c) <= 1 + c + 2c^2 <= exp(c + 2c^2); the drift c is removed.
    """
    if model.rate != 1.0:
        raise Unsupported(f"the sub-exponential envelope is derived for rate 1 only, got {model.rate}")
    return IntervalSubGaussian(sigma_b=0.5, c_max=0.5, drift=1.0)
