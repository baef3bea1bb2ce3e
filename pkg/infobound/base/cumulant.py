import logging
import math
from abc import ABC, abstractmethod

from infobound.config import DEFAULT_SOLVER, SolverConfigSchema
from infobound.errors import DomainError

logger = logging.getLogger(__name__)


class BaseCumulant(ABC):
    """Cumulant generating function H(c) = log E_P[exp(c * f~)] of a centered QoI f~.

    H is finite on the open interval (domain_lo, domain_hi); `upper` and `lower` are the
    essential bounds of f~ under P (+/-inf when unbounded or unknown).
    """

    domain_lo: float = -math.inf
    domain_hi: float = math.inf
    upper: float = math.inf
    lower: float = -math.inf

    @abstractmethod
    def _eval(self, c: float) -> float: ...

    @abstractmethod
    def _deriv1(self, c: float) -> float: ...

    @abstractmethod
    def _deriv2(self, c: float) -> float: ...

    def contains(self, c: float) -> bool:
        return self.domain_lo < c < self.domain_hi

    def _check(self, c: float) -> float:
        if not self.contains(c):
            raise DomainError(f"c={c} outside the finiteness interval ({self.domain_lo}, {self.domain_hi})")
        return float(c)

    def eval(self, c: float) -> float:
        return self._eval(self._check(c))

    def deriv1(self, c: float) -> float:
        return self._deriv1(self._check(c))

    def deriv2(self, c: float) -> float:
        return self._deriv2(self._check(c))

    def g(self, c: float) -> float:
        """c*H'(c) - H(c): the KL divergence of the tilted measure P^c from P."""
        c = self._check(c)
        if c == 0.0:
            return 0.0
        return c * self._deriv1(c) - self._eval(c)

    def objective(self, c: float, eta_sq: float) -> float:
        """(H(c) + eta^2) / c, an upper bound on the bias for every admissible c > 0."""
        return (self.eval(c) + eta_sq) / c

    def right_edge(self, config: SolverConfigSchema = DEFAULT_SOLVER) -> float:
        """Largest c the solvers evaluate on the positive side."""
        if math.isfinite(self.domain_hi):
            return self.domain_hi * (1.0 - config.domain_margin)
        return config.c_cap

    def g_sup(self, config: SolverConfigSchema = DEFAULT_SOLVER) -> float | None:
        """Exact supremum of g on (0, domain_hi) when known in closed form, else None."""
        return None

    def boundary_gap(self, config: SolverConfigSchema = DEFAULT_SOLVER) -> float:
        """lim H(c)/c at the right end of the domain."""
        if math.isinf(self.domain_hi) and math.isfinite(self.upper):
            return self.upper
        edge = self.right_edge(config)
        return self.eval(edge) / edge

    def is_degenerate(self, config: SolverConfigSchema = DEFAULT_SOLVER) -> bool:
        return self.deriv2(0.0) <= config.degenerate_variance

    def mirror(self) -> "BaseCumulant":
        """Cumulant of -f~, whose positive side is the negative side of this one."""
        return MirroredCumulant(self)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(domain=({self.domain_lo}, {self.domain_hi}))"


class MirroredCumulant(BaseCumulant):
    def __init__(self, base: BaseCumulant):
        self.base = base
        self.domain_lo = -base.domain_hi
        self.domain_hi = -base.domain_lo
        self.upper = -base.lower
        self.lower = -base.upper

    def _eval(self, c: float) -> float:
        return self.base._eval(-c)

    def _deriv1(self, c: float) -> float:
        return -self.base._deriv1(-c)

    def _deriv2(self, c: float) -> float:
        return self.base._deriv2(-c)

    def mirror(self) -> BaseCumulant:
        return self.base
