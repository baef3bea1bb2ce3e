"""
Bias bounds for statistical estimators through the bounded differences condition.

An estimator whose value moves by at most d_k when the k-th observation changes is sub-Gaussian
with sigma_B^2 = sum(d_k^2) / 4 (McDiarmid), so its bias under any product model Q^n is bounded
independently of n when d_k = C/n. The DKW band plus the model-bias term gives a CDF band valid
for every Q in the KL ball and every sample size.
"""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import Literal

import numpy as np
from pydantic import Field, model_validator

from infobound.base.schema import BaseSchema
from infobound.concentration import SubGaussian
from infobound.errors import DomainError, EmptySample, LengthMismatch

logger = logging.getLogger(__name__)

Mode = Literal["paper", "optimized"]
ArrayLike = Sequence[float] | np.ndarray


class BoundedDifferences(BaseSchema):
    d: list[float]
    n: int = Field(ge=1)
    iid_c: float | None = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _check(self):
        if len(self.d) != self.n:
            raise ValueError(f"{len(self.d)} oscillation constants for n={self.n}")
        if min(self.d) < 0:
            raise ValueError("oscillation constants must be nonnegative")
        if self.iid_c is not None and not np.allclose(self.d, self.iid_c / self.n, rtol=1e-12, atol=0.0):
            raise ValueError(f"iid_c={self.iid_c} requires every d_k = C/n = {self.iid_c / self.n}")
        return self

    @classmethod
    def iid(cls, c: float, n: int) -> "BoundedDifferences":
        """d_k = C/n for every coordinate."""
        return cls(d=[c / n] * n, n=n, iid_c=c)

    @property
    def sum_sq(self) -> float:
        if self.iid_c is not None:
            return self.iid_c**2 / self.n
        return math.fsum(x * x for x in self.d)


class ConfidenceBand(BaseSchema):
    """L_n(x; eta) <= F_Q(x) <= U_n(x; eta) for all x, with probability at least 1 - alpha."""

    xs: list[float]
    lower: list[float]
    upper: list[float]
    alpha: float = Field(gt=0, lt=1)
    eta: float = Field(ge=0)
    n: int = Field(ge=1)

    @model_validator(mode="after")
    def _check(self):
        if not len(self.xs) == len(self.lower) == len(self.upper):
            raise ValueError("xs, lower and upper must have the same length")
        lo, up = np.asarray(self.lower), np.asarray(self.upper)
        if (lo < 0).any() or (up > 1).any() or (lo > up).any():
            raise ValueError("band must satisfy 0 <= lower <= upper <= 1")
        order = np.argsort(self.xs, kind="stable")
        if (np.diff(lo[order]) < 0).any() or (np.diff(up[order]) < 0).any():
            raise ValueError("band limits must be nondecreasing in x")
        return self

    @property
    def epsilon_n(self) -> float:
        return dkw_epsilon(self.n, self.alpha)

    def sidecar(self) -> dict[str, float | int]:
        return {"alpha": self.alpha, "eta": self.eta, "n": self.n, "epsilon_n": self.epsilon_n}


def mcdiarmid_mgf_envelope(bd: BoundedDifferences) -> SubGaussian:
    """exp(c^2 sum(d_k^2) / 8) written as a sub-Gaussian envelope."""
    return SubGaussian(sigma_b=math.sqrt(bd.sum_sq / 4))


def estimator_bias_bound(bd: BoundedDifferences, kl_per_coordinate: ArrayLike, mode: Mode = "paper") -> float:
    """Bias bound of a bounded-differences estimator under Q_1 x ... x Q_n.

    `paper` returns sqrt(sum d_k^2) sqrt(2 sum R); `optimized` returns the minimized
    concentration divergence of the McDiarmid envelope, sqrt(sum d_k^2 sum R / 2).
    The relation is an upper bound on |E_Q[T] - E_P[T]|.
    """
    kl = np.asarray(kl_per_coordinate, dtype=float)
    if kl.size != bd.n:
        raise LengthMismatch(f"{kl.size} KL values for n={bd.n}")
    if (kl < 0).any():
        raise DomainError("KL divergences must be nonnegative")
    total = math.fsum(kl.tolist())
    if mode == "paper":
        return math.sqrt(bd.sum_sq) * math.sqrt(2.0 * total)
    if mode == "optimized":
        return mcdiarmid_mgf_envelope(bd).u_divergence(total)
    raise DomainError(f"unknown mode {mode!r}")


def cdf_bias_bound(kl: float) -> float:
    if kl < 0:
        raise DomainError(f"KL must be nonnegative, got {kl}")
    return math.sqrt(2.0 * kl)


def sample_variance_bias_bound(m_abs: float, n: int, kl: float, asymptotic: bool = False) -> float:
    """8 M^2 n/(n-1) sqrt(2 R(Q||P)) for |X| <= M; `asymptotic` drops the n/(n-1) factor."""
    if m_abs <= 0:
        raise DomainError(f"M must be positive, got {m_abs}")
    if kl < 0:
        raise DomainError(f"KL must be nonnegative, got {kl}")
    if asymptotic:
        return 8.0 * m_abs**2 * math.sqrt(2.0 * kl)
    if n < 2:
        raise DomainError(f"the sample variance needs n >= 2, got {n}")
    return 8.0 * m_abs**2 * n / (n - 1) * math.sqrt(2.0 * kl)


def sample_variance_oscillation(sample_size: int, m_abs: float, trials: int = 1000, seed: int = 0) -> float:
    """Largest observed change of V_n when one coordinate of a sample in [-M, M]^n is replaced.

    Extreme points of the cube are mixed in with uniform draws, where the oscillation is largest.
    """
    if sample_size < 2:
        raise DomainError(f"the sample variance needs n >= 2, got {sample_size}")
    rng = np.random.default_rng(seed)
    x = rng.uniform(-m_abs, m_abs, size=(trials, sample_size))
    corners = rng.random((trials, sample_size)) < 0.5
    x = np.where(corners, np.sign(x) * m_abs, x)
    k = rng.integers(sample_size, size=trials)
    replaced = x.copy()
    replaced[np.arange(trials), k] = rng.choice([-m_abs, m_abs], size=trials)
    diff = np.abs(np.var(x, axis=1, ddof=1) - np.var(replaced, axis=1, ddof=1))
    return float(diff.max())


def empirical_cdf(sample: ArrayLike, x: float | ArrayLike) -> float | np.ndarray:
    """F_n(x) = #{X_k <= x} / n, right-continuous."""
    data = np.sort(np.asarray(sample, dtype=float))
    if data.size == 0:
        raise EmptySample("empirical CDF of an empty sample")
    values = np.searchsorted(data, x, side="right") / data.size
    return float(values) if np.ndim(values) == 0 else values


def dkw_epsilon(n: int, alpha: float) -> float:
    """sqrt(log(2/alpha) / (2n))."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def default_grid(sample: ArrayLike) -> np.ndarray:
    """Sorted sample with -inf / +inf sentinels."""
    return np.concatenate(([-np.inf], np.sort(np.asarray(sample, dtype=float)), [np.inf]))


def confidence_band(
    sample: ArrayLike, xs: ArrayLike | None = None, alpha: float = 0.05, eta: float = 0.0
) -> ConfidenceBand:
    if eta < 0:
        raise DomainError(f"eta must be nonnegative, got {eta}")
    data = np.asarray(sample, dtype=float)
    if data.size == 0:
        raise EmptySample("confidence band of an empty sample")
    grid = default_grid(data) if xs is None else np.asarray(xs, dtype=float)
    half_width = math.sqrt(2.0) * eta + dkw_epsilon(data.size, alpha)
    f_n = np.atleast_1d(empirical_cdf(data, grid))
    return ConfidenceBand(
        xs=grid.tolist(),
        lower=np.clip(f_n - half_width, 0.0, 1.0).tolist(),
        upper=np.clip(f_n + half_width, 0.0, 1.0).tolist(),
        alpha=alpha,
        eta=eta,
        n=int(data.size),
    )


def pinsker_bound(f_sup: float, n: int, kl: float) -> float:
    """||f||_inf sqrt(2 n R(Q||P)): Pinsker on the product measure, which grows like sqrt(n)."""
    if f_sup < 0 or n < 1 or kl < 0:
        raise DomainError(f"need f_sup >= 0, n >= 1, kl >= 0; got ({f_sup}, {n}, {kl})")
    return f_sup * math.sqrt(2.0 * n * kl)


def _covers_uniform(rng: np.random.Generator, n: int, alpha: float, eta: float) -> bool:
    sample = rng.random(n)
    # the band is checked at every jump and just left of it, where F_n takes its two values
    xs = np.concatenate((sample, np.nextafter(sample, -np.inf)))
    band = confidence_band(sample, xs, alpha, eta)
    truth = np.clip(xs, 0.0, 1.0)
    return bool(np.all(np.asarray(band.lower) <= truth) and np.all(truth <= np.asarray(band.upper)))


def band_coverage(
    trials: int, n: int, alpha: float = 0.05, eta: float = 0.0, seed: int = 0, workers: int = 4
) -> int:
    """Number of trials in which the band around a Uniform(0, 1) sample covers its CDF everywhere."""
    seeds = np.random.SeedSequence(seed).spawn(trials)

    def run(ss: np.random.SeedSequence) -> bool:
        return _covers_uniform(np.random.default_rng(ss), n, alpha, eta)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        covered = sum(pool.map(run, seeds))
    logger.debug("band coverage %d/%d (n=%d alpha=%r eta=%r)", covered, trials, n, alpha, eta)
    return int(covered)
