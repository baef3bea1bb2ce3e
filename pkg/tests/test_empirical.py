import math

import numpy as np
import pytest
from pydantic import ValidationError

from infobound.empirical import (
    MomentEstimate,
    empirical_cgf,
    mean_estimate,
    mgf_cost_profile,
    mgf_estimate,
    variance_estimate,
)
from infobound.errors import EmptySample, OverflowGuard, TooFewPoints


def test_mean_estimate():
    estimate = mean_estimate([0.0, 1.0])
    assert estimate.value == 0.5
    assert estimate.variance_of_estimator == pytest.approx(0.25)
    assert estimate.n == 2
    assert mean_estimate([3.0] * 5).variance_of_estimator == 0.0


def test_mean_estimate_bernoulli(rng):
    n = 10_000
    sample = rng.choice([-1.0, 1.0], size=n)
    assert mean_estimate(sample).variance_of_estimator == pytest.approx(1 / n, rel=0.05)


def test_short_samples():
    with pytest.raises(EmptySample):
        mean_estimate([])
    with pytest.raises(TooFewPoints):
        variance_estimate([1.0])


def test_variance_estimate():
    assert variance_estimate([0.0, 2.0]).value == pytest.approx(2.0)
    assert variance_estimate([0.0, 2.0], bias_adjusted=False).value == pytest.approx(1.0)
    assert variance_estimate([0.0, 2.0]).variance_of_estimator == pytest.approx(8.0)
    assert variance_estimate([1.0, 1.0, 1.0]).value == 0.0


def test_variance_pairwise_identity(rng):
    for _ in range(10):
        x = rng.normal(size=int(rng.integers(2, 30)))
        n = x.size
        pairwise = ((x[:, None] - x[None, :]) ** 2).sum() / (2 * n * (n - 1))
        assert variance_estimate(x).value == pytest.approx(pairwise, abs=1e-12)


def test_mgf_estimate():
    estimate = mgf_estimate([-1.0, 1.0, 2.0], 0.0)
    assert estimate.value == 1.0
    assert estimate.variance_of_estimator == 0.0


def test_mgf_estimate_bernoulli(rng):
    sample = rng.choice([-1.0, 1.0], size=100_000)
    assert mgf_estimate(sample, 1.0).value == pytest.approx(math.cosh(1.0), abs=0.01)


def test_mgf_estimator_variance_scales_with_c_squared(rng):
    sample = rng.normal(size=1000)
    sample = (sample - sample.mean()) / sample.std(ddof=1)
    ratio = mgf_estimate(sample, 2.0).variance_of_estimator / mgf_estimate(sample, 1.0).variance_of_estimator
    assert ratio == pytest.approx(4.0, rel=1e-9)


def test_mgf_overflow_guard():
    with pytest.raises(OverflowGuard):
        mgf_estimate([0.0, 800.0], 1.0)


def test_empirical_cgf_balanced_sample():
    h = empirical_cgf([-1.0, 1.0, 1.0, -1.0])
    for c in (-2.0, 0.3, 5.0):
        assert h.eval(c) == pytest.approx(math.log(math.cosh(c)), abs=1e-14)


def test_empirical_cgf_constant_sample():
    h = empirical_cgf([2.5, 2.5, 2.5])
    assert h.eval(1.7) == pytest.approx(0.0, abs=1e-15)
    assert h.is_degenerate()


def test_empirical_cgf_identities(rng):
    x = rng.exponential(size=200)
    h = empirical_cgf(x)
    assert h.eval(0.0) == pytest.approx(0.0, abs=1e-12)
    assert h.deriv1(0.0) == pytest.approx(0.0, abs=1e-10)
    assert h.deriv2(0.0) == pytest.approx(variance_estimate(x, bias_adjusted=False).value, abs=1e-10)


def test_mgf_cost_grows_with_eta(rng):
    sample = rng.normal(size=500)
    profile = mgf_cost_profile(sample, [0.1, 0.2, 0.4, 0.8])
    c_stars = [point.c_star for point in profile]
    costs = [point.mgf_estimator_variance for point in profile]
    assert c_stars == sorted(c_stars)
    assert costs == sorted(costs)
    assert costs[-1] >= 16 * costs[0] * 0.9


def test_estimates_are_reproducible(seed):
    first = np.random.default_rng(seed).normal(size=50)
    second = np.random.default_rng(seed).normal(size=50)
    assert mgf_estimate(first, 0.4) == mgf_estimate(second, 0.4)
    assert variance_estimate(first) == variance_estimate(second)


def test_moment_estimate_validation():
    with pytest.raises(ValidationError):
        MomentEstimate(value=1.0, variance_of_estimator=-1.0, n=3)
    with pytest.raises(ValidationError):
        MomentEstimate(value=math.nan, variance_of_estimator=0.0, n=3)
    assert MomentEstimate(value=0.0, variance_of_estimator=0.04, n=3).standard_error == pytest.approx(0.2)
