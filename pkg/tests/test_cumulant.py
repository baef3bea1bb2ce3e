import math

import numpy as np
import pytest

from infobound.base.cumulant import MirroredCumulant
from infobound.cumulant import DiscreteCumulant, gaussian_cgf, qoi_range
from infobound.divergence import cgf_discrete, cgf_quadrature, go_certificate
from infobound.errors import DomainError, LengthMismatch, PreconditionViolation
from infobound.models.exponential import ExponentialModel, exponential_centered_cgf


def test_discrete_cumulant_is_log_cosh(bernoulli):
    h = cgf_discrete(bernoulli)
    for c in (-3.0, -0.5, 0.0, 0.7, 4.0):
        assert h.eval(c) == pytest.approx(math.log(math.cosh(c)), abs=1e-14)
        assert h.deriv1(c) == pytest.approx(math.tanh(c), abs=1e-14)
        assert h.deriv2(c) == pytest.approx(1 - math.tanh(c) ** 2, abs=1e-14)


def test_discrete_cumulant_centers_values():
    h = DiscreteCumulant([2.0, 4.0], [0.25, 0.75])
    assert h.mean == pytest.approx(3.5)
    assert h.eval(0.0) == 0.0
    assert h.deriv1(0.0) == pytest.approx(0.0, abs=1e-15)
    assert h.deriv2(0.0) == pytest.approx(0.75)
    assert h.upper == pytest.approx(0.5)
    assert h.lower == pytest.approx(-1.5)


def test_discrete_cumulant_large_tilt_is_stable(two_point):
    h = cgf_discrete(two_point)
    # H(c)/c tends to the largest centered atom
    assert h.eval(2000.0) / 2000.0 == pytest.approx(1.0, rel=1e-3)
    assert math.isfinite(h.g(2000.0))


def test_discrete_g_sup_is_mass_of_top_atom(two_point):
    h = cgf_discrete(two_point)
    assert h.g_sup() == pytest.approx(-math.log(0.2))
    assert h.mirror().g_sup() == pytest.approx(-math.log(0.8))
    assert h.boundary_gap() == pytest.approx(1.0)


def test_discrete_length_mismatch():
    with pytest.raises(LengthMismatch):
        DiscreteCumulant([1.0, 2.0], [1.0])


def test_gaussian_cgf():
    h = gaussian_cgf(2.0)
    assert h.eval(1.5) == pytest.approx(4.5)
    assert h.deriv1(1.5) == pytest.approx(6.0)
    assert h.deriv2(0.0) == 4.0


def test_mirrored_cumulant():
    h = exponential_centered_cgf(ExponentialModel(rate=1.0))
    m = h.mirror()
    assert isinstance(m, MirroredCumulant)
    assert m.domain_lo == -1.0
    assert m.domain_hi == math.inf
    assert m.upper == 1.0
    assert m.eval(0.5) == pytest.approx(h.eval(-0.5))
    assert m.deriv1(0.5) == pytest.approx(-h.deriv1(-0.5))
    assert m.mirror() is h


def test_evaluation_outside_domain():
    h = exponential_centered_cgf(ExponentialModel(rate=1.0))
    with pytest.raises(DomainError):
        h.eval(1.0)
    with pytest.raises(DomainError):
        h.eval(2.0)


def test_quadrature_uniform():
    """Uniform(0, 1), f(x) = x: H(c) = log((e^c - 1)/c) - c/2"""
    h = cgf_quadrature(lambda x: 1.0, (0.0, 1.0), lambda x: x, f_bounds=(0.0, 1.0))
    assert h.mean == pytest.approx(0.5, abs=1e-9)
    for c in (-2.0, 0.5, 3.0):
        expected = math.log(math.expm1(c) / c) - c / 2
        assert h.eval(c) == pytest.approx(expected, abs=1e-8)
    assert h.deriv2(0.0) == pytest.approx(1 / 12, abs=1e-8)


def test_quadrature_rejects_unnormalized_density():
    with pytest.raises(PreconditionViolation):
        cgf_quadrature(lambda x: 2.0, (0.0, 1.0), lambda x: x)


def test_quadrature_matches_discrete_for_normal():
    sigma = 0.7
    density = lambda x: math.exp(-0.5 * (x / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))  # noqa: E731
    h = cgf_quadrature(density, (-np.inf, np.inf), lambda x: x)
    assert h.eval(1.3) == pytest.approx(gaussian_cgf(sigma).eval(1.3), abs=1e-7)


def _cumulants():
    uniform = cgf_quadrature(lambda x: 1.0, (0.0, 1.0), lambda x: x)
    exponential = exponential_centered_cgf(ExponentialModel(rate=1.0))
    return [
        pytest.param(DiscreteCumulant([-0.25, 1.0], [0.8, 0.2]), (-2.0, 0.5, 3.0), id="two-point"),
        pytest.param(gaussian_cgf(0.7), (-1.5, 0.4, 2.0), id="gaussian"),
        pytest.param(exponential, (-0.8, 0.3, 0.9), id="exponential"),
        pytest.param(MirroredCumulant(exponential), (-0.9, -0.3, 0.8), id="mirrored-exponential"),
        pytest.param(uniform, (-1.0, 0.5, 2.0), id="uniform-quadrature"),
    ]


@pytest.mark.parametrize("h,points", _cumulants())
def test_derivatives_match_finite_differences(h, points):
    step = 1e-5
    for c in points:
        fd1 = (h.eval(c + step) - h.eval(c - step)) / (2 * step)
        fd2 = (h.deriv1(c + step) - h.deriv1(c - step)) / (2 * step)
        assert h.deriv1(c) == pytest.approx(fd1, rel=1e-6, abs=1e-9)
        assert h.deriv2(c) == pytest.approx(fd2, rel=1e-6, abs=1e-9)


@pytest.mark.parametrize("h,points", _cumulants())
def test_g_is_monotone_away_from_zero(h, points):
    """g'(c) = c H''(c): g decreases on c < 0 and increases on c > 0"""
    hi = min(3.0, 0.99 * h.domain_hi)
    lo = max(-3.0, 0.99 * h.domain_lo)
    right = [h.g(c) for c in np.linspace(0.0, hi, 40)]
    left = [h.g(c) for c in np.linspace(0.0, lo, 40)]
    assert min(right + left) >= -1e-10
    assert (np.diff(right) >= -1e-10).all()
    assert (np.diff(left) >= -1e-10).all()


def test_quadrature_exponential():
    """Exp(1), f(x) = x: H(c) = -log(1 - c) - c on (-inf, 1)"""
    h = cgf_quadrature(lambda x: math.exp(-x), (0.0, np.inf), lambda x: x, c_domain=(-np.inf, 1.0))
    assert h.domain_hi == 1.0
    assert h.mean == pytest.approx(1.0, abs=1e-8)
    closed = exponential_centered_cgf(ExponentialModel(rate=1.0))
    for c in (-1.0, 0.3, 0.6):
        assert h.eval(c) == pytest.approx(closed.eval(c), abs=1e-7)
        assert h.deriv1(c) == pytest.approx(closed.deriv1(c), abs=1e-7)
    with pytest.raises(DomainError):
        h.eval(1.0)


def test_quadrature_bounds_default_to_qoi_range():
    density = lambda x: 1.0  # noqa: E731
    default = cgf_quadrature(density, (0.0, 1.0), lambda x: x)
    explicit = cgf_quadrature(density, (0.0, 1.0), lambda x: x, f_bounds=(0.0, 1.0))
    assert (default.lower, default.upper) == pytest.approx((-0.5, 0.5), abs=1e-12)
    for eta_sq in (0.5, 1.0, 2.0):
        assert go_certificate(default, eta_sq).upper == pytest.approx(go_certificate(explicit, eta_sq).upper, rel=1e-9)

    squared = cgf_quadrature(lambda x: 0.5, (-1.0, 1.0), lambda x: x * x)
    assert squared.mean == pytest.approx(1 / 3, abs=1e-9)
    assert squared.upper == pytest.approx(1 - 1 / 3, abs=1e-9)
    assert squared.lower == pytest.approx(-1 / 3, abs=1e-9)
    assert math.isinf(cgf_quadrature(lambda x: math.exp(-x), (0.0, np.inf), lambda x: x).upper)


def test_qoi_range():
    assert qoi_range(lambda x: x, (2.0, 5.0)) == (2.0, 5.0)
    lo, hi = qoi_range(math.sin, (0.0, 3.0))
    assert lo == pytest.approx(0.0, abs=1e-12)
    assert hi == pytest.approx(1.0, abs=1e-10)
    assert qoi_range(lambda x: x, (0.0, np.inf)) == (-math.inf, math.inf)
