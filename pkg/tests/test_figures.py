import pytest

from infobound.concentration import Bennett, BennettAB
from infobound.config import SamplerConfigSchema
from infobound.errors import TooLarge
from infobound.figures import (
    _bennett_pair,
    bennett_contour_figure,
    exponential_figure,
    ising_figure,
    truncated_normal_figure,
)
from infobound.models.ising import IsingChain


def test_exponential_figure():
    figure = exponential_figure([1.5, 2.0, 8.0])
    columns = figure.columns
    assert figure.name == "exponential"
    assert columns["gap"] == pytest.approx([1 / 1.5 - 1, -0.5, 1 / 8 - 1])
    for gap, lower, upper, env_lower, env_upper in zip(
        columns["gap"], columns["go_lower"], columns["go_upper"], columns["env_lower"], columns["env_upper"]
    ):
        assert lower - 1e-9 <= gap <= upper
        assert env_lower <= lower + 1e-9
        assert upper <= env_upper + 1e-9
    assert figure.parameters["envelope"]["variant"] == "interval_subgaussian"


def test_truncated_normal_figure_ordering():
    """GO <= Bennett <= Bennett-(a,b) <= Hoeffding on the whole default grid"""
    columns = truncated_normal_figure().columns
    assert len(columns["eta_sq"]) == 80
    assert columns["eta_sq"][0] == pytest.approx(0.05)
    assert columns["eta_sq"][-1] == pytest.approx(4.0)
    for go, bennett, bennett_ab, hoeffding in zip(
        columns["go"], columns["bennett"], columns["bennett_ab"], columns["hoeffding"]
    ):
        assert 0 < go <= bennett + 1e-8
        assert bennett <= bennett_ab + 1e-10
        assert bennett_ab <= hoeffding + 1e-10


def test_ising_figure_bands_nest():
    config = SamplerConfigSchema(sweeps=3000, burn_in=500, thin=2, batches=20, seed=5)
    figure = ising_figure(IsingChain.uniform(8), (0.05, 0.5), exact=True, config=config)
    columns = figure.columns
    assert columns["center"] == list(range(1, 7))
    for i, mean in enumerate(columns["exact_mean"]):
        for level in ("0.05", "0.5"):
            lower, upper = columns[f"bennett_lower_{level}"][i], columns[f"bennett_upper_{level}"][i]
            ab_lower, ab_upper = columns[f"bennett_ab_lower_{level}"][i], columns[f"bennett_ab_upper_{level}"][i]
            assert ab_lower <= lower + 1e-12 and upper <= ab_upper + 1e-12
            assert lower <= mean <= upper
        assert columns["bennett_lower_0.5"][i] <= columns["bennett_lower_0.05"][i]
        assert columns["bennett_upper_0.05"][i] <= columns["bennett_upper_0.5"][i]
        assert columns["bennett_ab_lower_0.5"][i] <= columns["bennett_ab_lower_0.05"][i]
        assert columns["bennett_ab_upper_0.05"][i] <= columns["bennett_ab_upper_0.5"][i]
    assert max(abs(z) for z in columns["mcmc_z"]) <= 5


def test_ising_figure_exact_needs_small_chain():
    with pytest.raises(TooLarge):
        ising_figure(IsingChain.uniform(23), exact=True)


def test_bennett_contour_figure():
    figure = bennett_contour_figure([0.2, 0.4], [0.1, 0.2, 0.3])
    assert len(figure.columns["upper"]) == 6
    assert figure.columns["sigma_b"][:3] == [0.2, 0.2, 0.2]
    assert figure.columns["upper"][4] == pytest.approx(Bennett(b=1.0, mu=0.0, sigma_b=0.4).u_divergence(0.2))


def test_bennett_pair_nests():
    lower, upper, ab_lower, ab_upper = _bennett_pair(0.2, 0.3, 0.05)
    assert ab_lower <= lower < 0.2 < upper <= ab_upper
    assert ab_upper == pytest.approx(0.2 + BennettAB(a=-1.0, b=1.0, mu=0.2).u_divergence(0.05))


def test_bennett_pair_zero_variance():
    lower, upper, _, _ = _bennett_pair(1.0, 0.0, 0.05)
    assert lower == upper == 1.0
