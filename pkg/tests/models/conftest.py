import pytest

from infobound.config import SamplerConfigSchema
from infobound.models import ExponentialModel, IsingChain


@pytest.fixture
def unit_exponential():
    return ExponentialModel(rate=1.0)


@pytest.fixture
def chain10():
    """Ten sites, J=1, h=0, beta=1"""
    return IsingChain.uniform(10)


@pytest.fixture
def sampler(seed):
    """Shorter runs than the defaults; enough for 3-sigma checks on ten sites"""
    return SamplerConfigSchema(sweeps=20_000, burn_in=1_000, thin=2, batches=20, seed=seed)
