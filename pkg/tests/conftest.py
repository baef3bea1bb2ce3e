import os

import numpy as np
import pytest

from infobound.divergence import DiscreteDistribution
from infobound.models.truncnormal import TruncatedNormalModel
from infobound.models.weibull import load_battery_data


@pytest.fixture
def seed():
    """Master seed for randomized tests, overridable from the environment"""
    return int(os.environ.get("INFOBOUND_SEED", "20180601"))


@pytest.fixture
def rng(seed):
    return np.random.default_rng(seed)


@pytest.fixture
def bernoulli():
    """Fair coin on {-1, 1}"""
    return DiscreteDistribution(atoms=[-1.0, 1.0], weights=[0.5, 0.5])


@pytest.fixture
def two_point():
    """{-1/4 w.p. 0.8, 1 w.p. 0.2}: mean 0, variance 1/4"""
    return DiscreteDistribution(atoms=[-0.25, 1.0], weights=[0.8, 0.2])


@pytest.fixture
def truncated_normal():
    return TruncatedNormalModel(mu=0.0, sigma=1.0, lo=-1.0, hi=1.0)


@pytest.fixture
def battery_data():
    return load_battery_data()
