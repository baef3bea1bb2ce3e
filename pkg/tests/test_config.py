import logging

import pytest
from pydantic import ValidationError

from infobound.config import (
    DEFAULT_SOLVER,
    RunConfig,
    SamplerConfigSchema,
    SolverConfigSchema,
    configure_logging,
    default_seed,
)


def test_solver_defaults():
    config = SolverConfigSchema()
    assert config.c_start == 1e-8
    assert config.c_cap == 1e6
    assert config.xtol == 1e-15
    assert config.residual_tol == 1e-10
    assert config.max_doublings == 200
    assert DEFAULT_SOLVER == config


def test_solver_rejects_nonpositive_tolerance():
    with pytest.raises(ValidationError):
        SolverConfigSchema(xtol=0)


def test_sampler_defaults(monkeypatch):
    monkeypatch.delenv("INFOBOUND_SEED", raising=False)
    config = SamplerConfigSchema()
    assert config.sweeps == 30_000
    assert config.burn_in == 10_000
    assert config.thin == 10
    assert config.seed == 0
    assert config.recorded() == 2000


def test_sampler_seed_from_env(monkeypatch):
    monkeypatch.setenv("INFOBOUND_SEED", "42")
    assert default_seed() == 42
    assert SamplerConfigSchema().seed == 42


def test_sampler_sweeps_must_exceed_burn_in():
    with pytest.raises(ValidationError):
        SamplerConfigSchema(sweeps=100, burn_in=100)


def test_run_config():
    config = RunConfig(subcommand="bound", family="hoeffding", eta_sq=0.1, params={"a": 0, "b": 1})
    assert config.alpha == 0.05
    assert config.output_format == "json"
    assert config.params == {"a": 0, "b": 1}
    with pytest.raises(ValidationError):
        RunConfig(subcommand="bound", eta_sq=-1)
    with pytest.raises(ValidationError):
        RunConfig(subcommand="plot")


def test_configure_logging():
    configure_logging(logging.DEBUG)
    assert logging.getLogger("infobound").level == logging.DEBUG
    configure_logging("WARNING")
    assert logging.getLogger("infobound").level == logging.WARNING
