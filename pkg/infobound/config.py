# pylint: disable=no-self-argument
import logging
import logging.config
import os
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

logger: logging.Logger = logging.getLogger("infobound")

SEED_ENV = "INFOBOUND_SEED"


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


class BaseConfig(BaseModel):
    model_config = ConfigDict(extra="allow")


class SolverConfigSchema(BaseConfig):
    c_start: float = Field(default=1e-8, gt=0)
    c_cap: float = Field(default=1e6, gt=0)
    xtol: float = Field(default=1e-15, gt=0)
    residual_tol: float = Field(default=1e-10, gt=0)
    domain_margin: float = Field(default=1e-9, gt=0, lt=1)
    max_doublings: int = Field(default=200, ge=1)
    maxiter: int = Field(default=400, ge=1)
    degenerate_variance: float = Field(default=1e-20, ge=0)


class QuadratureConfigSchema(BaseConfig):
    tol: float = Field(default=1e-9, gt=0)
    limit: int = Field(default=200, ge=1)


class SamplerConfigSchema(BaseConfig):
    sweeps: int = Field(default=30_000, ge=1)
    burn_in: int = Field(default=10_000, ge=0)
    thin: int = Field(default=10, ge=1)
    batches: int = Field(default=20, ge=2)
    chains: int = Field(default=1, ge=1)
    seed: int = Field(default_factory=default_seed)

    @model_validator(mode="after")
    def _check_sweeps(self):
        if self.sweeps <= self.burn_in:
            raise ValueError(f"sweeps ({self.sweeps}) must exceed burn_in ({self.burn_in})")
        return self

    def recorded(self) -> int:
        """Number of recorded states per chain."""
        return (self.sweeps - self.burn_in) // self.thin


class RunConfig(BaseConfig):
    subcommand: Literal["bound", "go", "tilt", "band", "fit-weibull", "example"]
    inputs: list[Path] = Field(default_factory=list)
    family: str | None = Field(default=None)
    eta_sq: float = Field(default=0.0, ge=0)
    alpha: float = Field(default=0.05, gt=0, lt=1)
    seed: int = Field(default_factory=default_seed)
    output: Path | None = Field(default=None)
    output_format: Literal["csv", "json"] = Field(default="json")
    params: dict[str, Any] = Field(default_factory=dict)


DEFAULT_SOLVER = SolverConfigSchema()
DEFAULT_QUADRATURE = QuadratureConfigSchema()


def configure_logging(level: int | str = logging.WARNING) -> None:
    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {"default": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"}},
            "handlers": {
                "stderr": {"class": "logging.StreamHandler", "formatter": "default", "stream": "ext://sys.stderr"}
            },
            "loggers": {"infobound": {"handlers": ["stderr"], "level": level, "propagate": False}},
        }
    )
