"""
One-dimensional nearest-neighbour Ising chain with free boundaries.

    H(s) = -beta sum_x J(x) s(x) s(x+1) - beta sum_x h(x) s(x),   mu(s) = exp(-H(s)) / Z

Exact expectations by enumeration of all 2^N states (small N) and heat-bath Gibbs sampling
with batch-means standard errors otherwise.
"""

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import Literal

import numpy as np
from pydantic import Field, ValidationError, model_validator
from scipy.special import expit, logsumexp

from infobound.base.schema import BaseSchema
from infobound.config import SamplerConfigSchema
from infobound.empirical import MomentEstimate
from infobound.errors import ParameterError, TooLarge

logger = logging.getLogger(__name__)

MAX_ENUMERATION_SITES = 22
CHUNK_BITS = 16

Observable = Callable[[np.ndarray], np.ndarray]


class IsingChain(BaseSchema):
    n_sites: int = Field(ge=2)
    couplings: list[float]
    field: list[float]
    inverse_temperature: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def _check(self):
        if len(self.couplings) != self.n_sites - 1:
            raise ValueError(f"{len(self.couplings)} couplings for {self.n_sites} sites")
        if len(self.field) != self.n_sites:
            raise ValueError(f"{len(self.field)} field values for {self.n_sites} sites")
        return self

    @classmethod
    def uniform(cls, n_sites: int, coupling: float = 1.0, field: float = 0.0, beta: float = 1.0) -> "IsingChain":
        return cls(
            n_sites=n_sites,
            couplings=[coupling] * (n_sites - 1),
            field=[field] * n_sites,
            inverse_temperature=beta,
        )

    def with_bond_defect(self, bond: int, coupling: float) -> "IsingChain":
        """Copy with J(bond), the bond between sites bond and bond+1, replaced."""
        if not 0 <= bond < self.n_sites - 1:
            raise ParameterError(f"bond {bond} outside 0..{self.n_sites - 2}")
        couplings = list(self.couplings)
        couplings[bond] = coupling
        return self.model_copy(update={"couplings": couplings})

    def energy(self, spins: np.ndarray) -> np.ndarray:
        """H(s) for each row of `spins`, beta included."""
        s = np.asarray(spins, dtype=float)
        bonds = (s[..., :-1] * s[..., 1:]) @ np.asarray(self.couplings)
        return -self.inverse_temperature * (bonds + s @ np.asarray(self.field))


class SiteWindow(BaseSchema):
    """Local magnetization (1/(2m+1)) sum_{|y-x|<=m} s(y) around `center` (0-based)."""

    center: int = Field(ge=0)
    radius: int = Field(default=1, ge=0)

    def check(self, chain: IsingChain) -> None:
        if self.center - self.radius < 0 or self.center + self.radius >= chain.n_sites:
            raise ParameterError(f"window {self.center}+-{self.radius} leaves the chain of {chain.n_sites} sites")

    def evaluate(self, spins: np.ndarray) -> np.ndarray:
        return np.asarray(spins, dtype=float)[..., self.center - self.radius : self.center + self.radius + 1].mean(
            axis=-1
        )


class EnumerationResult(BaseSchema):
    mean: float
    variance: float = Field(ge=0)
    log_partition: float


class GibbsEstimate(BaseSchema):
    mean: MomentEstimate
    variance: MomentEstimate


def window_averages(spins: np.ndarray, radius: int = 1) -> np.ndarray:
    """Local magnetization at every center radius..N-1-radius; last axis indexes the center."""
    s = np.asarray(spins, dtype=float)
    width = 2 * radius + 1
    csum = np.cumsum(np.pad(s, [(0, 0)] * (s.ndim - 1) + [(1, 0)]), axis=-1)
    return (csum[..., width:] - csum[..., :-width]) / width


def _states(start: int, stop: int, n_sites: int) -> np.ndarray:
    bits = (np.arange(start, stop, dtype=np.int64)[:, None] >> np.arange(n_sites)) & 1
    return (1 - 2 * bits).astype(np.int8)


def enumerate_expectations(chain: IsingChain, observables: Sequence[Observable]) -> tuple[float, list[float]]:
    """log Z and the exact expectation of each observable, accumulated chunk by chunk."""
    n = chain.n_sites
    if n > MAX_ENUMERATION_SITES:
        raise TooLarge(f"enumeration of 2^{n} states; at most {MAX_ENUMERATION_SITES} sites")
    total = 1 << n
    chunk = 1 << min(CHUNK_BITS, n)
    log_z = -math.inf
    sums = np.zeros(len(observables))
    for start in range(0, total, chunk):
        states = _states(start, min(start + chunk, total), n)
        log_w = -chain.energy(states)
        chunk_log_z = float(logsumexp(log_w))
        new_log_z = float(np.logaddexp(log_z, chunk_log_z))
        w = np.exp(log_w - new_log_z)
        sums = sums * math.exp(log_z - new_log_z) + np.array([np.dot(w, fn(states)) for fn in observables])
        log_z = new_log_z
    return log_z, sums.tolist()


def ising_enumerate(chain: IsingChain, qoi: SiteWindow) -> EnumerationResult:
    qoi.check(chain)
    log_z, (m1, m2) = enumerate_expectations(chain, [qoi.evaluate, lambda s: qoi.evaluate(s) ** 2])
    return EnumerationResult(mean=m1, variance=max(m2 - m1 * m1, 0.0), log_partition=log_z)


def _sampler_config(config: SamplerConfigSchema | None, overrides: dict) -> SamplerConfigSchema:
    config = config or SamplerConfigSchema()
    overrides = {k: v for k, v in overrides.items() if v is not None}
    try:
        return SamplerConfigSchema(**{**config.model_dump(), **overrides})
    except ValidationError as e:
        raise ParameterError(str(e)) from e


def _run_chain(chain: IsingChain, config: SamplerConfigSchema, rng: np.random.Generator) -> np.ndarray:
    """Heat-bath sweeps, even sites then odd sites; returns the recorded states."""
    n, beta = chain.n_sites, chain.inverse_temperature
    j = np.asarray(chain.couplings)
    left = np.concatenate(([0.0], j))
    right = np.concatenate((j, [0.0]))
    field = np.asarray(chain.field)
    parity = [np.arange(0, n, 2), np.arange(1, n, 2)]

    spins = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    recorded = np.empty((config.recorded(), n), dtype=np.int8)
    k = 0
    for sweep in range(config.sweeps):
        for sites in parity:
            padded = np.concatenate(([0.0], spins, [0.0]))
            local = beta * (left[sites] * padded[sites] + right[sites] * padded[sites + 2] + field[sites])
            spins[sites] = np.where(rng.random(sites.size) < expit(2.0 * local), 1.0, -1.0)
        done = sweep + 1 - config.burn_in
        if done > 0 and done % config.thin == 0 and k < recorded.shape[0]:
            recorded[k] = spins
            k += 1
    return recorded


def sample_states(chain: IsingChain, config: SamplerConfigSchema) -> list[np.ndarray]:
    """Recorded states of `config.chains` independent chains, seeded by SeedSequence(seed).spawn."""
    seeds = np.random.SeedSequence(config.seed).spawn(config.chains)

    def run(ss: np.random.SeedSequence) -> np.ndarray:
        return _run_chain(chain, config, np.random.default_rng(ss))

    if config.chains == 1:
        runs = [run(seeds[0])]
    else:
        with ThreadPoolExecutor(max_workers=config.chains) as pool:
            runs = list(pool.map(run, seeds))
    logger.debug("sampled %d chains x %d states of %d sites", config.chains, config.recorded(), chain.n_sites)
    return runs


def batch_means(series: Sequence[np.ndarray], batches: int) -> np.ndarray:
    """Means of `batches` consecutive equal blocks of each series, in chain order."""
    means = []
    for values in series:
        size = values.shape[0] // batches
        if size == 0:
            raise ParameterError(f"{values.shape[0]} recorded states cannot fill {batches} batches")
        means.append(values[: size * batches].reshape(batches, size, *values.shape[1:]).mean(axis=1))
    return np.concatenate(means)


def _estimate(batch: np.ndarray, n: int) -> MomentEstimate:
    return MomentEstimate(value=float(batch.mean()), variance_of_estimator=float(batch.var(ddof=1)) / batch.size, n=n)


def ising_gibbs_sample(
    chain: IsingChain,
    qoi: SiteWindow,
    sweeps: int | None = None,
    burn_in: int | None = None,
    thin: int | None = None,
    seed: int | None = None,
    config: SamplerConfigSchema | None = None,
) -> GibbsEstimate:
    """Mean and variance of the QoI under the chain, with batch-means standard errors."""
    config = _sampler_config(config, {"sweeps": sweeps, "burn_in": burn_in, "thin": thin, "seed": seed})
    qoi.check(chain)
    values = [qoi.evaluate(states) for states in sample_states(chain, config)]
    n = sum(v.size for v in values)
    mean = batch_means(values, config.batches)
    centre = float(mean.mean())
    spread = batch_means([(v - centre) ** 2 for v in values], config.batches)
    return GibbsEstimate(mean=_estimate(mean, n), variance=_estimate(spread, n))


def _check_pair(base: IsingChain, perturbed: IsingChain) -> None:
    if base.n_sites != perturbed.n_sites:
        raise ParameterError(f"chains of {base.n_sites} and {perturbed.n_sites} sites")


def ising_kl_estimate(
    base: IsingChain, perturbed: IsingChain, config: SamplerConfigSchema | None = None
) -> MomentEstimate:
    """R(perturbed || base) = log E_pert[exp(dH)] - E_pert[dH], dH = H_pert - H_base, sampled from the perturbed chain.

    The standard error linearizes the estimator over batch means.
    """
    _check_pair(base, perturbed)
    config = config or SamplerConfigSchema()
    runs = sample_states(perturbed, config)
    delta = [perturbed.energy(states) - base.energy(states) for states in runs]
    shift = max(float(d.max()) for d in delta)
    scaled = [np.exp(d - shift) for d in delta]
    a = batch_means(scaled, config.batches)
    d = batch_means(delta, config.batches)
    a_bar, d_bar = float(a.mean()), float(d.mean())
    value = math.log(a_bar) + shift - d_bar
    linearized = a / a_bar - d
    n = sum(x.size for x in delta)
    return MomentEstimate(value=value, variance_of_estimator=float(linearized.var(ddof=1)) / linearized.size, n=n)


def ising_kl_defect(
    base: IsingChain,
    perturbed: IsingChain,
    method: Literal["exact", "sampled"] = "exact",
    config: SamplerConfigSchema | None = None,
) -> float:
    """R(mu_perturbed || mu_base); exact mode is log Z_base - log Z_pert - E_pert[dH]."""
    _check_pair(base, perturbed)
    if method == "sampled":
        return ising_kl_estimate(base, perturbed, config).value
    if method != "exact":
        raise ParameterError(f"unknown method {method!r}")
    log_z_base, _ = enumerate_expectations(base, [])
    log_z_pert, (mean_delta,) = enumerate_expectations(perturbed, [lambda s: perturbed.energy(s) - base.energy(s)])
    return max(log_z_base - log_z_pert - mean_delta, 0.0)
