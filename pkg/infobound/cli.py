"""
Command line front end.

    infobound bound --family bennett --b 1 --mu 0 --sigma2 0.25 --a -1 --eta2 0.1
    infobound go --input sample.txt --eta2 0.1
    infobound tilt --distribution p.json --eta2 0.1
    infobound band --input sample.txt --alpha 0.05 --eta 0.1 --output band.csv
    infobound fit-weibull
    infobound example battery --output battery.csv

Exit codes: 0 success, 2 input error, 3 numerical failure. Errors are written to stderr as
{"error": <type>, "message": <text>}.
"""

import argparse
import json
import logging
import math
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, NoReturn

import numpy as np
from pydantic import ValidationError

from infobound import __version__
from infobound.base.cumulant import BaseCumulant
from infobound.concentration import (
    BaseBound,
    Bennett,
    BennettAB,
    Hoeffding,
    IntervalSubGaussian,
    SubGaussian,
    bias_band,
    load_bound,
)
from infobound.config import RunConfig, SamplerConfigSchema, configure_logging
from infobound.divergence import DiscreteDistribution, cgf_discrete, go_certificate, solve_tilt, tilt_discrete
from infobound.empirical import empirical_cgf
from infobound.errors import DomainError, InputError, NumericError, ParameterError
from infobound.estimators import confidence_band
from infobound.figures import (
    FigureData,
    battery_figure,
    bennett_contour_figure,
    exponential_figure,
    ising_figure,
    truncated_normal_figure,
)
from infobound.io import dumps_csv, dumps_json, read_json, read_sample, read_text, sidecar_path, write_text
from infobound.models.exponential import ExponentialModel, exponential_centered_cgf
from infobound.models.ising import IsingChain
from infobound.models.truncnormal import TruncatedNormalModel, truncated_normal_cgf
from infobound.models.weibull import load_battery_data, read_failure_times, weibull_loglik_gradient, weibull_mle

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3

FAMILIES = ("subgaussian", "interval_subgaussian", "bennett", "bennett_ab", "hoeffding")
MODELS = ("exponential", "truncated-normal")
EXAMPLES = ("exponential", "truncated-normal", "battery", "ising", "bennett-contour")


def manifest(config: RunConfig, **extra: Any) -> dict[str, Any]:
    return {
        "version": __version__,
        "subcommand": config.subcommand,
        "inputs": [str(p) for p in config.inputs],
        "family": config.family,
        "eta_sq": config.eta_sq,
        "alpha": config.alpha,
        "seed": config.seed,
        "params": config.params,
        **extra,
    }


def emit(config: RunConfig, payload: Any) -> None:
    write_text(dumps_json(payload), config.output)


def _param(config: RunConfig, name: str) -> Any:
    value = config.params.get(name)
    if value is None:
        raise ParameterError(f"--{name.replace('_', '-')} is required")
    return value


def build_bound(config: RunConfig) -> BaseBound:
    params = config.params
    if params.get("bound_json"):
        text = params["bound_json"]
        return load_bound(read_text(text) if Path(text).is_file() else text)
    family = config.family
    if family is None:
        raise ParameterError("give --family or --bound-json")

    def sigma() -> float:
        if params.get("sigma") is not None:
            return float(params["sigma"])
        return math.sqrt(float(_param(config, "sigma2")))

    match family:
        case "subgaussian":
            return SubGaussian(sigma_b=sigma())
        case "interval_subgaussian":
            return IntervalSubGaussian(sigma_b=sigma(), c_max=_param(config, "c_max"))
        case "bennett":
            return Bennett(b=_param(config, "b"), mu=_param(config, "mu"), sigma_b=sigma(), a=params.get("a"))
        case "bennett_ab":
            return BennettAB(a=_param(config, "a"), b=_param(config, "b"), mu=_param(config, "mu"))
        case "hoeffding":
            return Hoeffding(a=_param(config, "a"), b=_param(config, "b"))
    raise ParameterError(f"unknown family {family!r}")


def cmd_bound(config: RunConfig) -> int:
    bound = build_bound(config)
    if isinstance(bound, Bennett) and bound.a is None:
        logger.warning("no lower bound --a given: only the upper Bennett bound is certified")
        solution = bound.solution(config.eta_sq, "+")
        payload = {
            "eta_sq": config.eta_sq,
            "lower": None,
            "upper": 0.0 if solution is None else solution.value,
            "method": "concentration-family",
            "diagnostics": {"upper": solution},
        }
    else:
        payload = bias_band(bound, config.eta_sq).dump_model()
    emit(config, {**payload, "bound": bound.dump_model(), "manifest": manifest(config)})
    return EXIT_OK


def _model_cumulant(config: RunConfig) -> BaseCumulant:
    params = config.params
    match params.get("model"):
        case "exponential":
            return exponential_centered_cgf(ExponentialModel(rate=params.get("rate") or 1.0))
        case "truncated-normal":
            fields = {k: params[k] for k in ("mu", "sigma", "lo", "hi") if params.get(k) is not None}
            return truncated_normal_cgf(TruncatedNormalModel(**fields))
    raise ParameterError(f"unknown model {params.get('model')!r}; choose from {MODELS}")


def _distribution(config: RunConfig) -> DiscreteDistribution:
    """The discrete law given by --distribution, or the empirical law of --input."""
    if config.params.get("distribution"):
        return DiscreteDistribution.load(read_json(config.params["distribution"]))
    if not config.inputs:
        raise ParameterError("give --input or --distribution")
    sample = read_sample(config.inputs[0], config.params.get("column"))
    atoms, counts = np.unique(sample, return_counts=True)
    return DiscreteDistribution.from_unnormalized(atoms.tolist(), counts)


def cmd_go(config: RunConfig) -> int:
    if config.params.get("model"):
        h = _model_cumulant(config)
    elif config.params.get("distribution"):
        h = cgf_discrete(_distribution(config))
    elif config.inputs:
        h = empirical_cgf(read_sample(config.inputs[0], config.params.get("column")))
    else:
        raise ParameterError("give --input, --distribution or --model")
    certificate = go_certificate(h, config.eta_sq)
    emit(config, {**certificate.dump_model(), "manifest": manifest(config)})
    return EXIT_OK


def cmd_tilt(config: RunConfig) -> int:
    p = _distribution(config)
    sign = config.params.get("sign") or "+"
    solution = solve_tilt(cgf_discrete(p), config.eta_sq, sign)
    c = solution.c_star if sign == "+" else -solution.c_star
    if math.isinf(c):
        # limit of the tilt: P conditioned on the extreme atoms
        extreme = max(p.atoms) if sign == "+" else min(p.atoms)
        weights = [w if atom == extreme else 0.0 for atom, w in zip(p.atoms, p.weights)]
        tilted = DiscreteDistribution.from_unnormalized(p.atoms, weights)
    else:
        tilted = tilt_discrete(p, p.atoms, c)
    emit(config, {"solution": solution, "tilted": tilted, "manifest": manifest(config)})
    return EXIT_OK


def cmd_band(config: RunConfig) -> int:
    if not config.inputs:
        raise ParameterError("band needs --input")
    sample = read_sample(config.inputs[0], config.params.get("column"))
    band = confidence_band(sample, alpha=config.alpha, eta=math.sqrt(config.eta_sq))
    sidecar = {**band.sidecar(), "manifest": manifest(config)}
    if config.output_format == "json":
        write_text(dumps_json({**band.dump_model(), **sidecar}), config.output)
        return EXIT_OK
    write_text(dumps_csv({"x": band.xs, "lower": band.lower, "upper": band.upper}), config.output)
    if config.output is not None:
        write_text(dumps_json(sidecar), sidecar_path(config.output))
    else:
        logger.info("band sidecar: %s", json.dumps(sidecar, sort_keys=True))
    return EXIT_OK


def cmd_fit_weibull(config: RunConfig) -> int:
    if config.inputs:
        data = read_failure_times(read_text(config.inputs[0]).splitlines())
    else:
        data = load_battery_data()
    model = weibull_mle(data)
    payload = {
        "shape": model.shape,
        "scale": model.scale,
        "n": len(data.times),
        "gradient": weibull_loglik_gradient(model, data),
        "manifest": manifest(config),
    }
    emit(config, payload)
    return EXIT_OK


def _sampler(config: RunConfig) -> SamplerConfigSchema:
    keys = ("sweeps", "burn_in", "thin", "chains")
    overrides = {k: config.params[k] for k in keys if config.params.get(k) is not None}
    try:
        return SamplerConfigSchema(seed=config.seed, **overrides)
    except ValidationError as e:
        raise ParameterError(str(e)) from e


def _figure(name: str, config: RunConfig) -> FigureData:
    params = config.params
    levels = params.get("levels")
    match name:
        case "exponential":
            return exponential_figure()
        case "truncated-normal":
            return truncated_normal_figure()
        case "battery":
            return battery_figure(eta_sqs=levels or (0.01, 0.1))
        case "ising":
            chain = IsingChain.uniform(
                params.get("n") or 100,
                coupling=params.get("coupling", 1.0),
                field=params.get("field", 0.0),
                beta=params.get("beta", 1.0),
            )
            return ising_figure(chain, levels or (0.05, 0.5), exact=bool(params.get("exact")), config=_sampler(config))
        case "bennett-contour":
            return bennett_contour_figure()
    raise ParameterError(f"unknown example {name!r}; choose from {EXAMPLES}")


def cmd_example(config: RunConfig) -> int:
    name = _param(config, "name")
    figure = _figure(name, config)
    info = manifest(config, example=name, parameters=figure.parameters)
    if config.output is None:
        if config.output_format == "csv":
            write_text(dumps_csv(figure.columns))
        else:
            write_text(dumps_json({"manifest": info, "columns": figure.columns}))
        return EXIT_OK
    if config.output_format == "csv":
        write_text(dumps_csv(figure.columns), config.output)
    else:
        write_text(dumps_json(figure.columns), config.output)
    write_text(dumps_json(info), sidecar_path(config.output))
    return EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "bound": cmd_bound,
    "go": cmd_go,
    "tilt": cmd_tilt,
    "band": cmd_band,
    "fit-weibull": cmd_fit_weibull,
    "example": cmd_example,
}


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors are reported like every other input error: JSON on stderr, exit code 2."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        sys.stderr.write(json.dumps({"error": "UsageError", "message": message}) + "\n")
        raise SystemExit(EXIT_INPUT)


def _add_eta(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--eta2", type=float, help="KL radius eta^2 in nats")
    group.add_argument("--eta", type=float, help="square root of the KL radius")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", type=Path, help="output file (default: stdout)")
    parser.add_argument("--format", dest="output_format", choices=("json", "csv"), default=None)
    parser.add_argument("--seed", type=int, help="master seed (default: $INFOBOUND_SEED or 0)")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")


def _add_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", type=Path, action="append", default=[], help="sample file, one value per line")
    parser.add_argument("--column", help="CSV column name or 0-based index")


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(prog="infobound", description="Certified model-bias bounds in KL balls.")
    parser.add_argument("--version", action="version", version=f"infobound {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    bound = sub.add_parser("bound", help="concentration bound band for a family of QoIs")
    bound.add_argument("--family", choices=FAMILIES)
    bound.add_argument("--bound-json", help="tagged bound JSON, inline or a file path")
    for name in ("sigma", "sigma2", "a", "b", "mu", "c-max"):
        bound.add_argument(f"--{name}", type=float)
    _add_eta(bound)
    _add_common(bound)

    go = sub.add_parser("go", help="goal-oriented divergence certificate")
    _add_input(go)
    go.add_argument("--distribution", help="discrete distribution JSON {atoms, weights}")
    go.add_argument("--model", choices=MODELS)
    for name in ("rate", "mu", "sigma", "lo", "hi"):
        go.add_argument(f"--{name}", type=float)
    _add_eta(go)
    _add_common(go)

    tilt = sub.add_parser("tilt", help="extremal tilted distribution")
    _add_input(tilt)
    tilt.add_argument("--distribution", help="discrete distribution JSON {atoms, weights}")
    tilt.add_argument("--sign", choices=("+", "-"), default="+")
    _add_eta(tilt)
    _add_common(tilt)

    band = sub.add_parser("band", help="DKW confidence band widened by the model bias")
    _add_input(band)
    band.add_argument("--alpha", type=float, default=0.05)
    _add_eta(band)
    _add_common(band)

    fit = sub.add_parser("fit-weibull", help="Weibull MLE of failure times (default: bundled battery data)")
    _add_input(fit)
    _add_common(fit)

    example = sub.add_parser("example", help="plot data of a worked example")
    example.add_argument("name", choices=EXAMPLES)
    example.add_argument("--levels", type=float, nargs="+", help="eta^2 values of the bands")
    example.add_argument("--n", type=int, help="Ising chain length")
    example.add_argument("--beta", type=float, default=1.0)
    example.add_argument("--coupling", type=float, default=1.0)
    example.add_argument("--field", type=float, default=0.0)
    example.add_argument("--exact", action="store_true", help="Ising moments by enumeration")
    for name in ("sweeps", "burn-in", "thin", "chains"):
        example.add_argument(f"--{name}", type=int)
    _add_common(example)
    return parser


_RUN_KEYS = {"subcommand", "input", "family", "eta", "eta2", "alpha", "seed", "output", "output_format", "verbose"}


def run_config(args: argparse.Namespace) -> RunConfig:
    eta_sq = args.eta2 if getattr(args, "eta2", None) is not None else None
    if eta_sq is None and getattr(args, "eta", None) is not None:
        if args.eta < 0:
            raise DomainError(f"eta must be nonnegative, got {args.eta}")
        eta_sq = args.eta**2
    params = {k: v for k, v in vars(args).items() if k not in _RUN_KEYS}
    fields: dict[str, Any] = {
        "subcommand": args.subcommand,
        "inputs": getattr(args, "input", []),
        "family": getattr(args, "family", None),
        "eta_sq": eta_sq or 0.0,
        "output": args.output,
        "params": params,
    }
    if getattr(args, "alpha", None) is not None:
        fields["alpha"] = args.alpha
    if args.seed is not None:
        fields["seed"] = args.seed
    if args.output_format is not None:
        fields["output_format"] = args.output_format
    elif args.subcommand == "band" or (args.output is not None and args.output.suffix == ".csv"):
        fields["output_format"] = "csv"
    return RunConfig(**fields)


def _fail(error: Exception, code: int) -> int:
    sys.stderr.write(json.dumps({"error": type(error).__name__, "message": str(error)}) + "\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(logging.DEBUG if args.verbose else logging.WARNING)
    try:
        config = run_config(args)
        return COMMANDS[config.subcommand](config)
    except (InputError, ValidationError, OSError) as e:
        return _fail(e, EXIT_INPUT)
    except NumericError as e:
        return _fail(e, EXIT_NUMERIC)
