import json
import math

import pytest

from infobound import cli
from infobound.cli import EXIT_INPUT, EXIT_NUMERIC, EXIT_OK, main
from infobound.divergence import DiscreteDistribution, kl_discrete
from infobound.errors import NonconvergenceError


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK
    return json.loads(out)


@pytest.fixture
def balanced_sample(tmp_path):
    path = tmp_path / "coin.txt"
    path.write_text("\n".join(["-1", "1"] * 50) + "\n")
    return path


def test_bound_bennett_upper_only(capsys):
    data = run_json(
        capsys, "bound", "--family", "bennett", "--b", "1", "--mu", "0", "--sigma2", "0.25", "--eta2", "0.1"
    )
    assert data["upper"] == pytest.approx(0.244, abs=0.005)
    assert data["lower"] is None
    assert data["bound"]["variant"] == "bennett"
    assert data["manifest"]["eta_sq"] == 0.1


def test_bound_bennett_with_lower_bound(capsys):
    data = run_json(
        capsys,
        "bound",
        "--family",
        "bennett",
        "--b",
        "1",
        "--mu",
        "0",
        "--sigma2",
        "0.25",
        "--a",
        "-1",
        "--eta2",
        "0.1",
    )
    assert data["lower"] < 0 < data["upper"]
    assert data["method"] == "concentration-family"


def test_bound_hoeffding_with_eta(capsys):
    data = run_json(capsys, "bound", "--family", "hoeffding", "--a", "0", "--b", "1", "--eta", "0.1")
    assert data["upper"] == pytest.approx(0.1 / math.sqrt(2))
    assert data["lower"] == pytest.approx(-0.1 / math.sqrt(2))
    assert data["manifest"]["eta_sq"] == pytest.approx(0.01)


def test_bound_from_json(capsys):
    payload = '{"variant": "bennett_ab", "a": -1, "b": 1, "mu": 0}'
    data = run_json(capsys, "bound", "--bound-json", payload, "--eta2", "0.1")
    assert data["upper"] == pytest.approx(0.440, abs=0.005)


def test_bound_missing_parameter(capsys):
    code, _, err = run(capsys, "bound", "--family", "hoeffding", "--a", "0", "--eta2", "0.1")
    assert code == EXIT_INPUT
    assert json.loads(err.strip().splitlines()[-1])["error"] == "ParameterError"


def test_eta_flags_are_exclusive(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bound", "--family", "hoeffding", "--a", "0", "--b", "1", "--eta", "0.1", "--eta2", "0.01"])
    assert exc.value.code == EXIT_INPUT
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error["error"] == "UsageError"
    assert "--eta2" in error["message"]


def test_unknown_family_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bound", "--family", "chernoff", "--eta2", "0.1"])
    assert exc.value.code == EXIT_INPUT
    assert json.loads(capsys.readouterr().err.strip().splitlines()[-1])["error"] == "UsageError"


def test_negative_radius_is_input_error(capsys):
    code, _, _ = run(capsys, "bound", "--family", "hoeffding", "--a", "0", "--b", "1", "--eta2", "-0.1")
    assert code == EXIT_INPUT


def test_go_exponential(capsys):
    data = run_json(capsys, "go", "--model", "exponential", "--rate", "1", "--eta2", "0.193147")
    assert data["lower"] <= -0.5 + 1e-5
    assert data["upper"] > 0


def test_go_empirical(capsys, balanced_sample):
    data = run_json(capsys, "go", "--input", str(balanced_sample), "--eta2", "0.1")
    assert data["upper"] == pytest.approx(0.440, abs=0.005)
    assert data["diagnostics"]["upper"]["regime"] == "interior"


def test_go_zero_radius(capsys, balanced_sample):
    data = run_json(capsys, "go", "--input", str(balanced_sample), "--eta2", "0")
    assert (data["lower"], data["upper"]) == (0.0, 0.0)


def test_go_needs_a_source(capsys):
    code, _, _ = run(capsys, "go", "--eta2", "0.1")
    assert code == EXIT_INPUT


def test_tilt(capsys, tmp_path):
    path = tmp_path / "coin.json"
    path.write_text(json.dumps({"atoms": [-1, 1], "weights": [0.5, 0.5]}))
    data = run_json(capsys, "tilt", "--distribution", str(path), "--eta2", "0.1")
    tilted = DiscreteDistribution.load(data["tilted"])
    base = DiscreteDistribution(atoms=[-1.0, 1.0], weights=[0.5, 0.5])
    assert kl_discrete(tilted, base) == pytest.approx(0.1, abs=1e-8)
    assert tilted.mean() == pytest.approx(data["solution"]["value"], abs=1e-8)


def test_tilt_boundary(capsys, tmp_path):
    path = tmp_path / "coin.json"
    path.write_text(json.dumps({"atoms": [-1, 1], "weights": [0.5, 0.5]}))
    data = run_json(capsys, "tilt", "--distribution", str(path), "--eta2", "1.0", "--sign", "-")
    assert data["solution"]["regime"] == "boundary"
    assert data["tilted"]["weights"] == [1.0, 0.0]


def test_tilt_malformed_distribution(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{")
    code, out, err = run(capsys, "tilt", "--distribution", str(path), "--eta2", "0.1")
    assert code == EXIT_INPUT
    assert out == ""
    assert json.loads(err.strip().splitlines()[-1])["error"] == "MalformedInput"


def test_band_csv_and_sidecar(capsys, tmp_path, rng):
    sample = tmp_path / "sample.txt"
    sample.write_text("\n".join(repr(x) for x in rng.normal(size=100)) + "\n")
    output = tmp_path / "band.csv"
    code, _, _ = run(capsys, "band", "--input", str(sample), "--alpha", "0.05", "--eta", "0.1", "--output", str(output))
    assert code == EXIT_OK
    lines = output.read_text().splitlines()
    assert lines[0] == "x,lower,upper"
    assert len(lines) == 103
    sidecar = json.loads((tmp_path / "band.json").read_text())
    assert sidecar["epsilon_n"] == pytest.approx(0.135812, abs=1e-6)
    assert sidecar["eta"] == pytest.approx(0.1)
    assert sidecar["n"] == 100


def test_band_is_deterministic(capsys, balanced_sample):
    _, first, _ = run(capsys, "band", "--input", str(balanced_sample), "--eta", "0.1")
    _, second, _ = run(capsys, "band", "--input", str(balanced_sample), "--eta", "0.1")
    assert first == second
    assert first.startswith("x,lower,upper\n")


def test_band_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "band", "--input", str(tmp_path / "absent.txt"))
    assert code == EXIT_INPUT
    assert "error" in json.loads(err.strip().splitlines()[-1])


def test_fit_weibull(capsys):
    data = run_json(capsys, "fit-weibull")
    assert data["scale"] == pytest.approx(1138, abs=6)
    assert data["shape"] == pytest.approx(3.55, abs=0.02)
    assert data["n"] == 12


@pytest.mark.slow
def test_example_truncated_normal(capsys):
    data = run_json(capsys, "example", "truncated-normal")
    columns = data["columns"]
    assert data["manifest"]["example"] == "truncated-normal"
    for go, bennett, bennett_ab, hoeffding in zip(
        columns["go"], columns["bennett"], columns["bennett_ab"], columns["hoeffding"]
    ):
        assert go <= bennett + 1e-8
        assert bennett <= bennett_ab + 1e-10
        assert bennett_ab <= hoeffding + 1e-10


@pytest.mark.slow
def test_example_battery_files(capsys, tmp_path):
    output = tmp_path / "battery.csv"
    code, _, _ = run(capsys, "example", "battery", "--output", str(output))
    assert code == EXIT_OK
    header = output.read_text().splitlines()[0].split(",")
    assert header[:3] == ["time", "e_f1", "e_f2"]
    assert "lower_0.01" in header and "upper_0.1" in header
    info = json.loads((tmp_path / "battery.json").read_text())
    assert info["parameters"]["shape"] == pytest.approx(3.55, abs=0.02)
    assert info["parameters"]["scale"] == pytest.approx(1138, abs=6)
    assert info["version"] == cli.__version__


def test_example_is_deterministic(capsys):
    _, first, _ = run(capsys, "example", "exponential", "--seed", "5")
    _, second, _ = run(capsys, "example", "exponential", "--seed", "5")
    assert first == second


@pytest.mark.slow
def test_example_ising_exact(capsys):
    data = run_json(
        capsys, "example", "ising", "--n", "10", "--exact", "--sweeps", "3000", "--burn-in", "500", "--seed", "3"
    )
    columns = data["columns"]
    assert len(columns["exact_mean"]) == 8
    assert data["manifest"]["seed"] == 3
    for exact, lower, upper in zip(columns["exact_mean"], columns["bennett_lower_0.05"], columns["bennett_upper_0.05"]):
        assert lower <= exact <= upper
    assert max(abs(z) for z in columns["mcmc_z"]) <= 5


def test_example_ising_exact_too_large(capsys):
    code, out, err = run(capsys, "example", "ising", "--n", "30", "--exact")
    assert code == EXIT_INPUT
    assert out == ""
    assert json.loads(err.strip().splitlines()[-1])["error"] == "TooLarge"


def test_numeric_failure_exit_code(capsys, monkeypatch):
    def fail(config):
        raise NonconvergenceError("bisection stalled")

    monkeypatch.setitem(cli.COMMANDS, "fit-weibull", fail)
    code, _, err = run(capsys, "fit-weibull")
    assert code == EXIT_NUMERIC
    assert json.loads(err.strip().splitlines()[-1]) == {"error": "NonconvergenceError", "message": "bisection stalled"}
