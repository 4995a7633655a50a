import json

import pytest

from oscillators.errors import ConfigError
from utils.config import COMMAND_SCHEMAS, RunConfig


def test_defaults_are_filled_in():
    config = RunConfig("scan")
    assert config.params == {
        "n": 1,
        "omega": 1.0,
        "gamma": 0.1,
        "profile": "uniform",
        "parity": "even",
        "eps_min": 0.0,
        "eps_max": 1.2,
        "points": 200,
    }
    assert config.format == "csv"
    assert config.seed == 0
    assert config.output is None


def test_values_are_coerced():
    config = RunConfig("spectrum", {"n": "2", "omega": 1, "epsilon": "0.5"})
    assert config.params["n"] == 2
    assert config.params["omega"] == 1.0
    assert isinstance(config.params["omega"], float)
    assert config.params["epsilon"] == 0.5


@pytest.mark.parametrize(
    "command, params",
    [
        ("spectrum", {"n": 1, "epsilon": 0.5}),
        ("spectrum", {"n": 1.5, "omega": 1.0, "epsilon": 0.5}),
        ("poly", {"n": 3, "omega": 1.0}),
        ("poly", {"n": "three"}),
        ("teleport", {}),
    ],
)
def test_invalid_parameters_rejected(command, params):
    with pytest.raises(ConfigError):
        RunConfig(command, params)


def test_invalid_options_rejected():
    with pytest.raises(ConfigError):
        RunConfig("poly", {"n": 3}, format="xml")
    with pytest.raises(ConfigError):
        RunConfig("poly", {"n": 3}, tolerances={"magic_tol": 1e-3})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"command": "poly", "params": {"n": 3}, "colour": "red"})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"params": {"n": 3}})
    with pytest.raises(ConfigError):
        RunConfig("planar", {"mode": "bogus"})
    with pytest.raises(ConfigError):
        RunConfig("gamma-crit", {"profile": "linear"})


@pytest.mark.parametrize("command", sorted(COMMAND_SCHEMAS))
def test_json_round_trip(command):
    required = {"spectrum": {"n": 2, "omega": 1.0, "epsilon": 0.4}, "poly": {"n": 4}}
    config = RunConfig(command, required.get(command, {}), output="out.csv", seed=3, tolerances={"imag_tol": 1e-8})
    assert RunConfig.from_dict(json.loads(config.to_json())) == config


def test_config_files(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(RunConfig("poly", {"n": 3}).to_json())
    assert RunConfig.from_json(path).params == {"n": 3}
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        RunConfig.from_json(path)
    with pytest.raises(OSError):
        RunConfig.from_json(tmp_path / "missing.json")


def test_tolerance_lookup():
    config = RunConfig("scan", tolerances={"refine_tol": 1e-6})
    assert config.tolerance("refine_tol", 1e-10) == 1e-6
    assert config.tolerance("imag_tol", 1e-9) == 1e-9
