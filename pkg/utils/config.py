import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Union

from oscillators.errors import ConfigError


class _Required:
    def __repr__(self):
        return "REQUIRED"


REQUIRED = _Required()

# command -> parameter -> (type, default)
COMMAND_SCHEMAS = {
    "spectrum": {
        "n": (int, REQUIRED),
        "omega": (float, REQUIRED),
        "gamma": (float, 0.0),
        "epsilon": (float, REQUIRED),
        "parity": (str, "even"),
        "profile": (str, "uniform"),
        "center_omega": (float, 1.0),
    },
    "scan": {
        "n": (int, 1),
        "omega": (float, 1.0),
        "gamma": (float, 0.1),
        "profile": (str, "uniform"),
        "parity": (str, "even"),
        "eps_min": (float, 0.0),
        "eps_max": (float, 1.2),
        "points": (int, 200),
    },
    "gamma-crit": {
        "n_min": (int, 1),
        "n_max": (int, 12),
        "omega": (float, 1.0),
        "profile": (str, "uniform"),
    },
    "planar": {
        "omega": (float, 0.8),
        "gamma": (float, 0.1),
        "eps1": (float, 0.1),
        "eps1_min": (float, 0.0),
        "eps1_max": (float, 1.0),
        "eps2_min": (float, 0.0),
        "eps2_max": (float, 0.7),
        "points": (int, 701),
        "mode": (str, "scan"),
        "resolution": (int, 101),
    },
    "simulate": {
        "n": (int, 2),
        "omega": (float, 1.0),
        "gamma": (float, 0.1),
        "epsilon": (float, 0.45),
        "t_end": (float, 250.0),
        "dt": (float, 1e-3),
        "rep": (str, "sum"),
        "gauge_scale": (float, 0.0),
        "save_every": (int, 100),
    },
    "impurity": {
        "c": (float, 1.0),
        "omega": (float, 1.0),
        "epsilon": (float, 0.5),
        "gamma": (float, 0.3),
        "Omega": (float, 1.0),
        "half_width": (float, 10.0),
        "points": (int, 2001),
    },
    "poly": {
        "n": (int, REQUIRED),
    },
}

# (command, parameter) -> allowed values
PARAM_CHOICES = {
    ("spectrum", "parity"): ("even", "odd"),
    ("spectrum", "profile"): ("uniform", "inverse", "inverse_square"),
    ("scan", "parity"): ("even", "odd"),
    ("scan", "profile"): ("uniform", "inverse", "inverse_square"),
    ("gamma-crit", "profile"): ("uniform", "inverse", "inverse_square"),
    ("planar", "mode"): ("scan", "diagram", "trace"),
    ("simulate", "rep"): ("sum", "product", "gauge"),
}

TOLERANCE_KEYS = ("imag_tol", "refine_tol", "search_tol")
FORMATS = ("csv", "json")
CONFIG_KEYS = ("command", "params", "output", "format", "seed", "tolerances")


def _coerce(name: str, kind: type, value):
    if value is REQUIRED:
        return value
    try:
        if kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        return kind(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"parameter {name!r} must be of type {kind.__name__}, got {value!r}") from e


@dataclass
class RunConfig:
    """One command invocation: parameters, output target and tolerance overrides."""

    command: str
    params: dict = field(default_factory=dict)
    output: Optional[str] = None
    format: str = "csv"
    seed: int = 0
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMAND_SCHEMAS:
            raise ConfigError(f"unknown command {self.command!r}, expected one of {sorted(COMMAND_SCHEMAS)}")
        schema = COMMAND_SCHEMAS[self.command]
        unknown = set(self.params) - set(schema)
        if unknown:
            raise ConfigError(f"unknown parameters for {self.command}: {sorted(unknown)}")
        params = {}
        for name, (kind, default) in schema.items():
            value = _coerce(name, kind, self.params.get(name, default))
            if value is REQUIRED:
                raise ConfigError(f"{self.command} needs parameter {name!r}")
            choices = PARAM_CHOICES.get((self.command, name))
            if choices is not None and value not in choices:
                raise ConfigError(f"parameter {name!r} must be one of {choices}, got {value!r}")
            params[name] = value
        self.params = params
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        unknown = set(self.tolerances) - set(TOLERANCE_KEYS)
        if unknown:
            raise ConfigError(f"unknown tolerances: {sorted(unknown)}")
        self.tolerances = {k: _coerce(k, float, v) for k, v in self.tolerances.items()}
        self.seed = _coerce("seed", int, self.seed)
        if self.output is not None:
            self.output = str(self.output)

    def tolerance(self, name: str, default: float) -> float:
        return self.tolerances.get(name, default)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("a run configuration must be a JSON object")
        unknown = set(data) - set(CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        if "command" not in data:
            raise ConfigError("configuration needs a 'command'")
        return cls(**data)

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"malformed configuration {path}: {e}") from e
        return cls.from_dict(data)
