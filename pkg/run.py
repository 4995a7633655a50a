import argparse
import logging
import sys
import time
from pathlib import Path

from oscillators.errors import ConfigError, NumericalFailureError, OscillatorError
from utils.config import COMMAND_SCHEMAS, PARAM_CHOICES, REQUIRED, TOLERANCE_KEYS, RunConfig
from utils.logger import configure_logging, get_reporter
from utils.runners import RunResult, run_command
from utils.tables import json_text, write_text_atomic

RESULTS_DIR = Path("results")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

logger = get_reporter("run", "cli")

DESCRIPTIONS = {
    "spectrum": "classical frequencies and PT phase of a chain",
    "scan": "unbroken/broken epsilon intervals of a chain",
    "gamma-crit": "largest loss-gain amplitude with an unbroken interval, per N",
    "planar": "phase intervals, phase diagram or Im(lambda) trace of the planar trio",
    "simulate": "RK4 trajectory of a uniform chain with conservation and frequency checks",
    "impurity": "pseudo-bound mode of the continuum loss-gain impurity",
    "poly": "exact characteristic polynomial P_N",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="run.py", description="PT-symmetric oscillator networks")
    commands = parser.add_subparsers(dest="command", required=True)
    for command, schema in COMMAND_SCHEMAS.items():
        sub = commands.add_parser(command, help=DESCRIPTIONS[command], description=DESCRIPTIONS[command], allow_abbrev=False)
        for name, (kind, default) in schema.items():
            shown = "required" if default is REQUIRED else f"default {default}"
            if (command, name) in PARAM_CHOICES:
                shown += ", one of " + "|".join(PARAM_CHOICES[(command, name)])
            sub.add_argument(
                "--" + name.replace("_", "-"), dest=name, type=kind, default=argparse.SUPPRESS, help=f"{kind.__name__}, {shown}"
            )
        for name in TOLERANCE_KEYS:
            sub.add_argument("--" + name.replace("_", "-"), dest=name, type=float, default=argparse.SUPPRESS)
        sub.add_argument("--config", type=Path, help="JSON run configuration, flags override its parameters")
        sub.add_argument("--output", help="output file, results/<timestamp>/<command>.<format> when omitted")
        sub.add_argument("--format", choices=("csv", "json"), default=None)
        sub.add_argument("--seed", type=int, default=None)
        sub.add_argument("--save-config", type=Path, help="also write the resolved configuration as JSON")
        sub.add_argument("-v", "--verbose", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge the --config file (if any) with the flags given on the command line."""
    base = {"command": args.command}
    if args.config is not None:
        loaded = RunConfig.from_json(args.config)
        if loaded.command != args.command:
            raise ConfigError(f"configuration is for {loaded.command!r}, not {args.command!r}")
        base = loaded.to_dict()
    schema = COMMAND_SCHEMAS[args.command]
    given = vars(args)
    params = dict(base.get("params", {}))
    params.update({name: given[name] for name in schema if name in given})
    tolerances = dict(base.get("tolerances", {}))
    tolerances.update({name: given[name] for name in TOLERANCE_KEYS if name in given})
    base["params"] = params
    base["tolerances"] = tolerances
    for key in ("output", "format", "seed"):
        if given.get(key) is not None:
            base[key] = given[key]
    return RunConfig.from_dict(base)


def write_result(config: RunConfig, result: RunResult) -> Path:
    path = config.output
    if path is None:
        path = RESULTS_DIR / time.strftime("%Y%m%d-%H%M%S") / f"{config.command}.{config.format}"
    text = result.csv() if config.format == "csv" else json_text(result.data)
    return write_text_atomic(path, text)


def execute(config: RunConfig) -> int:
    """Run one command, write its table and print the summary lines."""
    result = run_command(config)
    path = write_result(config, result)
    for line in result.summary:
        print(line)
    logger.log(logging.INFO, f"wrote {path}")
    return EXIT_OK


def cmd_spectrum(config: RunConfig) -> int:
    return execute(config)


def cmd_scan(config: RunConfig) -> int:
    return execute(config)


def cmd_gamma_crit(config: RunConfig) -> int:
    return execute(config)


def cmd_planar(config: RunConfig) -> int:
    return execute(config)


def cmd_simulate(config: RunConfig) -> int:
    return execute(config)


def cmd_impurity(config: RunConfig) -> int:
    return execute(config)


def cmd_poly(config: RunConfig) -> int:
    return execute(config)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "scan": cmd_scan,
    "gamma-crit": cmd_gamma_crit,
    "planar": cmd_planar,
    "simulate": cmd_simulate,
    "impurity": cmd_impurity,
    "poly": cmd_poly,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = config_from_args(args)
        code = COMMANDS[config.command](config)
        if args.save_config is not None:
            write_text_atomic(args.save_config, config.to_json())
        return code
    except (NumericalFailureError, OverflowError) as e:
        logger.log(logging.DEBUG, "numerical failure", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OscillatorError as e:
        logger.log(logging.DEBUG, "invalid input", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        logger.log(logging.DEBUG, "i/o failure", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
