"""Command-line entry point bundling the scenarios as reproducible experiments.

Usage:
    fieldcast list
    fieldcast run <scenario> [--rows N --cols N --n N --spacing X --noise X
                              --radius X --dt X --duration X --seed N
                              --out trace.csv --frames dir --check --eager
                              --config file ...scenario flags]

``--check`` runs the scenario's built-in oracle and exits nonzero when any
check fails.  ``--config`` reads flat ``key=value`` lines (same keys as the
flags); explicit flags override file values.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import AggregateError
from .scenarios import SCENARIOS, ScenarioConfig

_FLAG_FIELDS = {
    "rows": int,
    "cols": int,
    "n": int,
    "spacing": float,
    "noise": float,
    "radius": float,
    "dt": float,
    "duration": float,
    "seed": int,
    "frame_interval": float,
    "width": float,
    "leader_radius": float,
    "speed": float,
    "noise_amplitude": float,
    "model_dim": int,
    "learning_rate": float,
    "clusters": int,
    "threshold": float,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fieldcast", description="Aggregate-computing scenario runner"
    )
    parser.add_argument("--version", action="version", version=f"fieldcast {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("list", help="enumerate available scenarios")

    runner = commands.add_parser("run", help="execute one scenario")
    runner.add_argument("scenario", choices=sorted(SCENARIOS))
    for name, kind in _FLAG_FIELDS.items():
        runner.add_argument(f"--{name.replace('_', '-')}", type=kind, default=None)
    runner.add_argument("--out", type=str, default=None, help="trace CSV path")
    runner.add_argument("--frames", type=str, default=None, help="frame snapshot directory")
    runner.add_argument("--config", type=str, default=None, help="key=value config file")
    runner.add_argument("--check", action="store_true", help="run the built-in oracle")
    runner.add_argument(
        "--eager", action="store_true", help="disable lazy transmission of state values"
    )
    return parser


def parse_config_file(path: str) -> dict:
    """Flat ``key=value`` lines; blank lines and ``#`` comments are ignored."""
    values = {}
    for line_number, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise AggregateError(f"{path}:{line_number}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key in _FLAG_FIELDS:
            values[key] = _FLAG_FIELDS[key](value)
        elif key in ("out", "frames"):
            values[key] = value
        elif key in ("check", "eager", "lazy"):
            values[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            raise AggregateError(f"{path}:{line_number}: unknown config key {key!r}")
    return values


def resolve_config(args: argparse.Namespace) -> ScenarioConfig:
    """Defaults, then scenario defaults, then config file, then explicit flags."""
    spec = SCENARIOS[args.scenario]
    config = ScenarioConfig(scenario=args.scenario)
    merged: dict = dict(spec.defaults)
    if args.config:
        file_values = parse_config_file(args.config)
        if "eager" in file_values:
            file_values["lazy"] = not file_values.pop("eager")
        merged.update(file_values)
    for name in _FLAG_FIELDS:
        flag_value = getattr(args, name)
        if flag_value is not None:
            merged[name] = flag_value
    if args.out is not None:
        merged["out"] = args.out
    if args.frames is not None:
        merged["frames"] = args.frames
    if args.check:
        merged["check"] = True
    if args.eager:
        merged["lazy"] = False
    return config.overridden(**merged)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:  # argparse handles --version/usage errors
        return int(exit_request.code or 0)

    if args.command == "list":
        for spec in SCENARIOS.values():
            print(f"{spec.name:12s} {spec.description}")
        return 0

    try:
        config = resolve_config(args)
        result = SCENARIOS[args.scenario].run(config)
    except (AggregateError, OSError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 2

    print(
        f"{result.scenario}: {len(result.results)} nodes, "
        f"{result.simulator.rounds_executed} rounds, seed {config.seed}"
    )
    if config.out:
        print(f"trace written to {config.out}")
    if config.frames:
        print(f"frames written to {config.frames}")
    if config.check:
        for check in result.checks:
            print(str(check))
        if not result.ok:
            return 1
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
