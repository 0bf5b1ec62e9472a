"""Command-line interface: eitcool run | validate | constants."""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .config import ConfigError, load_config
from .constants import constants_table
from .runner import run


def bundled_config_path(name: str) -> Path:
    """Path to a bundled configuration file (fig2.cfg, fig3.cfg, ...)."""
    path = resources.files("eitcool") / "configs" / name
    return Path(str(path))


def _resolve_config_arg(arg: str) -> Path:
    path = Path(arg)
    if path.exists():
        return path
    bundled = bundled_config_path(arg)
    if bundled.exists():
        return bundled
    raise FileNotFoundError(f"config file {arg!r} not found (also not a bundled config)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eitcool",
        description="Dark-resonance ground-state cooling simulator for a trapped ion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a task configuration, emit CSV")
    p_run.add_argument("config", help="config file path or bundled name (e.g. fig2.cfg)")
    p_run.add_argument("--out", default=".", help="output directory (default: cwd)")
    p_run.add_argument("--threads", type=int, default=1, help="sweep-point parallelism")
    p_run.add_argument("--verbose", action="store_true")

    p_val = sub.add_parser("validate", help="parse and validate a config, report defaults")
    p_val.add_argument("config")

    sub.add_parser("constants", help="print the frozen physical constant table")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "constants":
            for name, value in constants_table().items():
                print(f"{name} = {value!r}")
            return 0
        path = _resolve_config_arg(args.config)
        config = load_config(path)
        if args.command == "validate":
            print(f"{path}: OK (task = {config.task})")
            for key in config.applied_defaults:
                print(f"  default applied: {key} = {config.values[key]!r}")
            return 0
        run(config, args.out, threads=args.threads, verbose=args.verbose)
        return 0
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # solver and runtime failures
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
