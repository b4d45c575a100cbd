#!/usr/bin/env python3
"""
Command-line runner for the figure reproductions.

    mixedness list
    mixedness <experiment> [--config FILE] [--<field> VALUE]... [--param KEY=VALUE]...
              [--out PATH] [--emit-plot] [--with-exact] [--workers N] [--log-level LEVEL]

Exit codes: 0 success, 1 configuration or usage error, 2 numerical or I/O
failure.
"""

import argparse
import logging
import os
import sys
from dataclasses import fields
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from mixedness import __version__
from mixedness.config import FIELD_KINDS, ExperimentConfig, load_config_file, resolve_config
from mixedness.errors import ConfigError, MixednessError
from mixedness.experiments import get_experiment
from mixedness.run_store import RunStore
from mixedness.sweep import SweepExecutor
from mixedness.templates import get_all_figures, get_figure_template

LOG_LEVEL_ENV = "MIXEDNESS_LOG_LEVEL"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAILURE = 2

# Flags with their own handling; every other config field gets --<field>.
_SPECIAL_FIELDS = ("experiment", "emit_plot", "with_exact", "out")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as ConfigError."""

    def error(self, message: str):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mixedness", description="Short-time mixedness timescale experiments",
                     allow_abbrev=False)
    parser.add_argument("experiment", choices=get_all_figures() + ["list"],
                        help="experiment id, or 'list' to show the templates")
    parser.add_argument("--config", help="JSON, TOML or key = value config file")
    parser.add_argument("--out", default=argparse.SUPPRESS, help="CSV path (default <experiment>.csv)")
    parser.add_argument("--emit-plot", dest="emit_plot", action="store_true", default=argparse.SUPPRESS,
                        help="also write a gnuplot script next to the CSV")
    parser.add_argument("--with-exact", dest="with_exact", action="store_true", default=argparse.SUPPRESS,
                        help="fig4/fig5: add the exact marginal entropies")
    parser.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                        help="set any config field (repeatable)")
    parser.add_argument("--workers", type=int, default=None,
                        help="sweep threads (default: MIXEDNESS_WORKERS or 1)")
    parser.add_argument("--log-level", default=None, help=f"logging level (default: {LOG_LEVEL_ENV} or WARNING)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    group = parser.add_argument_group("config fields")
    for f in fields(ExperimentConfig):
        if f.name in _SPECIAL_FIELDS:
            continue
        group.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, default=argparse.SUPPRESS,
                           metavar=FIELD_KINDS[f.name].upper())
    return parser


def configure_logging(level: Optional[str]) -> None:
    name = (level or os.getenv(LOG_LEVEL_ENV) or "WARNING").upper()
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        raise ConfigError(f"unknown log level '{name}'", field="log_level")
    logging.basicConfig(level=numeric, format=LOG_FORMAT)


def collect_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}
    for item in args.param:
        if "=" not in item:
            raise ConfigError(f"expected KEY=VALUE, got {item!r}", field="param")
        key, value = (part.strip() for part in item.split("=", 1))
        overrides[key] = value
    for f in fields(ExperimentConfig):
        if f.name != "experiment" and hasattr(args, f.name):
            overrides[f.name] = getattr(args, f.name)
    return overrides


def print_templates() -> None:
    print("=" * 60)
    print("EXPERIMENTS")
    print("=" * 60)
    for experiment in get_all_figures():
        template = get_figure_template(experiment)
        print(f"\n  • {experiment}: {template['name']}")
        print(f"    {template['description']}")
        if template["columns"]:
            print(f"    columns: {', '.join(template['columns'])}")


def run(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    if args.experiment == "list":
        print_templates()
        return EXIT_OK

    file_values = load_config_file(args.config) if args.config else None
    config = resolve_config(args.experiment, file_values, collect_overrides(args))
    executor = SweepExecutor(args.workers)
    result = get_experiment(config, RunStore(), executor).run()

    print(f"✓ {config.experiment}: {len(result.table.rows)} rows written to {result.csv_path}")
    if result.plot_path is not None:
        print(f"✓ plot script written to {result.plot_path}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point shared by ``python -m mixedness`` and experiments_cli.py.

    Returns:
        Process exit code
    """
    try:
        return run(argv)
    except ConfigError as e:
        print(f"✗ Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except MixednessError as e:
        print(f"✗ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as e:
        print(f"✗ I/O error: {e}", file=sys.stderr)
        return EXIT_FAILURE
