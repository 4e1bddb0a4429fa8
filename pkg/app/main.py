# app/main.py
"""
app/main.py

CLI entrypoint for the complex hyperbolic dynamics lab.

Main responsibilities:
- Load environment variables (.env)
- Load Settings from src/config.py
- Parse the sub-command and its flags, merge them over an optional YAML config file
- Validate everything into an ExperimentConfig before dispatch
- Run the experiment(s), write CSV/JSON artifacts, render tables and verdicts

Exit codes: 0 every criterion passes, 1 a criterion fails, 2 usage or configuration error.

Run:
  python -m app.main algebra-check --n 3
  python -m app.main all --output-dir results
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import yaml
from dotenv import load_dotenv
from pydantic import ValidationError

from src.config import Settings, get_settings
from src.experiments.config import ExperimentConfig
from src.experiments.schema import SUMMARY_FILE, describe_columns
from src.experiments.suites import ExperimentResult, run_all, validate_all
from src.experiments.writer import write_json, write_result

from app.commands import COMMANDS, add_command_flags, flag_params
from app.render import (
    render_dataframe_table,
    render_error,
    render_header,
    render_params_panel,
    render_verdicts,
)

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

# Top-level keys of a config file that configure the run rather than an experiment.
RUN_KEYS = ("output_dir", "workers", "seed")


def _configure_logging(level: str) -> None:
    """
    Configure basic logging for the CLI app. Logs go to stderr; rendered tables go to stdout.
    """
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s [%(name)s] %(message)s",
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML file with parameters (flags win over file values)")
    common.add_argument("--output-dir", help="directory for CSV/JSON artifacts")
    common.add_argument("--workers", type=int, help="thread pool size for norm sweeps")
    common.add_argument("--seed", type=int, help="seed of the randomized checks")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--quiet", action="store_true", help="do not render tables to the terminal")

    parser = argparse.ArgumentParser(
        prog="lab",
        description="Numerical experiments on SU(n,1), its flows and fractal uncertainty norms.",
        epilog="CSV column orders:\n" + describe_columns(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for cmd in COMMANDS.values():
        p = sub.add_parser(cmd.name, parents=[common], help=cmd.help)
        add_command_flags(p, cmd)
    sub.add_parser("all", parents=[common], help="full acceptance suite, writes summary.json")
    return parser


def load_config_file(path: str | Path, command: str) -> tuple[dict[str, Any], dict[str, Any]]:
    """
    Returns (run settings, experiment parameters).

    A file is either flat (parameter: value for one command) or sectioned by command name;
    for 'all' it must be sectioned.
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ValueError(f"Config file {path} must hold a mapping, got {type(data).__name__}")

    run = {k: data.pop(k) for k in RUN_KEYS if k in data}
    if command == "all":
        return run, data
    sectioned = any(key in COMMANDS for key in data)
    if sectioned:
        section = data.get(command) or {}
        if not isinstance(section, dict):
            raise ValueError(f"Section {command!r} of {path} must be a mapping")
        return run, dict(section)
    return run, data


def build_config(args: argparse.Namespace, settings: Settings) -> ExperimentConfig:
    run: dict[str, Any] = {}
    params: dict[str, Any] = {}
    if args.config:
        run, params = load_config_file(args.config, args.command)
        logger.info("Loaded config file %s", args.config)
    params.update(flag_params(args))
    return ExperimentConfig(
        command=args.command,
        output_dir=args.output_dir or run.get("output_dir", settings.output_dir),
        workers=args.workers or run.get("workers", settings.workers),
        seed=args.seed if args.seed is not None else run.get("seed", settings.seed),
        params=params,
    )


def _render_result(result: ExperimentResult, max_rows: int) -> None:
    for name, df in result.tables.items():
        render_dataframe_table(df, title=name, max_rows=max_rows)
    render_verdicts(result.criteria, title=f"{result.name} verdicts")


def resolve_params(config: ExperimentConfig) -> dict[str, Any]:
    """Validated parameter models keyed by command; nothing has run yet."""
    if config.command == "all":
        return validate_all(config)
    return {config.command: config.typed_params()}


def run(config: ExperimentConfig, typed: dict[str, Any], settings: Settings, quiet: bool = False) -> int:
    """Dispatch validated parameters; returns the exit status."""
    out = config.output_dir
    if config.command == "all":
        results, verdicts = run_all(config, typed)
    else:
        params = typed[config.command]
        if not quiet:
            render_params_panel(config.command, params.model_dump(), out)
        result = COMMANDS[config.command].runner(params)
        results, verdicts = [result], result.criteria

    for result in results:
        write_result(result, out)
        if not quiet:
            _render_result(result, settings.max_render_rows)

    passed = all(verdicts.values())
    if config.command == "all":
        summary = {
            "criteria": verdicts,
            "experiments": {r.name: r.criteria for r in results},
            "passed": passed,
        }
        write_json(Path(SUMMARY_FILE).stem, summary, out)
        if not quiet:
            render_verdicts(verdicts, title="Acceptance")

    logger.info("%s finished: %s", config.command, "pass" if passed else "FAIL")
    return EXIT_PASS if passed else EXIT_FAIL


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    settings = get_settings()

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help.
        return int(exc.code or 0)

    _configure_logging(args.log_level or settings.log_level)
    if not args.quiet:
        render_header(settings.app_title)

    try:
        config = build_config(args, settings)
        typed = resolve_params(config)
    except (ValidationError, ValueError, OSError, yaml.YAMLError) as exc:
        logger.error("Invalid configuration for %s: %s", args.command, exc)
        render_error(str(exc))
        return EXIT_USAGE

    try:
        return run(config, typed, settings, quiet=args.quiet)
    except OSError as exc:
        logger.error("Could not read or write files for %s: %s", args.command, exc)
        render_error(str(exc))
        return EXIT_USAGE
    except ValueError as exc:
        # Raised by a runner on validated parameters: the experiment itself failed.
        logger.exception("%s failed while running", args.command)
        render_error(str(exc))
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
