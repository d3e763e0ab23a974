# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Common functionality used in the command-line interface"""

from __future__ import annotations
from argparse import ArgumentParser
from dataclasses import replace
from typing import Callable

from .._common import ConfigError
from .._format import as_error, as_stage, as_seconds
from .._pipeline import EmptyTrainingSetError, PipelineConfig
from ..volume import GeometryError
from ._logger import CLILogger

EXIT_SUCCESS = 0
EXIT_INPUT_ERROR = 2
EXIT_PIPELINE_ERROR = 3

_INPUT_ERRORS = (IOError, ConfigError, GeometryError, EmptyTrainingSetError)


def _add_common_arguments(parser: ArgumentParser) -> None:
    parser.add_argument("--config", required=False, type=str, help="JSON file with the pipeline configuration")
    parser.add_argument(
        "--threads", required=False, type=int, help="Maximum number of worker threads (overrides the configuration)"
    )
    parser.add_argument(
        "--seed", required=False, type=int, help="Seed of the phantom corpus (overrides the configuration)"
    )
    parser.add_argument(
        "--verbosity", required=False, default=2, type=int, help="Set the verbosity level (between 0 and 3; default: 2)"
    )


def _load_config(args: dict) -> PipelineConfig:
    config = PipelineConfig.from_json(args["config"]) if args.get("config") else PipelineConfig()
    if args.get("threads") is not None:
        config = replace(config, threads=args["threads"])
    if args.get("seed") is not None:
        config = replace(config, phantom=replace(config.phantom, seed=args["seed"]))
    return config


def _run_guarded(action: Callable[[], None], logger: CLILogger) -> int:
    """Run the action and map raised exceptions to exit codes"""
    try:
        action()
    except _INPUT_ERRORS as e:
        logger.log(as_error(f"Input error: {e}\n"), verbosity_level=1)
        return EXIT_INPUT_ERROR
    except Exception as e:
        logger.log(as_error(f"Pipeline error: {e}\n"), verbosity_level=1)
        return EXIT_PIPELINE_ERROR
    return EXIT_SUCCESS


def _log_stage(logger: CLILogger, name: str, seconds: float | None = None) -> None:
    suffix = f" ({as_seconds(seconds)})" if seconds is not None else ""
    logger.log(f"{as_stage(name)}{suffix}\n", verbosity_level=1)
