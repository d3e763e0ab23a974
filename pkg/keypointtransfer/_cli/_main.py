# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Command-line interface for keypointtransfer"""

from sys import version_info
from argparse import ArgumentParser
from typing import Optional

from keypointtransfer import __version__

from ._logger import CLILogger
from ._common import EXIT_INPUT_ERROR
from . import _phantom_mode, _extract_mode, _segment_mode, _eval_mode, _loo_mode

_MODES = {
    "phantom": (_phantom_mode, "Generate a corpus of synthetic labeled subjects"),
    "extract": (_extract_mode, "Extract (and optionally label) the keypoints of an image"),
    "segment": (_segment_mode, "Segment an image by keypoint transfer from training subjects"),
    "eval": (_eval_mode, "Compute the Dice overlap between two segmentations"),
    "loo": (_loo_mode, "Run leave-one-out experiments on a directory of subjects"),
}


def main(argv=None, logger: Optional[CLILogger] = None) -> int:
    logger = logger or CLILogger()
    parser = ArgumentParser(description="Segment volumes by transferring organ masks along keypoint matches")
    parser.add_argument(
        "--version",
        "-v",
        action="version",
        version=_get_version_info(),
        help="show version information",
    )

    sub_parsers = parser.add_subparsers(title="subcommands", dest="command", required=True)
    for name, (mode, description) in _MODES.items():
        mode_parser = sub_parsers.add_parser(name, help=description)
        mode._add_arguments(mode_parser)
        mode_parser.set_defaults(func=mode._run)

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        if e.code in (0, None):
            raise
        return EXIT_INPUT_ERROR
    return args.func(vars(args), logger)


def _get_version_info() -> str:
    python_version = f"{version_info.major}.{version_info.minor}.{version_info.micro}"
    version = __version__ if __version__ != "unknown" else "(unknown version)"
    return f"keypointtransfer {version} [Python {python_version}]"
