# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Command-line interface for comparing a segmentation against a reference"""

from __future__ import annotations
from argparse import ArgumentParser

from .._format import as_dice, highlighted
from ..eval import dice_per_label
from ..io import read_label_volume, write_json
from ._common import _run_guarded
from ._logger import CLILogger


def _add_arguments(parser: ArgumentParser) -> None:
    parser.add_argument("reference", type=str, help="The reference segmentation (NRRD)")
    parser.add_argument("segmentation", type=str, help="The segmentation (NRRD) to evaluate")
    parser.add_argument("--out", required=False, type=str, help="JSON file in which to write the Dice values")
    parser.add_argument(
        "--verbosity", required=False, default=2, type=int, help="Set the verbosity level (between 0 and 3; default: 2)"
    )


def _run(args: dict, in_logger: CLILogger) -> int:
    logger = in_logger.with_verbosity(args["verbosity"])

    def _evaluate() -> None:
        dices = dice_per_label(read_label_volume(args["reference"]), read_label_volume(args["segmentation"]))
        for label, value in dices.items():
            logger.log(f"Dice of label {highlighted(str(label))}: {as_dice(value)}\n", verbosity_level=1)
        if args.get("out"):
            write_json(args["out"], {"dice": dices})

    return _run_guarded(_evaluate, logger)
