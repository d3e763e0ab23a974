# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Command-line interface for extracting the keypoints of an image"""

from __future__ import annotations
from argparse import ArgumentParser

from .._common import _measure_time
from .._format import as_warning, highlighted
from .._pipeline import extract_keypoints
from ..io import read_label_volume, read_scalar_volume, write_keypoints
from ._common import _add_common_arguments, _load_config, _run_guarded, _log_stage
from ._logger import CLILogger


def _add_arguments(parser: ArgumentParser) -> None:
    parser.add_argument("image", type=str, help="The image (NRRD) whose keypoints to extract")
    parser.add_argument("out", type=str, help="The keypoint file (csv) to write")
    parser.add_argument(
        "--labels",
        required=False,
        type=str,
        help="Segmentation (NRRD) of the image; keypoints are labeled and background keypoints dropped",
    )
    _add_common_arguments(parser)


def _run(args: dict, in_logger: CLILogger) -> int:
    logger = in_logger.with_verbosity(args["verbosity"])

    def _extract() -> None:
        config = _load_config(args)
        image = read_scalar_volume(args["image"])
        labels = read_label_volume(args["labels"]) if args.get("labels") else None
        seconds, keypoints = _measure_time(extract_keypoints)(image, config, labels)
        _log_stage(logger, "Keypoint extraction", seconds)
        if not keypoints:
            logger.log(as_warning("No keypoints with a valid descriptor found\n"), verbosity_level=1)
        write_keypoints(args["out"], keypoints)
        logger.log(f"Wrote {highlighted(str(len(keypoints)))} keypoints to '{args['out']}'\n", verbosity_level=2)

    return _run_guarded(_extract, logger)
