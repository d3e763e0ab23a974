# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Command-line interface for segmenting an image with a training manifest"""

from __future__ import annotations
from argparse import ArgumentParser
from os import makedirs
from os.path import join

from .._format import as_dice, highlighted
from .._pipeline import PipelineResult, prepare_training_subject, segment
from ..eval import dice_per_label
from ..io import (
    read_keypoints,
    read_label_volume,
    read_manifest,
    read_scalar_volume,
    write_json,
    write_keypoints,
    write_matches,
    write_volume,
)
from ._common import _add_common_arguments, _load_config, _run_guarded, _log_stage
from ._logger import CLILogger


def _add_arguments(parser: ArgumentParser) -> None:
    parser.add_argument("image", type=str, help="The image (NRRD) to segment")
    parser.add_argument("manifest", type=str, help="JSON manifest listing the training images, labels and keypoints")
    parser.add_argument("out_dir", type=str, help="Directory in which to write the results")
    parser.add_argument(
        "--keypoints", required=False, type=str, help="Precomputed keypoint file (csv) of the image to segment"
    )
    parser.add_argument(
        "--write-maps", required=False, action="store_true", help="Also write the score map of each label"
    )
    parser.add_argument(
        "--reference", required=False, type=str, help="Reference segmentation (NRRD); adds Dice values to the summary"
    )
    _add_common_arguments(parser)


def _run(args: dict, in_logger: CLILogger) -> int:
    logger = in_logger.with_verbosity(args["verbosity"])

    def _segment() -> None:
        config = _load_config(args)
        test_image = read_scalar_volume(args["image"])
        test_keypoints = read_keypoints(args["keypoints"]) if args.get("keypoints") else None
        reference = read_label_volume(args["reference"]) if args.get("reference") else None

        _log_stage(logger, "Loading training subjects")
        training = []
        for entry in read_manifest(args["manifest"]):
            training.append(
                prepare_training_subject(
                    read_scalar_volume(entry.image),
                    read_label_volume(entry.labels),
                    config,
                    read_keypoints(entry.keypoints) if entry.keypoints else None,
                )
            )
            logger.log(f"{entry.image}: {len(training[-1].keypoints)} labeled keypoints\n", verbosity_level=3)

        _log_stage(logger, "Segmentation")
        result = segment(test_image, training, config, test_keypoints, logger.with_prefix("  "))
        summary = _write_outputs(result, args, config.as_dict())
        if reference is not None:
            dices = dice_per_label(reference, result.labels)
            summary["dice"] = dices
            for label, value in dices.items():
                logger.log(f"Dice of label {highlighted(str(label))}: {as_dice(value)}\n", verbosity_level=1)
        write_json(join(args["out_dir"], "summary.json"), summary)

    return _run_guarded(_segment, logger)


def _write_outputs(result: PipelineResult, args: dict, config: dict) -> dict:
    out_dir = args["out_dir"]
    makedirs(out_dir, exist_ok=True)
    write_volume(result.labels, join(out_dir, "segmentation.nrrd"))
    write_keypoints(join(out_dir, "test_keypoints.csv"), result.test_keypoints, result.posteriors)
    write_matches(join(out_dir, "matches.csv"), [m for im in result.image_matches for m in im.matches])
    maps = result.segmentation.probability_maps
    if args.get("write_maps"):
        makedirs(join(out_dir, "maps"), exist_ok=True)
        for label in range(1, maps.num_labels + 1):
            write_volume(maps.score_volume(label), join(out_dir, "maps", f"label_{label}.nrrd"))
    return {
        "timings": result.timings,
        "num_test_keypoints": len(result.test_keypoints),
        "num_voted_keypoints": sum(1 for p in result.posteriors if p.voted_label is not None),
        "z_norm": {label: float(maps.z_norm[label - 1]) for label in range(1, maps.num_labels + 1)},
        "transfer_counts": result.segmentation.transfer_counts,
        "training_images": [
            {
                "index": im.image_index,
                "translation": im.translation,
                "eps_x": im.eps_x,
                "num_stage1": im.num_stage1,
                "num_matches": len(im.matches),
            }
            for im in result.image_matches
        ],
        "config": config,
    }
