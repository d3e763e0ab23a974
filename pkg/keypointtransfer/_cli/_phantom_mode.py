# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Command-line interface for generating a phantom corpus"""

from __future__ import annotations
from argparse import ArgumentParser
from dataclasses import replace
from os import makedirs
from os.path import join

from ..io import ManifestEntry, write_manifest
from ..phantom import MODALITY_INTENSITIES, crop_fov, generate_subject, write_subject
from ._common import _add_common_arguments, _load_config, _run_guarded, _log_stage
from ._logger import CLILogger


def _add_arguments(parser: ArgumentParser) -> None:
    parser.add_argument("out_dir", type=str, help="Directory in which to write the subjects")
    parser.add_argument("--num-subjects", required=False, type=int, default=1, help="Number of subjects (default: 1)")
    parser.add_argument(
        "--first-subject", required=False, type=int, default=0, help="Id of the first subject (default: 0)"
    )
    parser.add_argument(
        "--modality",
        required=False,
        choices=sorted(MODALITY_INTENSITIES),
        help="Intensity preset (overrides the configuration)",
    )
    parser.add_argument(
        "--crop-organ",
        required=False,
        type=int,
        help="Crop each subject around the given organ (limited field of view)",
    )
    _add_common_arguments(parser)


def _run(args: dict, in_logger: CLILogger) -> int:
    logger = in_logger.with_verbosity(args["verbosity"])

    def _generate() -> None:
        config = _load_config(args).phantom
        if args.get("modality"):
            config = replace(config, modality=args["modality"])
        makedirs(args["out_dir"], exist_ok=True)
        _log_stage(logger, f"Generating {args['num_subjects']} subject(s)")
        entries = []
        for subject_id in range(args["first_subject"], args["first_subject"] + args["num_subjects"]):
            subject = generate_subject(config, subject_id)
            if args.get("crop_organ") is not None:
                subject = crop_fov(subject, args["crop_organ"], config.fov_margin)
            image, labels, _ = write_subject(subject, args["out_dir"], f"subject_{subject_id:03d}")
            entries.append(ManifestEntry(image=image, labels=labels))
            logger.log(f"Wrote subject {subject_id} (shift {subject.provenance['global_shift']})\n", verbosity_level=2)
        write_manifest(join(args["out_dir"], "manifest.json"), entries)

    return _run_guarded(_generate, logger)
