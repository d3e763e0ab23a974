# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Command-line interface for leave-one-out experiments on a directory of subjects"""

from __future__ import annotations
from argparse import ArgumentParser
from os import listdir, makedirs
from os.path import join

from .._format import as_dice, highlighted
from ..eval import (
    EvalReport,
    leave_one_out,
    summarize,
    training_size_sweep,
    write_reports_csv,
    write_reports_json,
    write_summary_tsv,
)
from ..phantom import read_subject
from ._common import _add_common_arguments, _load_config, _run_guarded, _log_stage
from ._logger import CLILogger

_IMAGE_SUFFIX = "_image.nrrd"


def _add_arguments(parser: ArgumentParser) -> None:
    parser.add_argument("subject_dir", type=str, help="Directory with the subjects (as written by 'phantom')")
    parser.add_argument("out_dir", type=str, help="Directory in which to write the reports")
    parser.add_argument(
        "--training-sizes",
        required=False,
        type=int,
        nargs="+",
        help="Additionally run the experiment with training sets restricted to these sizes",
    )
    _add_common_arguments(parser)


def _run(args: dict, in_logger: CLILogger) -> int:
    logger = in_logger.with_verbosity(args["verbosity"])

    def _experiment() -> None:
        config = _load_config(args)
        names = sorted(f[: -len(_IMAGE_SUFFIX)] for f in listdir(args["subject_dir"]) if f.endswith(_IMAGE_SUFFIX))
        subjects = [read_subject(args["subject_dir"], name) for name in names]
        makedirs(args["out_dir"], exist_ok=True)

        _log_stage(logger, f"Leave-one-out on {len(subjects)} subjects")
        reports = leave_one_out(subjects, config, logger.with_prefix("  "))
        _write(reports, args["out_dir"], "loo", logger)
        if not args.get("training_sizes"):
            return
        _log_stage(logger, f"Training set sizes {args['training_sizes']}")
        sweep = training_size_sweep(subjects, args["training_sizes"], config, logger.with_prefix("  "))
        for size, sized_reports in sweep.items():
            _write(sized_reports, args["out_dir"], f"size_{size}", logger)

    return _run_guarded(_experiment, logger)


def _write(reports: list[EvalReport], out_dir: str, name: str, logger: CLILogger) -> None:
    summary = summarize(reports)
    write_reports_json(join(out_dir, f"{name}.json"), reports, summary)
    write_reports_csv(join(out_dir, f"{name}.csv"), reports)
    write_summary_tsv(join(out_dir, f"{name}_summary.tsv"), summary)
    for label, entry in summary.items():
        logger.log(
            f"[{name}] label {highlighted(str(label))}: {as_dice(entry.mean)} ± {entry.stderr:.3f}\n",
            verbosity_level=1,
        )
