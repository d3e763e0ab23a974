# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Output of evaluation reports as JSON, CSV and gnuplot-compatible TSV"""

from __future__ import annotations
from dataclasses import asdict
from typing import Sequence

from ..io import VolumeIOError, write_json
from ._experiments import EvalReport, LabelSummary


def write_reports_json(
    filename: str, reports: Sequence[EvalReport], summary: dict[int, LabelSummary] | None = None
) -> str:
    content = {"reports": [asdict(r) for r in reports]}
    if summary is not None:
        content["summary"] = {label: asdict(s) for label, s in summary.items()}
    return write_json(filename, content)


def write_reports_csv(filename: str, reports: Sequence[EvalReport]) -> str:
    """Write one row per (subject, label) with Dice and voting statistics"""
    lines = ["subject,label,dice,keypoints,fraction_labeled,fraction_correct,error"]
    for report in reports:
        labels = sorted(set(report.per_label_dice) | {label for label in report.voting_stats if label != 0})
        if not labels:
            lines.append(f"{report.subject},,,,,,{_quoted(report.error)}")
        for label in labels:
            stats = report.voting_stats.get(label)
            lines.append(
                ",".join(
                    [
                        str(report.subject),
                        str(label),
                        _optional(report.per_label_dice.get(label)),
                        str(stats.count) if stats else "",
                        _optional(stats.fraction_labeled if stats else None),
                        _optional(stats.fraction_correct if stats else None),
                        _quoted(report.error),
                    ]
                )
            )
    return _write_lines(filename, lines)


def write_summary_tsv(filename: str, summary: dict[int, LabelSummary]) -> str:
    """Write label, mean and standard error per line (e.g. for gnuplot error bars)"""
    lines = ["# label\tmean\tstderr"] + [f"{label}\t{s.mean:.6f}\t{s.stderr:.6f}" for label, s in summary.items()]
    return _write_lines(filename, lines)


def _optional(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def _quoted(text: str | None) -> str:
    return "" if text is None else '"' + text.replace('"', "'") + '"'


def _write_lines(filename: str, lines: list[str]) -> str:
    try:
        with open(filename, "w") as out_file:
            out_file.write("\n".join(lines) + "\n")
    except OSError as e:
        raise VolumeIOError(f"Could not write '{filename}': {e}") from e
    return filename
