# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Evaluation: Dice overlap, voting statistics and leave-one-out experiments"""

from ._metrics import VotingStats, dice, dice_per_label, voting_statistics
from ._experiments import EvalReport, LabelSummary, evaluate, leave_one_out, summarize, training_size_sweep
from ._writers import write_reports_csv, write_reports_json, write_summary_tsv

__all__ = [
    "EvalReport",
    "LabelSummary",
    "VotingStats",
    "dice",
    "dice_per_label",
    "evaluate",
    "leave_one_out",
    "summarize",
    "training_size_sweep",
    "voting_statistics",
    "write_reports_csv",
    "write_reports_json",
    "write_summary_tsv",
]
