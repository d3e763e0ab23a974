# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Leave-one-out experiments on a corpus of subjects"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .._common import ConfigError, _measure_time
from .._format import as_dice, as_error, highlighted
from .._numpy_utils import standard_error
from .._pipeline import PipelineConfig, PipelineResult, extract_keypoints, segment
from ..descriptor import DescribedKeypoint, assign_labels
from ..phantom import Subject
from ..protocols import Logger, NullLogger
from ..transfer import TrainingSubject
from ..volume import LabelVolume
from ._metrics import VotingStats, dice_per_label, voting_statistics


@dataclass
class EvalReport:
    """
    Evaluation of one segmentation run.

    Args:
        subject: Index of the test subject.
        per_label_dice: Dice overlap per organ label.
        voting_stats: Voting statistics per label (0 = background).
        timings: Wall-clock time per stage in seconds.
        matching: Number of final matches per training image.
        config: The effective pipeline configuration.
        error: Description of the failure if the run did not complete.
    """

    subject: int
    per_label_dice: dict[int, float] = field(default_factory=dict)
    voting_stats: dict[int, VotingStats] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    matching: dict[int, int] = field(default_factory=dict)
    config: dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def succeeded(self) -> bool:
        return self.error is None

    def mean_dice(self) -> float | None:
        return float(np.mean(list(self.per_label_dice.values()))) if self.per_label_dice else None


@dataclass(frozen=True)
class LabelSummary:
    """Mean and standard error of a label's Dice overlap over the successful folds."""

    mean: float
    stderr: float
    count: int


def evaluate(
    result: PipelineResult,
    reference: LabelVolume,
    subject: int = 0,
    config: PipelineConfig | None = None,
) -> EvalReport:
    """Compute the report of a pipeline run against the reference segmentation"""
    return EvalReport(
        subject=subject,
        per_label_dice=dice_per_label(reference, result.labels),
        voting_stats=voting_statistics(result.test_keypoints, result.posteriors, reference),
        timings=dict(result.timings),
        matching={im.image_index: len(im.matches) for im in result.image_matches},
        config=config.as_dict() if config is not None else {},
    )


@dataclass
class _PreparedSubject:
    subject: Subject
    keypoints: list[DescribedKeypoint]
    labeled: list[DescribedKeypoint]
    extraction_time: float


def _prepare(subjects: Sequence[Subject], config: PipelineConfig, logger: Logger) -> list[_PreparedSubject]:
    prepared = []
    for index, subject in enumerate(subjects):
        time, keypoints = _measure_time(extract_keypoints)(subject.image, config)
        logger.log(f"Subject {index}: {len(keypoints)} keypoints\n", verbosity_level=2)
        prepared.append(
            _PreparedSubject(
                subject=subject,
                keypoints=keypoints,
                labeled=assign_labels(keypoints, subject.labels),
                extraction_time=time,
            )
        )
    return prepared


def _run_fold(
    test_index: int,
    test: _PreparedSubject,
    training: Sequence[_PreparedSubject],
    config: PipelineConfig,
    logger: Logger,
) -> EvalReport:
    try:
        result = segment(
            test.subject.image,
            [TrainingSubject(p.subject.image, p.subject.labels, p.labeled) for p in training],
            config,
            test_keypoints=test.keypoints,
        )
        result.timings["extraction"] = test.extraction_time
        report = evaluate(result, test.subject.labels, test_index, config)
        dices = ", ".join(f"{label}: {as_dice(value)}" for label, value in report.per_label_dice.items())
        logger.log(f"Fold {highlighted(str(test_index))}: {dices}\n", verbosity_level=1)
        return report
    except Exception as e:
        logger.log(as_error(f"Fold {test_index} failed: {e}\n"), verbosity_level=1)
        return EvalReport(subject=test_index, config=config.as_dict(), error=str(e))


def leave_one_out(
    subjects: Sequence[Subject],
    config: PipelineConfig | None = None,
    logger: Logger = NullLogger(),
) -> list[EvalReport]:
    """
    Segment each subject using all others as training set.

    Failing folds are reported with their error instead of aborting the experiment.
    """
    if len(subjects) < 2:  # noqa: PLR2004
        raise ConfigError(f"Leave-one-out requires at least two subjects, got {len(subjects)}")
    config = config or PipelineConfig()
    prepared = _prepare(subjects, config, logger)
    return [
        _run_fold(i, prepared[i], [p for j, p in enumerate(prepared) if j != i], config, logger)
        for i in range(len(prepared))
    ]


def training_size_sweep(
    subjects: Sequence[Subject],
    sizes: Sequence[int],
    config: PipelineConfig | None = None,
    logger: Logger = NullLogger(),
) -> dict[int, list[EvalReport]]:
    """
    Run leave-one-out experiments with restricted training sets.

    For each size k, every subject is segmented using the first k of the remaining subjects.
    """
    if any(not 1 <= k < len(subjects) for k in sizes):
        raise ConfigError(f"Training set sizes must be in [1, {len(subjects) - 1}], got {list(sizes)}")
    config = config or PipelineConfig()
    prepared = _prepare(subjects, config, logger)
    result = {}
    for size in sizes:
        logger.log(f"Training set size {highlighted(str(size))}\n", verbosity_level=1)
        result[size] = [
            _run_fold(i, prepared[i], [p for j, p in enumerate(prepared) if j != i][:size], config, logger)
            for i in range(len(prepared))
        ]
    return result


def summarize(reports: Sequence[EvalReport]) -> dict[int, LabelSummary]:
    """Return mean and standard error of the Dice overlap per label over the successful reports"""
    values: dict[int, list[float]] = {}
    for report in reports:
        if not report.succeeded:
            continue
        for label, value in report.per_label_dice.items():
            values.setdefault(label, []).append(value)
    return {
        label: LabelSummary(mean=float(np.mean(v)), stderr=standard_error(v), count=len(v))
        for label, v in sorted(values.items())
    }
