# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Test the evaluation metrics and the leave-one-out experiments"""
from __future__ import annotations

import numpy as np
import pytest

from keypointtransfer import PipelineConfig
from keypointtransfer._common import ConfigError
from keypointtransfer.descriptor import DescribedKeypoint, DESCRIPTOR_SIZE
from keypointtransfer.eval import (
    EvalReport,
    VotingStats,
    dice,
    dice_per_label,
    leave_one_out,
    summarize,
    training_size_sweep,
    voting_statistics,
    write_reports_csv,
    write_reports_json,
    write_summary_tsv,
)
from keypointtransfer.io import read_json
from keypointtransfer.phantom import generate_subject
from keypointtransfer.scalespace import Keypoint
from keypointtransfer.volume import GeometryError, LabelVolume
from keypointtransfer.voting import LabelPosterior

from _common import small_phantom_config


def _labels(values) -> LabelVolume:
    return LabelVolume(np.array(values, dtype=np.uint8).reshape(-1, 1, 1), num_labels=2)


@pytest.mark.parametrize(
    "reference, segmentation, expected",
    [
        ([1, 1, 1, 0], [1, 1, 1, 0], 1.0),
        ([1, 1, 0, 0], [0, 0, 1, 1], 0.0),
        ([0, 0, 0, 0], [0, 0, 0, 0], 1.0),
        ([1, 0, 0, 0], [0, 0, 0, 0], 0.0),
        ([1, 1, 1, 0], [0, 1, 1, 1], 2.0 / 3.0),
    ],
)
def test_dice(reference, segmentation, expected):
    assert dice(_labels(reference), _labels(segmentation), 1) == pytest.approx(expected)
    assert dice(_labels(segmentation), _labels(reference), 1) == pytest.approx(expected)


def test_dice_per_label():
    result = dice_per_label(_labels([1, 2, 2, 0]), _labels([1, 2, 0, 0]))
    assert result == pytest.approx({1: 1.0, 2: 2.0 / 3.0})


def test_dice_requires_same_geometry():
    with pytest.raises(GeometryError):
        dice(_labels([1, 0]), _labels([1, 0, 0]), 1)


def _keypoint(x: float) -> DescribedKeypoint:
    return DescribedKeypoint(Keypoint((x, 0.0, 0.0), 1.6, 1.0), np.full(DESCRIPTOR_SIZE, 0.125))


def _vote(label) -> LabelPosterior:
    return LabelPosterior(scores=np.zeros(2), voted_label=label)


def test_voting_statistics():
    reference = _labels([1, 1, 1, 1, 1, 2, 0])
    keypoints = [_keypoint(float(i)) for i in range(7)]
    posteriors = [_vote(1), _vote(1), _vote(1), _vote(2), _vote(None), _vote(None), _vote(1)]
    stats = voting_statistics(keypoints, posteriors, reference)
    assert stats[1] == VotingStats(count=5, fraction_labeled=0.8, fraction_correct=0.75)
    assert stats[2] == VotingStats(count=1, fraction_labeled=0.0, fraction_correct=None)
    assert stats[0] == VotingStats(count=1, fraction_labeled=1.0, fraction_correct=0.0)


def test_voting_statistics_without_keypoints():
    stats = voting_statistics([], [], _labels([1, 2]))
    assert stats[1] == VotingStats(count=0, fraction_labeled=None, fraction_correct=None)
    with pytest.raises(ValueError):
        voting_statistics([_keypoint(0.0)], [], _labels([1, 2]))


def _reports() -> list[EvalReport]:
    return [
        EvalReport(subject=0, per_label_dice={1: 0.5, 2: 1.0}),
        EvalReport(subject=1, per_label_dice={1: 1.0, 2: 1.0}),
        EvalReport(subject=2, error='segmentation "failed"'),
    ]


def test_summarize_skips_failed_folds():
    summary = summarize(_reports())
    assert list(summary) == [1, 2]
    assert summary[1].mean == pytest.approx(0.75)
    assert summary[1].stderr == pytest.approx(0.25)
    assert summary[1].count == 2
    assert summary[2].stderr == 0.0
    assert _reports()[0].mean_dice() == pytest.approx(0.75)
    assert _reports()[2].mean_dice() is None


def test_report_writers(tmp_path):
    reports = _reports()
    reports[0].voting_stats = {0: VotingStats(3, 1.0, 0.0), 1: VotingStats(4, 0.5, 1.0), 2: VotingStats(0, None, None)}
    summary = summarize(reports)

    content = read_json(write_reports_json(str(tmp_path / "loo.json"), reports, summary))
    assert len(content["reports"]) == 3
    assert content["summary"]["1"]["mean"] == pytest.approx(0.75)
    assert content["reports"][2]["error"] == 'segmentation "failed"'

    write_reports_csv(str(tmp_path / "loo.csv"), reports)
    lines = (tmp_path / "loo.csv").read_text().splitlines()
    assert lines[0] == "subject,label,dice,keypoints,fraction_labeled,fraction_correct,error"
    assert lines[1] == "0,1,0.500000,4,0.500000,1.000000,"
    assert lines[2] == "0,2,1.000000,0,,,"
    assert lines[-1] == "2,,,,,,\"segmentation 'failed'\""

    write_summary_tsv(str(tmp_path / "summary.tsv"), summary)
    rows = (tmp_path / "summary.tsv").read_text().splitlines()
    assert rows[0].startswith("#")
    assert rows[1].split("\t") == ["1", "0.750000", "0.250000"]


@pytest.fixture(scope="module")
def identical_subjects():
    subject = generate_subject(small_phantom_config(), 0)
    return [subject, subject]


def test_leave_one_out_with_identical_subjects(identical_subjects):
    reports = leave_one_out(identical_subjects, PipelineConfig())
    assert [r.subject for r in reports] == [0, 1]
    for report in reports:
        assert report.succeeded
        assert set(report.per_label_dice) == {1, 2, 3, 4}
        organs = [label for label, stats in report.voting_stats.items() if label != 0 and stats.count > 0]
        assert sorted(organs) == [1, 2, 3, 4]
        for label in organs:
            assert report.per_label_dice[label] == 1.0
        assert set(report.timings) == {"extraction", "matching", "voting", "transfer"}
        assert report.matching[0] > 0


def test_leave_one_out_requires_two_subjects(identical_subjects):
    with pytest.raises(ConfigError):
        leave_one_out(identical_subjects[:1])


def test_training_size_sweep_structure(identical_subjects):
    subjects = identical_subjects + [generate_subject(small_phantom_config(), 1)]
    sweep = training_size_sweep(subjects, [1, 2])
    assert list(sweep) == [1, 2]
    for size, reports in sweep.items():
        assert [r.subject for r in reports] == [0, 1, 2]
        assert all(len(r.matching) == size for r in reports if r.succeeded)
    with pytest.raises(ConfigError):
        training_size_sweep(subjects, [3])
