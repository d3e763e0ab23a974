# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Segmentation overlap and keypoint voting statistics"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..descriptor import DescribedKeypoint
from ..voting import LabelPosterior
from ..volume import BACKGROUND, LabelVolume, check_same_geometry


def dice(reference: LabelVolume, segmentation: LabelVolume, label: int) -> float:
    """
    Return the Dice overlap 2|A∩B| / (|A| + |B|) of the given label in both volumes.

    Two empty masks have overlap 1, a single empty mask has overlap 0.
    """
    check_same_geometry(reference, segmentation, "reference and segmentation")
    a, b = reference.mask(label), segmentation.mask(label)
    size_a, size_b = int(np.count_nonzero(a)), int(np.count_nonzero(b))
    if size_a == 0 and size_b == 0:
        return 1.0
    return 2.0 * int(np.count_nonzero(a & b)) / (size_a + size_b)


def dice_per_label(reference: LabelVolume, segmentation: LabelVolume) -> dict[int, float]:
    """Return the Dice overlap of all foreground labels of the reference"""
    return {label: dice(reference, segmentation, label) for label in reference.labels}


@dataclass(frozen=True)
class VotingStats:
    """
    Voting outcome of the test keypoints lying in one organ of the reference segmentation.

    Args:
        count: Number of keypoints.
        fraction_labeled: Fraction of keypoints that received a vote (None without keypoints).
        fraction_correct: Fraction of the voted keypoints whose vote is correct (None without votes).
    """

    count: int
    fraction_labeled: Optional[float]
    fraction_correct: Optional[float]


def voting_statistics(
    keypoints: Sequence[DescribedKeypoint],
    posteriors: Sequence[LabelPosterior],
    reference: LabelVolume,
) -> dict[int, VotingStats]:
    """
    Compare the votes of the test keypoints against the reference labels at their locations.

    The result contains one entry per foreground label and one for the background (label 0).
    """
    if len(keypoints) != len(posteriors):
        raise ValueError("Number of posteriors must match the number of keypoints")
    truth = [int(reference.value_at(kp.voxel)) for kp in keypoints]
    result = {}
    for label in [BACKGROUND, *reference.labels]:
        votes = [p.voted_label for p, t in zip(posteriors, truth) if t == label]
        labeled = [v for v in votes if v is not None]
        result[label] = VotingStats(
            count=len(votes),
            fraction_labeled=len(labeled) / len(votes) if votes else None,
            fraction_correct=sum(1 for v in labeled if v == label) / len(labeled) if labeled else None,
        )
    return result
