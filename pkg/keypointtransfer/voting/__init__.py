# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Keypoint label voting"""

from ._voting import (
    LabelPosterior,
    TrainingLabels,
    VotingConfig,
    keypoint_likelihoods,
    matches_per_keypoint,
    vote_keypoints,
    vote_label,
)

__all__ = [
    "LabelPosterior",
    "TrainingLabels",
    "VotingConfig",
    "keypoint_likelihoods",
    "matches_per_keypoint",
    "vote_keypoints",
    "vote_label",
]
