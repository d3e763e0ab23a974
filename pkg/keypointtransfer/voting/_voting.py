# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Inference of organ labels for test keypoints by marginalizing over their matches"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .._common import ordered_map
from .._numpy_utils import Array
from ..matching import ImageMatches, Match

TrainingLabels = Sequence[Sequence[Optional[int]]]


@dataclass(frozen=True)
class VotingConfig:
    """
    Switches of the label voting.

    Args:
        use_keypoint_likelihood: Weight matches with the Gaussian descriptor likelihood p(F | 𝓕, m).
        use_match_probability: Weight matches with their probability p(m).
    """

    use_keypoint_likelihood: bool = True
    use_match_probability: bool = True


@dataclass(frozen=True)
class LabelPosterior:
    """
    Unnormalized label scores of a test keypoint and the resulting vote.

    Args:
        scores: Score per label, where scores[l - 1] belongs to label l.
        voted_label: The label with maximal score, or None if the keypoint has no (weighted) match.
        tau_sq: Squared descriptor distance of the keypoint's worst match.
    """

    scores: Array = field(compare=False, repr=False)
    voted_label: Optional[int] = None
    tau_sq: float = 0.0

    @property
    def num_labels(self) -> int:
        return len(self.scores)

    def posterior(self) -> Array:
        """Return the scores normalized over all labels (all zero if the keypoint has no vote)."""
        total = float(self.scores.sum())
        return self.scores / total if total > 0.0 else np.zeros_like(self.scores)

    def probability(self, label: int) -> float:
        """Return the normalized posterior probability of the given label"""
        return float(self.posterior()[label - 1])


def keypoint_likelihoods(matches: Sequence[Match]) -> tuple[Array, float]:
    """Return the Gaussian descriptor likelihood of each match and the variance tau² used"""
    squared = np.array([m.desc_dist**2 for m in matches], dtype=np.float64)
    tau_sq = float(squared.max()) if len(squared) > 0 else 0.0
    if tau_sq == 0.0:
        return np.ones_like(squared), tau_sq
    return np.exp(-squared / (2.0 * tau_sq)) / np.sqrt(2.0 * np.pi * tau_sq), tau_sq


def vote_label(
    matches: Sequence[Match],
    train_labels: TrainingLabels,
    num_labels: int,
    config: VotingConfig | None = None,
    test_index: int | None = None,
) -> LabelPosterior:
    """
    Compute the label scores of a test keypoint from its matches.

    Args:
        matches: All matches of the keypoint (across training images).
        train_labels: Label of each training keypoint, indexed by [training image][keypoint index].
        num_labels: Number of organ labels.
        config: Switches for the likelihood terms.
        test_index: If given, all matches are checked to belong to this test keypoint.
    """
    config = config or VotingConfig()
    scores = np.zeros(num_labels, dtype=np.float64)
    if not matches:
        return LabelPosterior(scores=scores)
    if test_index is not None and any(m.test_index != test_index for m in matches):
        raise ValueError(f"All matches must reference test keypoint {test_index}")

    likelihoods, tau_sq = keypoint_likelihoods(matches)
    if not config.use_keypoint_likelihood:
        likelihoods = np.ones_like(likelihoods)
    for match, likelihood in zip(matches, likelihoods):
        label = train_labels[match.train_image][match.train_index]
        if label is None or not 1 <= label <= num_labels:
            raise ValueError(f"Training keypoint {match.train_index} of image {match.train_image} has label {label}")
        p_m = match.p_m if config.use_match_probability else 1.0
        scores[label - 1] += likelihood * p_m

    voted = int(np.argmax(scores)) + 1 if scores.max() > 0.0 else None
    return LabelPosterior(scores=scores, voted_label=voted, tau_sq=tau_sq)


def matches_per_keypoint(num_test: int, image_matches: Sequence[ImageMatches]) -> list[list[Match]]:
    """Group the matches by test keypoint, ordered by training image and then by match order"""
    grouped: list[list[Match]] = [[] for _ in range(num_test)]
    for image in image_matches:
        for match in image.matches:
            grouped[match.test_index].append(match)
    return grouped


def vote_keypoints(
    num_test: int,
    image_matches: Sequence[ImageMatches],
    train_labels: TrainingLabels,
    num_labels: int,
    config: VotingConfig | None = None,
    threads: int = 1,
) -> list[LabelPosterior]:
    """Vote the labels of all test keypoints (results in test keypoint order)"""
    grouped = matches_per_keypoint(num_test, image_matches)
    return ordered_map(lambda m: vote_label(m, train_labels, num_labels, config), grouped, threads)
