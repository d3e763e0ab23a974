# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Matching of the test keypoints against all training images"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Sequence

from .._common import ordered_map
from .._numpy_utils import FloatTriple
from ..descriptor import DescribedKeypoint
from ._config import MatchingConfig
from ._match import Match, stage1_match, stage2_match, spatial_tolerance
from ._alignment import estimate_translation, estimate_match_distribution


@dataclass
class ImageMatches:
    """
    Matches between the test keypoints and one training image.

    Args:
        image_index: Index of the training image.
        matches: The final matches (with p_m set), ordered by test keypoint index.
        translation: The estimated translation t_i (None if the first stage found no matches).
        eps_x: The spatial tolerance of the second stage (None if not applied).
        num_stage1: Number of first-stage matches.
    """

    image_index: int
    matches: list[Match] = field(default_factory=list)
    translation: FloatTriple | None = None
    eps_x: float | None = None
    num_stage1: int = 0

    @property
    def aligned(self) -> bool:
        return self.translation is not None


def match_training_image(
    test_kps: Sequence[DescribedKeypoint],
    train_kps: Sequence[DescribedKeypoint],
    image_index: int = 0,
    config: MatchingConfig | None = None,
) -> ImageMatches:
    """Run both matching stages and the match distribution estimate for one training image"""
    config = config or MatchingConfig()
    first_stage = stage1_match(test_kps, train_kps, config, image_index)
    translation = estimate_translation(first_stage, config)
    if translation is None:
        return ImageMatches(image_index=image_index)

    eps_x = None
    matches = first_stage
    if config.use_spatial_constraint:
        eps_x = spatial_tolerance(first_stage, translation, config)
        matches = stage2_match(test_kps, train_kps, translation, config, eps_x=eps_x, image_index=image_index)

    return ImageMatches(
        image_index=image_index,
        matches=estimate_match_distribution(matches, config),
        translation=translation,
        eps_x=eps_x,
        num_stage1=len(first_stage),
    )


def match_all(
    test_kps: Sequence[DescribedKeypoint],
    training_kps: Sequence[Sequence[DescribedKeypoint]],
    config: MatchingConfig | None = None,
    threads: int = 1,
) -> list[ImageMatches]:
    """Match the test keypoints against the keypoints of each training image (results in image order)"""
    config = config or MatchingConfig()
    return ordered_map(
        lambda item: match_training_image(test_kps, item[1], item[0], config),
        list(enumerate(training_kps)),
        threads,
    )
