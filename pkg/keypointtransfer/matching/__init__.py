# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Two-stage keypoint matching and the distribution over matches"""

from ._config import MatchingConfig
from ._match import (
    Match,
    scale_candidates,
    spatial_residuals,
    spatial_tolerance,
    stage1_match,
    stage2_match,
)
from ._alignment import (
    estimate_match_distribution,
    estimate_translation,
    hough_bin_indices,
    hough_translation,
    median_translation,
    normalized_translations,
)
from ._image_matches import ImageMatches, match_all, match_training_image

__all__ = [
    "ImageMatches",
    "Match",
    "MatchingConfig",
    "estimate_match_distribution",
    "estimate_translation",
    "hough_bin_indices",
    "hough_translation",
    "match_all",
    "match_training_image",
    "median_translation",
    "normalized_translations",
    "scale_candidates",
    "spatial_residuals",
    "spatial_tolerance",
    "stage1_match",
    "stage2_match",
]
