# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Configuration of the two-stage keypoint matching"""

from __future__ import annotations
from dataclasses import dataclass

from .._common import _require

ALIGNMENT_METHODS = ("hough", "median")


@dataclass(frozen=True)
class MatchingConfig:
    """
    Parameters of the keypoint matching.

    Args:
        eps_sigma: Maximum admissible ratio between the scales of matched keypoints.
        ratio_threshold: Matches are kept if the distance to the nearest neighbor is at most this fraction
                         of the distance to the second-nearest neighbor.
        hough_bins: Number of bins per dimension of the translation histogram.
        spatial_keep_fraction: Quantile of the first-stage residuals used as spatial tolerance.
        kde_sigma: Kernel width of the density estimate over normalized translations.
        alignment: How the translation per training image is estimated ("hough" or "median").
        use_scale_constraint: Restrict candidates to keypoints of similar scale.
        use_ratio_test: Reject ambiguous matches with the distance-ratio test.
        use_spatial_constraint: Run the second, spatially constrained matching stage.
    """

    eps_sigma: float = 2.0
    ratio_threshold: float = 0.9
    hough_bins: int = 10
    spatial_keep_fraction: float = 0.10
    kde_sigma: float = 0.2
    alignment: str = "hough"
    use_scale_constraint: bool = True
    use_ratio_test: bool = True
    use_spatial_constraint: bool = True

    def __post_init__(self) -> None:
        _require(self.eps_sigma > 1.0, f"eps_sigma must be larger than 1, got {self.eps_sigma}")
        _require(0.0 < self.ratio_threshold < 1.0, f"ratio_threshold must be in (0, 1), got {self.ratio_threshold}")
        _require(self.hough_bins >= 1, f"hough_bins must be positive, got {self.hough_bins}")
        _require(
            0.0 < self.spatial_keep_fraction <= 1.0,
            f"spatial_keep_fraction must be in (0, 1], got {self.spatial_keep_fraction}",
        )
        _require(self.kde_sigma > 0.0, f"kde_sigma must be positive, got {self.kde_sigma}")
        _require(
            self.alignment in ALIGNMENT_METHODS,
            f"alignment must be one of {ALIGNMENT_METHODS}, got '{self.alignment}'",
        )
