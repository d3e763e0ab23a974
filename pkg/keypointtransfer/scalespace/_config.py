# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Configuration of the Gaussian scale space and the keypoint detector"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Optional

from .._common import _require
from ..volume import ScalarVolume


class ScaleSpaceError(ValueError):
    """Exception raised if a scale space cannot be built for the given volume"""

    pass


@dataclass(frozen=True)
class ScaleSpaceConfig:
    """
    Parameters of the difference-of-Gaussians scale space.

    Args:
        sigma0: Base scale in voxels.
        kappa: Multiplicative scale sampling rate between consecutive levels.
        levels_per_octave: Number of levels after which the volume is downsampled by two.
        num_octaves: Number of octaves.
        contrast_threshold: Minimum absolute DoG response of a keypoint. If None, it is set to
                            `relative_contrast_threshold` times the intensity range of the input image.
        relative_contrast_threshold: See `contrast_threshold`.
        truncate: Gaussian kernels are truncated at this many standard deviations.
    """

    sigma0: float = 1.6
    kappa: float = 2.0 ** (1.0 / 3.0)
    levels_per_octave: int = 3
    num_octaves: int = 3
    contrast_threshold: Optional[float] = None
    relative_contrast_threshold: float = 0.005
    truncate: float = 3.0

    def __post_init__(self) -> None:
        _require(self.sigma0 > 0.0, f"sigma0 must be positive, got {self.sigma0}")
        _require(self.kappa > 1.0, f"kappa must be larger than one, got {self.kappa}")
        _require(self.levels_per_octave >= 1, f"levels_per_octave must be positive, got {self.levels_per_octave}")
        _require(self.num_octaves >= 1, f"num_octaves must be positive, got {self.num_octaves}")
        _require(
            self.contrast_threshold is None or self.contrast_threshold >= 0.0,
            f"contrast_threshold must be non-negative, got {self.contrast_threshold}",
        )
        _require(self.relative_contrast_threshold >= 0.0, "relative_contrast_threshold must be non-negative")
        _require(self.truncate > 0.0, f"truncate must be positive, got {self.truncate}")

    @property
    def gaussians_per_octave(self) -> int:
        """Number of smoothed volumes per octave (two more DoG levels than detection levels)."""
        return self.levels_per_octave + 3

    def sigma_at(self, global_level: int) -> float:
        """Return the effective blur (base-resolution voxels) of the given level, counted across octaves."""
        return self.sigma0 * self.kappa**global_level

    def resolve_threshold(self, volume: ScalarVolume) -> float:
        """Return the contrast threshold to be used for the given image."""
        if self.contrast_threshold is not None:
            return self.contrast_threshold
        return self.relative_contrast_threshold * volume.intensity_range()
