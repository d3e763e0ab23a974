# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Construction of the Gaussian scale space and its differences"""

from __future__ import annotations
from dataclasses import dataclass
from math import sqrt

import numpy as np
from scipy.ndimage import gaussian_filter

from .._numpy_utils import Array, IndexTriple
from ..volume import ScalarVolume
from ._config import ScaleSpaceConfig, ScaleSpaceError

MIN_BASE_EXTENT = 8
MIN_OCTAVE_EXTENT = 4


@dataclass(frozen=True)
class ScaleLevel:
    """
    A smoothed volume of the scale space.

    Args:
        sigma: Effective blur relative to the input image, in base-resolution voxels.
        octave: Index of the octave; the data is sampled every `step = 2**octave` base voxels.
        level: Index of the level within its octave.
        data: The smoothed values at octave resolution.
    """

    sigma: float
    octave: int
    level: int
    data: Array

    @property
    def step(self) -> int:
        return 2**self.octave


def octave_dims(dims: IndexTriple, octave: int) -> IndexTriple:
    """Return the grid size of the given octave when downsampling by taking every second voxel"""
    result = tuple(dims)
    for _ in range(octave):
        result = tuple((d + 1) // 2 for d in result)
    return result  # type: ignore[return-value]


def check_scale_space_size(dims: IndexTriple, config: ScaleSpaceConfig) -> None:
    if min(dims) < MIN_BASE_EXTENT:
        raise ScaleSpaceError(f"Volume of size {dims} too small, at least {MIN_BASE_EXTENT} voxels per axis required")
    coarsest = octave_dims(dims, config.num_octaves - 1)
    if min(coarsest) < MIN_OCTAVE_EXTENT:
        raise ScaleSpaceError(
            f"Volume of size {dims} too small for {config.num_octaves} octaves "
            f"(coarsest octave would have size {coarsest})"
        )


def build_scale_space(volume: ScalarVolume, config: ScaleSpaceConfig | None = None) -> list[ScaleLevel]:
    """
    Build the Gaussian scale space of the given volume.

    Each octave holds `levels_per_octave + 3` smoothed volumes. Level `k` of octave `o` has the effective
    blur `sigma0 * kappa**(o * levels_per_octave + k)` with respect to the input, obtained by incremental
    blurring such that the variances add up. The first level of an octave is the level `levels_per_octave`
    of the previous one, downsampled by two.

    Args:
        volume: The input image.
        config: The scale space parameters.
    """
    config = config or ScaleSpaceConfig()
    check_scale_space_size(volume.dims, config)

    levels: list[ScaleLevel] = []
    current = volume.as_float()
    current_sigma = 0.0
    for octave in range(config.num_octaves):
        step = 2**octave
        if octave > 0:
            seed = levels[-config.gaussians_per_octave + config.levels_per_octave]
            current = seed.data[::2, ::2, ::2].copy()
            current_sigma = seed.sigma / step

        for level in range(config.gaussians_per_octave):
            global_level = octave * config.levels_per_octave + level
            target_sigma = config.sigma_at(global_level) / step
            if target_sigma > current_sigma:
                increment = sqrt(target_sigma**2 - current_sigma**2)
                current = gaussian_filter(current, sigma=increment, truncate=config.truncate)
                current_sigma = target_sigma
            levels.append(
                ScaleLevel(sigma=config.sigma_at(global_level), octave=octave, level=level, data=current)
            )
    return levels


def difference_of_gaussians(levels: list[ScaleLevel], octave: int) -> Array:
    """Return the stack of differences between consecutive levels of the given octave, shape (levels, nx, ny, nz)"""
    smoothed = [level.data for level in levels if level.octave == octave]
    if len(smoothed) < 2:  # noqa: PLR2004
        raise ScaleSpaceError(f"Octave {octave} is not part of the scale space")
    return np.stack([upper - lower for lower, upper in zip(smoothed[:-1], smoothed[1:])])
