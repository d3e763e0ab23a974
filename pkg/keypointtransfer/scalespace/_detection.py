# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Keypoint detection as local extrema of the difference-of-Gaussians scale space"""

from __future__ import annotations
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.ndimage import maximum_filter, minimum_filter

from .._numpy_utils import Array, FloatTriple, IndexTriple, round_to_voxel
from ..volume import ScalarVolume
from ._config import ScaleSpaceConfig
from ._scale_space import build_scale_space, difference_of_gaussians

# offsets into the 3x3x3x3 neighborhood (scale, x, y, z), center included
_NEIGHBORHOOD = np.array(list(product((-1, 0, 1), repeat=4)), dtype=np.intp)


@dataclass(frozen=True)
class Keypoint:
    """
    A scale-space extremum.

    Args:
        x: Location in voxel coordinates of the base-resolution grid.
        sigma: Scale in base-resolution voxels.
        dog_value: Signed difference-of-Gaussians response at the extremum.
    """

    x: FloatTriple
    sigma: float
    dog_value: float

    @property
    def voxel(self) -> IndexTriple:
        """Return the base-resolution voxel closest to the keypoint location."""
        return round_to_voxel(self.x)


def find_scale_space_extrema(dog: Array, threshold: float) -> tuple[Array, Array]:
    """
    Find the strict local extrema of a difference-of-Gaussians stack.

    A voxel is an extremum if its value is strictly larger (or smaller) than all of its 80 neighbors in the
    3x3x3 neighborhoods at its own and the two adjacent levels, and its absolute value exceeds the threshold.
    The first and last level and the outermost voxel shell are never reported.

    Args:
        dog: Stack of DoG volumes with shape (levels, nx, ny, nz).
        threshold: Contrast threshold on the absolute response.

    Returns:
        Indices (level, x, y, z) of the extrema as array of shape (n, 4), in lexicographic order,
        and the corresponding responses.
    """
    interior = np.zeros(dog.shape, dtype=bool)
    interior[1:-1, 1:-1, 1:-1, 1:-1] = True
    is_box_max = dog == maximum_filter(dog, size=3, mode="nearest")
    is_box_min = dog == minimum_filter(dog, size=3, mode="nearest")
    candidates = interior & (np.abs(dog) > threshold) & (is_box_max | is_box_min)

    indices = np.argwhere(candidates)
    if len(indices) == 0:
        return indices.reshape(0, 4), np.zeros(0, dtype=dog.dtype)

    values = dog[tuple(indices.T)]
    neighbors = indices[:, None, :] + _NEIGHBORHOOD[None, :, :]
    neighbor_values = dog[tuple(np.moveaxis(neighbors, -1, 0))]
    # the center is part of the neighborhood, so strictness means it is the only one reaching its value
    strict_max = np.count_nonzero(neighbor_values >= values[:, None], axis=1) == 1
    strict_min = np.count_nonzero(neighbor_values <= values[:, None], axis=1) == 1
    keep = strict_max | strict_min
    return indices[keep], values[keep]


def detect_keypoints(volume: ScalarVolume, config: ScaleSpaceConfig | None = None) -> list[Keypoint]:
    """
    Detect keypoints as local extrema of the difference-of-Gaussians scale space.

    Keypoints are ordered by octave, level and lexicographic voxel index. Locations and scales are
    reported at base resolution; no subvoxel refinement takes place.

    Args:
        volume: The input image.
        config: Scale space and detector parameters.
    """
    config = config or ScaleSpaceConfig()
    levels = build_scale_space(volume, config)
    threshold = config.resolve_threshold(volume)

    keypoints: list[Keypoint] = []
    for octave in range(config.num_octaves):
        step = 2**octave
        indices, values = find_scale_space_extrema(difference_of_gaussians(levels, octave), threshold)
        for (level, ix, iy, iz), value in zip(indices.tolist(), values.tolist()):
            keypoints.append(
                Keypoint(
                    x=(float(ix * step), float(iy * step), float(iz * step)),
                    sigma=config.sigma_at(octave * config.levels_per_octave + level),
                    dog_value=float(value),
                )
            )
    return keypoints
