# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Gaussian scale space and difference-of-Gaussians keypoint detection"""

from ._config import ScaleSpaceConfig, ScaleSpaceError
from ._scale_space import ScaleLevel, build_scale_space, difference_of_gaussians, octave_dims
from ._detection import Keypoint, detect_keypoints, find_scale_space_extrema

__all__ = [
    "ScaleSpaceConfig",
    "ScaleSpaceError",
    "ScaleLevel",
    "Keypoint",
    "build_scale_space",
    "difference_of_gaussians",
    "detect_keypoints",
    "find_scale_space_extrema",
    "octave_dims",
]
