# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""64-dimensional gradient orientation histograms describing the image around a keypoint"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.ndimage import gaussian_filter

from .._common import _require, ordered_map
from .._numpy_utils import Array, FloatTriple, IndexTriple
from ..scalespace import Keypoint
from ..volume import ScalarVolume

DESCRIPTOR_SIZE = 64
NUM_ORIENTATION_BINS = 8
_MAX_CLIP_ITERATIONS = 10000
_CLIP_TOLERANCE = 1e-12
_FLAT_GRADIENT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DescriptorConfig:
    """
    Parameters of the gradient orientation histogram.

    Args:
        support_factor: Edge length of the cubic support window in units of the keypoint scale.
        weight_factor: Standard deviation of the spatial Gaussian weight in units of the keypoint scale.
        clip: Components are clipped at this value after normalization (followed by renormalization).
        truncate: Truncation (in standard deviations) of the smoothing kernel.
    """

    support_factor: float = 8.0
    weight_factor: float = 2.0
    clip: float = 0.2
    truncate: float = 3.0

    def __post_init__(self) -> None:
        _require(self.support_factor > 0.0, f"support_factor must be positive, got {self.support_factor}")
        _require(self.weight_factor > 0.0, f"weight_factor must be positive, got {self.weight_factor}")
        _require(0.0 < self.clip <= 1.0, f"clip must be in (0, 1], got {self.clip}")
        _require(self.truncate > 0.0, f"truncate must be positive, got {self.truncate}")

    def support_radius(self, sigma: float) -> int:
        """Return the half edge length (in voxels) of the support window for the given scale."""
        return max(1, int(np.floor(0.5 * self.support_factor * sigma + 0.5)))


@dataclass(frozen=True)
class DescribedKeypoint:
    """
    A keypoint together with its descriptor and (for training keypoints) its organ label.

    Args:
        keypoint: The detected keypoint.
        descriptor: The 64-dimensional descriptor.
        label: The organ label, or None if unknown (test keypoints).
    """

    keypoint: Keypoint
    descriptor: Array = field(compare=False, repr=False)
    label: Optional[int] = None

    @property
    def x(self) -> FloatTriple:
        return self.keypoint.x

    @property
    def sigma(self) -> float:
        return self.keypoint.sigma

    @property
    def voxel(self) -> IndexTriple:
        return self.keypoint.voxel

    def with_label(self, label: int | None) -> DescribedKeypoint:
        return DescribedKeypoint(keypoint=self.keypoint, descriptor=self.descriptor, label=label)


def clip_renormalize(values: Array, clip: float = 0.2) -> Array | None:
    """
    L2-normalize the histogram, clip its components and renormalize, repeated until nothing changes.

    The result is a fixed point of clipping and renormalization, so applying this function to its own
    output returns the output. Components stay below `clip` whenever enough bins are populated
    (at least `1 / clip**2` of them); otherwise all populated bins end up equal.

    Returns:
        The unit-length descriptor, or None if all values are zero.
    """
    norm = float(np.linalg.norm(values))
    if norm == 0.0:
        return None
    current = np.asarray(values, dtype=np.float64) / norm
    for _ in range(_MAX_CLIP_ITERATIONS):
        clipped = np.minimum(current, clip)
        clipped /= np.linalg.norm(clipped)
        if np.allclose(clipped, current, rtol=0.0, atol=_CLIP_TOLERANCE):
            return clipped
        current = clipped
    return current


def support_window(volume: ScalarVolume, keypoint: Keypoint, config: DescriptorConfig) -> tuple[slice, ...] | None:
    """Return the slices of the cubic support window, or None if it is not fully inside the volume"""
    radius = config.support_radius(keypoint.sigma)
    center = keypoint.voxel
    if any(c - radius < 0 or c + radius >= d for c, d in zip(center, volume.dims)):
        return None
    return tuple(slice(c - radius, c + radius + 1) for c in center)


def compute_descriptor(
    volume: ScalarVolume, keypoint: Keypoint, config: DescriptorConfig | None = None
) -> Array | None:
    """
    Compute the gradient orientation histogram of a keypoint.

    The support is a cube of edge `support_factor * sigma` centered at the keypoint, smoothed to the keypoint
    scale. Each voxel's central-difference gradient votes into one of 8 spatial octants (by its position relative
    to the keypoint) and one of 8 orientation bins (by the signs of its components), weighted by the gradient
    magnitude and an isotropic Gaussian of standard deviation `weight_factor * sigma`.

    Args:
        volume: The image the keypoint was detected in.
        keypoint: The keypoint to describe.
        config: Descriptor parameters.

    Returns:
        The 64-dimensional descriptor, or None if the support window leaves the volume or the support
        is flat (degenerate descriptor).
    """
    config = config or DescriptorConfig()
    window = support_window(volume, keypoint, config)
    if window is None:
        return None

    cube = volume.data[window].astype(np.float64)
    cube = gaussian_filter(cube, sigma=keypoint.sigma, truncate=config.truncate, mode="nearest")
    gradients = np.gradient(cube)
    magnitude = np.sqrt(sum(g**2 for g in gradients))
    if magnitude.max() <= _FLAT_GRADIENT_TOLERANCE * max(1.0, float(np.abs(cube).max())):
        return None

    radius = config.support_radius(keypoint.sigma)
    offsets = np.meshgrid(*([np.arange(-radius, radius + 1)] * 3), indexing="ij")
    spatial_bin = 4 * (offsets[0] >= 0) + 2 * (offsets[1] >= 0) + (offsets[2] >= 0)
    orientation_bin = 4 * (gradients[0] >= 0) + 2 * (gradients[1] >= 0) + (gradients[2] >= 0)
    weight_sigma = config.weight_factor * keypoint.sigma
    weights = magnitude * np.exp(-sum(o**2 for o in offsets) / (2.0 * weight_sigma**2))

    histogram = np.bincount(
        (NUM_ORIENTATION_BINS * spatial_bin + orientation_bin).ravel(),
        weights=weights.ravel(),
        minlength=DESCRIPTOR_SIZE,
    )
    return clip_renormalize(histogram, config.clip)


def describe_keypoints(
    volume: ScalarVolume,
    keypoints: Sequence[Keypoint],
    config: DescriptorConfig | None = None,
    threads: int = 1,
) -> list[DescribedKeypoint]:
    """
    Compute the descriptors of all given keypoints, dropping those without a valid descriptor.

    The order of the remaining keypoints is preserved.
    """
    config = config or DescriptorConfig()
    descriptors = ordered_map(lambda kp: compute_descriptor(volume, kp, config), keypoints, threads)
    return [
        DescribedKeypoint(keypoint=kp, descriptor=descriptor)
        for kp, descriptor in zip(keypoints, descriptors)
        if descriptor is not None
    ]
