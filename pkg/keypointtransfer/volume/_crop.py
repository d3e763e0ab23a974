# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Extraction of axis-aligned sub-volumes"""

from __future__ import annotations
from typing import TypeVar, Union

from .._numpy_utils import ArrayLike, as_index_triple
from ._volume import ScalarVolume, LabelVolume, GeometryError

VolumeType = TypeVar("VolumeType", bound=Union[ScalarVolume, LabelVolume])


def crop(volume: VolumeType, lo: ArrayLike, hi: ArrayLike) -> VolumeType:
    """
    Return the sub-volume covering the voxels in [lo, hi) along each axis.

    The origin of the result is shifted by `lo * spacing`, such that voxels keep their physical position.

    Args:
        volume: The volume to crop.
        lo: Inclusive lower voxel bounds.
        hi: Exclusive upper voxel bounds.
    """
    lower, upper = as_index_triple(lo), as_index_triple(hi)
    for axis in range(3):
        if not 0 <= lower[axis] < upper[axis] <= volume.dims[axis]:
            raise GeometryError(
                f"Invalid crop bounds {lower} - {upper} for volume with dimensions {volume.dims} (axis {axis})"
            )

    data = volume.data[lower[0] : upper[0], lower[1] : upper[1], lower[2] : upper[2]]
    geometry = volume.geometry.shifted(lower, tuple(u - l for u, l in zip(upper, lower)))  # type: ignore[arg-type]
    if isinstance(volume, LabelVolume):
        return LabelVolume(  # type: ignore[return-value]
            data, num_labels=volume.num_labels, spacing=geometry.spacing, origin=geometry.origin
        )
    return ScalarVolume(data, spacing=geometry.spacing, origin=geometry.origin)  # type: ignore[return-value]
