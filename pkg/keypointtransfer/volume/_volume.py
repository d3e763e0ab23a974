# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Classes to represent intensity and label volumes on regular grids"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .._numpy_utils import Array, ArrayLike, FloatTriple, IndexTriple, as_array, as_float_triple

SUPPORTED_DTYPES = (np.dtype(np.uint8), np.dtype(np.uint16), np.dtype(np.int16), np.dtype(np.float32))
LABEL_DTYPES = (np.dtype(np.uint8), np.dtype(np.uint16), np.dtype(np.int16))
BACKGROUND = 0


class GeometryError(ValueError):
    """Exception raised for invalid volume geometries or mismatching volumes"""

    pass


@dataclass(frozen=True)
class VolumeGeometry:
    """Number of voxels, voxel size (mm) and physical origin (mm) of a volume."""

    dims: IndexTriple
    spacing: FloatTriple = (1.0, 1.0, 1.0)
    origin: FloatTriple = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        if len(self.dims) != 3 or any(int(d) <= 0 for d in self.dims):  # noqa: PLR2004
            raise GeometryError(f"Volume dimensions must be three positive integers, got {self.dims}")
        if len(self.spacing) != 3 or any(not s > 0.0 for s in self.spacing):  # noqa: PLR2004
            raise GeometryError(f"Voxel spacing must be three positive reals, got {self.spacing}")
        if len(self.origin) != 3:  # noqa: PLR2004
            raise GeometryError(f"Origin must have three components, got {self.origin}")

    @property
    def num_voxels(self) -> int:
        return int(self.dims[0] * self.dims[1] * self.dims[2])

    def equals(self, other: VolumeGeometry) -> bool:
        """Return true if both geometries describe the same grid"""
        return (
            tuple(self.dims) == tuple(other.dims)
            and np.allclose(self.spacing, other.spacing, rtol=1e-6, atol=0.0)
            and np.allclose(self.origin, other.origin, rtol=1e-6, atol=1e-6)
        )

    def shifted(self, offset: IndexTriple, dims: IndexTriple) -> VolumeGeometry:
        """Return the geometry of the sub-grid with the given voxel offset and dimensions"""
        origin = tuple(o + i * s for o, i, s in zip(self.origin, offset, self.spacing))
        return VolumeGeometry(dims=dims, spacing=self.spacing, origin=as_float_triple(origin))


class _VolumeBase:
    def __init__(self, data: ArrayLike, spacing: ArrayLike, origin: ArrayLike) -> None:
        array = as_array(data)
        if array.ndim != 3:  # noqa: PLR2004
            raise GeometryError(f"Volume data must be three-dimensional, got shape {array.shape}")
        self._geometry = VolumeGeometry(
            dims=(int(array.shape[0]), int(array.shape[1]), int(array.shape[2])),
            spacing=as_float_triple(spacing),
            origin=as_float_triple(origin),
        )
        self._data = array
        self._data.setflags(write=False)

    @property
    def geometry(self) -> VolumeGeometry:
        """Return the geometry of this volume."""
        return self._geometry

    @property
    def dims(self) -> IndexTriple:
        """Return the number of voxels per axis."""
        return self._geometry.dims

    @property
    def spacing(self) -> FloatTriple:
        """Return the voxel size per axis."""
        return self._geometry.spacing

    @property
    def origin(self) -> FloatTriple:
        """Return the physical position of the first voxel."""
        return self._geometry.origin

    @property
    def data(self) -> Array:
        """Return the (read-only) voxel values, indexed as [x, y, z]."""
        return self._data

    def value_at(self, voxel: Tuple[int, int, int]):
        return self._data[voxel[0], voxel[1], voxel[2]]

    def contains(self, voxel: Tuple[int, int, int]) -> bool:
        return all(0 <= v < d for v, d in zip(voxel, self.dims))


class ScalarVolume(_VolumeBase):
    """
    Intensity image on a regular grid.

    Args:
        data: The voxel values as array of shape (nx, ny, nz). Floating-point data is stored as float32.
        spacing: The voxel size per axis in mm.
        origin: The physical position of voxel (0, 0, 0) in mm.
    """

    def __init__(
        self,
        data: ArrayLike,
        spacing: ArrayLike = (1.0, 1.0, 1.0),
        origin: ArrayLike = (0.0, 0.0, 0.0),
    ) -> None:
        super().__init__(_as_scalar_data(as_array(data)), spacing, origin)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScalarVolume):
            return NotImplemented
        return self.geometry.equals(other.geometry) and np.array_equal(self.data, other.data)

    def __repr__(self) -> str:
        return f"ScalarVolume(dims={self.dims}, spacing={self.spacing}, dtype={self.data.dtype})"

    def as_float(self) -> Array:
        """Return the voxel values as float64 array (copy)."""
        return self._data.astype(np.float64)

    def intensity_range(self) -> float:
        return float(np.max(self._data)) - float(np.min(self._data))

    def with_data(self, data: ArrayLike) -> ScalarVolume:
        """Return a volume with the same geometry but different voxel values."""
        return ScalarVolume(data, spacing=self.spacing, origin=self.origin)


class LabelVolume(_VolumeBase):
    """
    Segmentation on a regular grid, with label 0 denoting background.

    Args:
        data: Non-negative integer labels as array of shape (nx, ny, nz).
        num_labels: Number of foreground labels; deduced from the data if not given.
        spacing: The voxel size per axis in mm.
        origin: The physical position of voxel (0, 0, 0) in mm.
    """

    def __init__(
        self,
        data: ArrayLike,
        num_labels: int | None = None,
        spacing: ArrayLike = (1.0, 1.0, 1.0),
        origin: ArrayLike = (0.0, 0.0, 0.0),
    ) -> None:
        labels = _as_label_data(as_array(data))
        max_label = int(labels.max()) if labels.size > 0 else 0
        self._num_labels = max_label if num_labels is None else int(num_labels)
        if max_label > self._num_labels:
            raise GeometryError(f"Label volume contains label {max_label} but declares only {self._num_labels}")
        super().__init__(labels, spacing, origin)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelVolume):
            return NotImplemented
        return (
            self.num_labels == other.num_labels
            and self.geometry.equals(other.geometry)
            and np.array_equal(self.data, other.data)
        )

    def __repr__(self) -> str:
        return f"LabelVolume(dims={self.dims}, num_labels={self.num_labels}, dtype={self.data.dtype})"

    @property
    def num_labels(self) -> int:
        """Return the number of foreground labels (η)."""
        return self._num_labels

    @property
    def labels(self) -> range:
        """Return the range of foreground labels."""
        return range(1, self._num_labels + 1)

    def mask(self, label: int) -> Array:
        """Return the boolean mask of the voxels carrying the given label."""
        return self._data == label

    def voxel_count(self, label: int) -> int:
        return int(np.count_nonzero(self._data == label))

    def bounding_box(self, label: int) -> tuple[IndexTriple, IndexTriple] | None:
        """Return the (inclusive lower, exclusive upper) voxel bounds of a label, or None if it is absent."""
        indices = np.nonzero(self._data == label)
        if len(indices[0]) == 0:
            return None
        lower = tuple(int(i.min()) for i in indices)
        upper = tuple(int(i.max()) + 1 for i in indices)
        return lower, upper  # type: ignore[return-value]

    def with_data(self, data: ArrayLike, num_labels: int | None = None) -> LabelVolume:
        """Return a label volume with the same geometry but different labels."""
        return LabelVolume(
            data,
            num_labels=self._num_labels if num_labels is None else num_labels,
            spacing=self.spacing,
            origin=self.origin,
        )


def check_same_geometry(first: _VolumeBase, second: _VolumeBase, what: str = "volumes") -> None:
    """Raise a GeometryError if the two volumes do not share their geometry"""
    if not first.geometry.equals(second.geometry):
        raise GeometryError(f"Geometry mismatch between {what}: {first.geometry} vs. {second.geometry}")


def _as_scalar_data(data: Array) -> Array:
    if np.issubdtype(data.dtype, np.floating):
        return data.astype(np.float32)
    if data.dtype in SUPPORTED_DTYPES:
        return data.copy()
    if np.issubdtype(data.dtype, np.integer) or data.dtype == np.bool_:
        return data.astype(np.float32)
    raise GeometryError(f"Unsupported scalar element type '{data.dtype}'")


def _as_label_data(data: Array) -> Array:
    if data.dtype not in LABEL_DTYPES:
        if not (np.issubdtype(data.dtype, np.integer) or data.dtype == np.bool_):
            raise GeometryError(f"Label volumes require integer data, got '{data.dtype}'")
        max_value = int(data.max()) if data.size > 0 else 0
        data = data.astype(np.uint8 if max_value <= np.iinfo(np.uint8).max else np.uint16)
    if data.size > 0 and int(data.min()) < 0:
        raise GeometryError("Label volumes must not contain negative values")
    return data.copy()
