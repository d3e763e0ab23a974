# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Read and write volumes from/to NRRD files with pynrrd"""

from __future__ import annotations
from typing import Union

import numpy as np
import nrrd

from ..protocols import Volume
from ..volume import ScalarVolume, LabelVolume, SUPPORTED_DTYPES
from ..volume._volume import LABEL_DTYPES

AnyVolume = Union[ScalarVolume, LabelVolume]

# custom key-value pair marking label volumes (value = number of labels)
LABELS_KEY = "labels"


class VolumeIOError(IOError):
    """Exception raised when a volume file cannot be read or written"""

    pass


def read_volume(filename: str) -> AnyVolume:
    """
    Read a volume from the given NRRD file.

    Files carrying the `labels` key are returned as LabelVolume, all others as ScalarVolume.

    Args:
        filename: Path to the file from which to read.
    """
    data, header = _read_nrrd(filename)
    spacing, origin = _geometry_from_header(filename, header)
    if LABELS_KEY in header:
        return _make_label_volume(filename, data, header, spacing, origin)
    return ScalarVolume(data, spacing=spacing, origin=origin)


def read_label_volume(filename: str) -> LabelVolume:
    """
    Read a segmentation from the given NRRD file, also if it does not carry the `labels` key.

    Args:
        filename: Path to the file from which to read.
    """
    data, header = _read_nrrd(filename)
    spacing, origin = _geometry_from_header(filename, header)
    return _make_label_volume(filename, data, header, spacing, origin)


def read_scalar_volume(filename: str) -> ScalarVolume:
    """Read an intensity image from the given NRRD file (label data is interpreted as intensities)."""
    data, header = _read_nrrd(filename)
    spacing, origin = _geometry_from_header(filename, header)
    return ScalarVolume(data, spacing=spacing, origin=origin)


def write_volume(volume: Volume, filename: str) -> str:
    """
    Write the given volume into an NRRD file (raw, little-endian) and return the name of the written file.

    Args:
        volume: The volume to be written; label volumes additionally record their number of labels.
        filename: The name of the file to write into.
    """
    data = volume.data
    if data.dtype not in SUPPORTED_DTYPES:
        raise VolumeIOError(f"Cannot write '{filename}': unsupported element type '{data.dtype}'")
    header = {
        "encoding": "raw",
        "space dimension": 3,
        "space directions": np.diag(np.asarray(volume.spacing, dtype=np.float64)),
        "space origin": np.asarray(volume.origin, dtype=np.float64),
    }
    if isinstance(volume, LabelVolume):
        header[LABELS_KEY] = str(volume.num_labels)
    try:
        nrrd.write(filename, np.ascontiguousarray(data.astype(data.dtype.newbyteorder("<"))), header, index_order="F")
    except (OSError, nrrd.NRRDError) as e:
        raise VolumeIOError(f"Could not write '{filename}': {e}") from e
    return filename


def _read_nrrd(filename: str) -> tuple[np.ndarray, dict]:
    try:
        data, header = nrrd.read(filename, index_order="F")
    except FileNotFoundError:
        raise VolumeIOError(f"File '{filename}' does not exist") from None
    except (OSError, nrrd.NRRDError, ValueError) as e:
        raise VolumeIOError(f"Could not read '{filename}': {e}") from e
    if data.ndim != 3:  # noqa: PLR2004
        raise VolumeIOError(f"Could not read '{filename}': field 'dimension' is {data.ndim}, expected 3")
    if data.dtype.newbyteorder("=") not in SUPPORTED_DTYPES:
        raise VolumeIOError(f"Could not read '{filename}': unsupported 'type' ({data.dtype})")
    return data.astype(data.dtype.newbyteorder("=")), header


def _geometry_from_header(filename: str, header: dict) -> tuple[tuple[float, ...], tuple[float, ...]]:
    field = None
    spacing: tuple[float, ...] = (1.0, 1.0, 1.0)
    if "space directions" in header:
        field = "space directions"
        directions = np.asarray(header[field], dtype=np.float64)
        if directions.shape != (3, 3) or not np.all(np.isfinite(directions)):
            raise VolumeIOError(f"Could not read '{filename}': unsupported '{field}' {directions.tolist()}")
        if not np.allclose(directions, np.diag(np.diag(directions))):
            raise VolumeIOError(f"Could not read '{filename}': '{field}' must be axis-aligned")
        spacing = tuple(float(s) for s in np.abs(np.diag(directions)))
    elif "spacings" in header:
        field = "spacings"
        spacing = tuple(float(s) for s in np.ravel(header[field]))
    valid = len(spacing) == 3 and all(np.isfinite(s) and s > 0.0 for s in spacing)  # noqa: PLR2004
    if field is not None and not valid:
        raise VolumeIOError(f"Could not read '{filename}': '{field}' must give three positive spacings, got {spacing}")

    origin = tuple(float(o) for o in np.ravel(header.get("space origin", (0.0, 0.0, 0.0))))
    if len(origin) != 3 or not all(np.isfinite(o) for o in origin):  # noqa: PLR2004
        raise VolumeIOError(f"Could not read '{filename}': 'space origin' must have three finite components")
    return spacing, origin


def _make_label_volume(filename: str, data: np.ndarray, header: dict, spacing, origin) -> LabelVolume:
    if data.dtype not in LABEL_DTYPES:
        raise VolumeIOError(f"Could not read '{filename}' as label volume: 'type' is {data.dtype}")
    num_labels = None
    if LABELS_KEY in header:
        try:
            num_labels = int(header[LABELS_KEY])
        except ValueError:
            raise VolumeIOError(f"Could not read '{filename}': invalid '{LABELS_KEY}' value") from None
    try:
        return LabelVolume(data, num_labels=num_labels, spacing=spacing, origin=origin)
    except ValueError as e:
        raise VolumeIOError(f"Could not read '{filename}': {e}") from e
