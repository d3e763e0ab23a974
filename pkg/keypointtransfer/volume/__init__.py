# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Volumetric data model: intensity images, label volumes and their geometry"""

from ._volume import (
    ScalarVolume,
    LabelVolume,
    VolumeGeometry,
    GeometryError,
    BACKGROUND,
    SUPPORTED_DTYPES,
    check_same_geometry,
)
from ._crop import crop

__all__ = [
    "ScalarVolume",
    "LabelVolume",
    "VolumeGeometry",
    "GeometryError",
    "BACKGROUND",
    "SUPPORTED_DTYPES",
    "check_same_geometry",
    "crop",
]
