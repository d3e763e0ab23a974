# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""I/O facilities for volumes, keypoints, matches and JSON documents."""

from ._nrrd import VolumeIOError, read_volume, read_label_volume, read_scalar_volume, write_volume
from ._keypoints import (
    KEYPOINT_COLUMNS,
    MATCH_COLUMNS,
    read_keypoints,
    read_matches,
    write_keypoints,
    write_matches,
)
from ._json import ManifestEntry, read_json, read_manifest, write_json, write_manifest

__all__ = [
    "KEYPOINT_COLUMNS",
    "MATCH_COLUMNS",
    "ManifestEntry",
    "VolumeIOError",
    "read_json",
    "read_keypoints",
    "read_label_volume",
    "read_manifest",
    "read_matches",
    "read_scalar_volume",
    "read_volume",
    "write_json",
    "write_keypoints",
    "write_manifest",
    "write_matches",
    "write_volume",
]
