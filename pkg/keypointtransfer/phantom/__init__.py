# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Synthetic phantom subjects with ground-truth labels"""

from ._config import PhantomConfig, PhantomError, MODALITY_INTENSITIES
from ._phantom import Subject, crop_fov, ellipsoid_mask, generate_subject, organ_grid
from ._io import read_subject, subject_files, write_subject

__all__ = [
    "MODALITY_INTENSITIES",
    "PhantomConfig",
    "PhantomError",
    "Subject",
    "crop_fov",
    "ellipsoid_mask",
    "generate_subject",
    "organ_grid",
    "read_subject",
    "subject_files",
    "write_subject",
]
