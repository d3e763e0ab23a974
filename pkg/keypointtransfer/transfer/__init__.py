# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Segmentation transfer along keypoint matches"""

from ._config import TransferConfig, TRANSFER_MODALITIES
from ._transfer import (
    ProbabilityMaps,
    SegmentationResult,
    TrainingSubject,
    fuse_labels,
    intensity_weight,
    shifted_region,
    transfer_cross_label,
    transfer_segmentation,
)

__all__ = [
    "ProbabilityMaps",
    "SegmentationResult",
    "TrainingSubject",
    "TransferConfig",
    "TRANSFER_MODALITIES",
    "fuse_labels",
    "intensity_weight",
    "shifted_region",
    "transfer_cross_label",
    "transfer_segmentation",
]
