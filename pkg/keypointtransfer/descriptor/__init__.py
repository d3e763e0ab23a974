# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Gradient orientation histogram descriptors and keypoint labeling"""

from ._descriptor import (
    DescriptorConfig,
    DescribedKeypoint,
    DESCRIPTOR_SIZE,
    clip_renormalize,
    compute_descriptor,
    describe_keypoints,
    support_window,
)
from ._labels import assign_labels

__all__ = [
    "DescriptorConfig",
    "DescribedKeypoint",
    "DESCRIPTOR_SIZE",
    "assign_labels",
    "clip_renormalize",
    "compute_descriptor",
    "describe_keypoints",
    "support_window",
]
