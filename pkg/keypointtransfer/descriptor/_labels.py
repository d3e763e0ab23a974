# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Assignment of organ labels to training keypoints"""

from __future__ import annotations
from typing import Sequence

from ..volume import LabelVolume, GeometryError, BACKGROUND
from ._descriptor import DescribedKeypoint


def assign_labels(keypoints: Sequence[DescribedKeypoint], segmentation: LabelVolume) -> list[DescribedKeypoint]:
    """
    Label each keypoint with the segmentation value at its (rounded) location.

    Keypoints in the background are discarded; the order of the remaining ones is preserved.

    Args:
        keypoints: Keypoints detected in the image the segmentation belongs to.
        segmentation: The segmentation of that image.
    """
    result = []
    for keypoint in keypoints:
        voxel = keypoint.voxel
        if not segmentation.contains(voxel):
            raise GeometryError(f"Keypoint at {keypoint.x} lies outside the segmentation of size {segmentation.dims}")
        label = int(segmentation.value_at(voxel))
        if label != BACKGROUND:
            result.append(keypoint.with_label(label))
    return result
