# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""
keypointtransfer segments volumetric images by transferring whole organ masks from labeled training
images along sparse keypoint correspondences. Keypoints are detected as scale-space extrema, described by
gradient orientation histograms and matched against the keypoints of each training image. The matches
vote for the organ label of each test keypoint and carry the training segmentations over to the test
image, where they are fused into a probabilistic segmentation. This top-level module exposes the
pipeline composing these stages; the stages themselves live in the submodules.
"""

from .__about__ import __version__

from ._common import ConfigError
from ._pipeline import (
    PipelineConfig,
    PipelineResult,
    PipelineError,
    EmptyTrainingSetError,
    extract_keypoints,
    prepare_training_subject,
    segment,
)

__all__ = [
    "ConfigError",
    "EmptyTrainingSetError",
    "PipelineConfig",
    "PipelineError",
    "PipelineResult",
    "extract_keypoints",
    "prepare_training_subject",
    "segment",
    "__version__",
]
