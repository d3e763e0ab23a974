# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Nearest-neighbor matching of test keypoints against the keypoints of one training image"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .._numpy_utils import Array, FloatTriple, as_float_triple
from ..descriptor import DescribedKeypoint, DESCRIPTOR_SIZE
from ._config import MatchingConfig


@dataclass(frozen=True)
class Match:
    """
    Correspondence between a test keypoint and a keypoint of a training image.

    Args:
        test_index: Index of the test keypoint.
        train_image: Index of the training image.
        train_index: Index of the keypoint within the training image's keypoints.
        desc_dist: Euclidean distance between the two descriptors.
        translation: Test minus training keypoint position (in voxels).
        p_m: Probability of the match within its training image (set by the density estimate).
    """

    test_index: int
    train_image: int
    train_index: int
    desc_dist: float
    translation: FloatTriple
    p_m: float = 0.0


@dataclass(frozen=True)
class _KeypointArrays:
    positions: Array
    sigmas: Array
    descriptors: Array

    @classmethod
    def of(cls, keypoints: Sequence[DescribedKeypoint]) -> _KeypointArrays:
        if not keypoints:
            return cls(np.zeros((0, 3)), np.zeros(0), np.zeros((0, DESCRIPTOR_SIZE)))
        return cls(
            positions=np.array([kp.x for kp in keypoints], dtype=np.float64),
            sigmas=np.array([kp.sigma for kp in keypoints], dtype=np.float64),
            descriptors=np.array([kp.descriptor for kp in keypoints], dtype=np.float64),
        )

    def __len__(self) -> int:
        return len(self.sigmas)


def scale_candidates(test_sigmas: Array, train_sigmas: Array, config: MatchingConfig) -> Array:
    """Return the (num_test, num_train) mask of pairs passing the scale-ratio constraint"""
    if not config.use_scale_constraint:
        return np.ones((len(test_sigmas), len(train_sigmas)), dtype=bool)
    ratio = test_sigmas[:, None] / train_sigmas[None, :]
    return (ratio >= 1.0 / config.eps_sigma) & (ratio <= config.eps_sigma)


def stage1_match(
    test_kps: Sequence[DescribedKeypoint],
    train_kps: Sequence[DescribedKeypoint],
    config: MatchingConfig | None = None,
    image_index: int = 0,
) -> list[Match]:
    """
    Match each test keypoint to its nearest training keypoint in descriptor space among the keypoints of similar scale.

    Test keypoints with fewer than two candidates, or whose nearest neighbor fails the distance-ratio test
    against the second-nearest candidate, remain unmatched. Ties are broken by the lowest training index.
    """
    config = config or MatchingConfig()
    test, train = _KeypointArrays.of(test_kps), _KeypointArrays.of(train_kps)
    if len(test) == 0 or len(train) == 0:
        return []
    candidates = scale_candidates(test.sigmas, train.sigmas, config)
    return _nearest_neighbor_matches(test, train, candidates, config, image_index, accept_single=False)


def spatial_residuals(matches: Sequence[Match], translation: FloatTriple) -> Array:
    """Return the distances between the matches' translations and the given image translation"""
    if not matches:
        return np.zeros(0)
    translations = np.array([m.translation for m in matches], dtype=np.float64)
    return np.linalg.norm(translations - np.asarray(translation, dtype=np.float64), axis=1)


def spatial_tolerance(matches: Sequence[Match], translation: FloatTriple, config: MatchingConfig) -> float:
    """Return the spatial tolerance (eps_x) as quantile of the first-stage residuals"""
    residuals = spatial_residuals(matches, translation)
    if len(residuals) == 0:
        raise ValueError("Spatial tolerance requires at least one first-stage match")
    return float(np.quantile(residuals, config.spatial_keep_fraction))


def stage2_match(
    test_kps: Sequence[DescribedKeypoint],
    train_kps: Sequence[DescribedKeypoint],
    translation: FloatTriple,
    config: MatchingConfig | None = None,
    eps_x: Optional[float] = None,
    image_index: int = 0,
) -> list[Match]:
    """
    Repeat the nearest-neighbor search with candidates additionally restricted to ‖F^x - 𝓕^x - t‖ <= eps_x.

    Args:
        test_kps: The test keypoints.
        train_kps: The keypoints of the training image.
        translation: The most likely translation t between test and training image.
        config: Matching parameters.
        eps_x: The spatial tolerance; computed from the first-stage matches if not given.
        image_index: Index of the training image (stored in the matches).
    """
    config = config or MatchingConfig()
    if eps_x is None:
        first_stage = stage1_match(test_kps, train_kps, config, image_index)
        if not first_stage:
            return []
        eps_x = spatial_tolerance(first_stage, translation, config)

    test, train = _KeypointArrays.of(test_kps), _KeypointArrays.of(train_kps)
    if len(test) == 0 or len(train) == 0:
        return []
    # same evaluation order as spatial_residuals, so first-stage matches at exactly eps_x are kept
    translations = test.positions[:, None, :] - train.positions[None, :, :]
    residuals = np.linalg.norm(translations - np.asarray(translation, dtype=np.float64), axis=2)
    candidates = scale_candidates(test.sigmas, train.sigmas, config) & (residuals <= eps_x)
    return _nearest_neighbor_matches(test, train, candidates, config, image_index, accept_single=True)


def _nearest_neighbor_matches(
    test: _KeypointArrays,
    train: _KeypointArrays,
    candidates: Array,
    config: MatchingConfig,
    image_index: int,
    accept_single: bool,
) -> list[Match]:
    distances = np.where(candidates, cdist(test.descriptors, train.descriptors), np.inf)
    num_candidates = np.count_nonzero(candidates, axis=1)
    rows = np.arange(len(test))

    nearest = np.argmin(distances, axis=1)
    first = distances[rows, nearest]
    distances[rows, nearest] = np.inf
    second = distances.min(axis=1)

    min_candidates = 2 if config.use_ratio_test and not accept_single else 1
    matches = []
    for i in range(len(test)):
        if num_candidates[i] < min_candidates:
            continue
        if config.use_ratio_test and num_candidates[i] > 1:
            if not (second[i] > 0.0 and first[i] <= config.ratio_threshold * second[i]):
                continue
        j = int(nearest[i])
        matches.append(
            Match(
                test_index=i,
                train_image=image_index,
                train_index=j,
                desc_dist=float(first[i]),
                translation=as_float_triple(test.positions[i] - train.positions[j]),
            )
        )
    return matches
