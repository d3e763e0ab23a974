# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Transfer of organ label masks along keypoint matches and their fusion into a segmentation"""

from __future__ import annotations
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .._common import chunked, ordered_map
from .._numpy_utils import Array, IndexTriple, round_to_voxel
from ..descriptor import DescribedKeypoint
from ..matching import ImageMatches, Match
from ..voting import LabelPosterior
from ..volume import LabelVolume, ScalarVolume, VolumeGeometry, check_same_geometry
from ._config import TransferConfig


@dataclass
class TrainingSubject:
    """A training image with its segmentation and its labeled keypoints."""

    image: ScalarVolume
    labels: LabelVolume
    keypoints: list[DescribedKeypoint] = field(default_factory=list)

    def __post_init__(self) -> None:
        check_same_geometry(self.image, self.labels, "training image and segmentation")

    def keypoint_labels(self) -> list[int | None]:
        return [kp.label for kp in self.keypoints]


@dataclass
class ProbabilityMaps:
    """
    Accumulated transfer scores per label.

    Args:
        maps: Array of shape (num_labels, nx, ny, nz), where maps[l - 1] is the score map of label l.
        z_norm: Total transferred weight per label (maximal attainable score).
        geometry: Geometry of the test image.
    """

    maps: Array
    z_norm: Array
    geometry: VolumeGeometry

    @property
    def num_labels(self) -> int:
        return len(self.z_norm)

    def normalized(self) -> Array:
        """Return the maps divided by their label's total weight (zero for labels that received none)."""
        safe = np.where(self.z_norm > 0.0, self.z_norm, 1.0)
        return np.where((self.z_norm > 0.0)[:, None, None, None], self.maps / safe[:, None, None, None], 0.0)

    def score_volume(self, label: int) -> ScalarVolume:
        """Return the score map of the given label as (float32) volume."""
        return ScalarVolume(self.maps[label - 1], spacing=self.geometry.spacing, origin=self.geometry.origin)


@dataclass
class SegmentationResult:
    """
    The fused segmentation of a test image.

    Args:
        labels: The label volume.
        probability_maps: The accumulated score maps the labels were derived from.
        transfer_counts: Number of mask transfers per label.
    """

    labels: LabelVolume
    probability_maps: ProbabilityMaps
    transfer_counts: dict[int, int] = field(default_factory=dict)


@dataclass
class _PartialMaps:
    maps: Array
    z_norm: Array
    counts: Array


def shifted_region(
    lower: IndexTriple, upper: IndexTriple, shift: IndexTriple, dims: IndexTriple
) -> tuple[tuple[slice, ...], tuple[slice, ...]] | None:
    """
    Return the (destination, source) slices of the box [lower, upper) shifted by `shift` into a grid of size `dims`,
    or None if the shifted box lies entirely outside.
    """
    dst_lo = [max(lo + s, 0) for lo, s in zip(lower, shift)]
    dst_hi = [min(hi + s, d) for hi, s, d in zip(upper, shift, dims)]
    if any(lo >= hi for lo, hi in zip(dst_lo, dst_hi)):
        return None
    destination = tuple(slice(lo, hi) for lo, hi in zip(dst_lo, dst_hi))
    source = tuple(slice(lo - s, hi - s) for lo, hi, s in zip(dst_lo, dst_hi, shift))
    return destination, source


def intensity_weight(test_values: Array, train_values: Array, nu: float) -> Array:
    """Return exp(-(I - 𝓘)² / (2 nu²)), the similarity of test and shifted training intensities"""
    return np.exp(-((test_values - train_values) ** 2) / (2.0 * nu**2))


def _transfer_image(
    test: Array,
    posteriors: Sequence[LabelPosterior],
    subject: TrainingSubject,
    matches: Sequence[Match],
    num_labels: int,
    config: TransferConfig,
) -> _PartialMaps:
    partial = _PartialMaps(
        maps=np.zeros((num_labels,) + test.shape, dtype=np.float64),
        z_norm=np.zeros(num_labels, dtype=np.float64),
        counts=np.zeros(num_labels, dtype=np.int64),
    )
    if not matches:
        return partial

    train_image = subject.image.as_float()
    train_labels = subject.labels.data
    boxes: dict[int, tuple[IndexTriple, IndexTriple] | None] = {}
    dims = test.shape
    for match in matches:
        posterior = posteriors[match.test_index]
        voted = posterior.voted_label
        keypoint_label = subject.keypoints[match.train_index].label
        if voted is None or voted != keypoint_label:
            continue
        weight = posterior.probability(voted) * match.p_m
        if weight <= 0.0:
            continue

        shift = round_to_voxel(match.translation)
        for label in config.transferable_labels(keypoint_label):
            if not 1 <= label <= num_labels:
                raise ValueError(f"Cannot transfer label {label} with only {num_labels} labels")
            if label not in boxes:
                boxes[label] = subject.labels.bounding_box(label)
            box = boxes[label]
            if box is None:
                continue
            partial.z_norm[label - 1] += weight
            partial.counts[label - 1] += 1
            region = shifted_region(box[0], box[1], shift, dims)  # type: ignore[arg-type]
            if region is None:
                continue
            destination, source = region
            mask = train_labels[source] == label
            w = intensity_weight(test[destination], train_image[source], config.nu_for(label))
            partial.maps[label - 1][destination] += np.where(mask, w * weight, 0.0)
    return partial


def transfer_segmentation(
    test: ScalarVolume,
    posteriors: Sequence[LabelPosterior],
    training: Sequence[TrainingSubject],
    image_matches: Sequence[ImageMatches],
    config: TransferConfig | None = None,
    num_labels: int | None = None,
    threads: int = 1,
) -> SegmentationResult:
    """
    Transfer the organ masks of the training images along the matches of the voted test keypoints.

    A match transfers masks only if the test keypoint's vote equals the training keypoint's label.
    Each transferred mask is shifted by the rounded match translation, weighted with the intensity
    similarity W, the keypoint's posterior for its vote and the match probability. Per-image partial
    maps are merged in training image order, so the result does not depend on `threads`.

    Args:
        test: The test image.
        posteriors: The vote of each test keypoint.
        training: The training subjects (image, segmentation, labeled keypoints).
        image_matches: The matches per training image (as returned by match_all).
        config: Transfer parameters.
        num_labels: Number of labels; defaults to the maximum over the training segmentations.
        threads: Number of training images processed concurrently.
    """
    config = config or TransferConfig()
    if num_labels is None:
        num_labels = max((s.labels.num_labels for s in training), default=0)
    test_data = test.as_float()
    maps = np.zeros((num_labels,) + test_data.shape, dtype=np.float64)
    z_norm = np.zeros(num_labels, dtype=np.float64)
    counts = np.zeros(num_labels, dtype=np.int64)

    jobs = [(training[im.image_index], im.matches) for im in image_matches]
    for chunk in chunked(jobs, threads):
        partials = ordered_map(
            lambda job: _transfer_image(test_data, posteriors, job[0], job[1], num_labels, config),
            chunk,
            threads,
        )
        for partial in partials:
            maps += partial.maps
            z_norm += partial.z_norm
            counts += partial.counts

    probability_maps = ProbabilityMaps(maps=maps, z_norm=z_norm, geometry=test.geometry)
    return SegmentationResult(
        labels=fuse_labels(probability_maps, config.background_threshold, num_labels),
        probability_maps=probability_maps,
        transfer_counts={label: int(counts[label - 1]) for label in range(1, num_labels + 1)},
    )


def transfer_cross_label(
    test: ScalarVolume,
    posteriors: Sequence[LabelPosterior],
    training: Sequence[TrainingSubject],
    image_matches: Sequence[ImageMatches],
    cross_label: Mapping[int, frozenset[int]],
    config: TransferConfig | None = None,
    num_labels: int | None = None,
    threads: int = 1,
) -> SegmentationResult:
    """Transfer with keypoints of one label also transferring the masks of the labels given in `cross_label`"""
    config = replace(config or TransferConfig(), cross_label=cross_label)
    return transfer_segmentation(test, posteriors, training, image_matches, config, num_labels, threads)


def fuse_labels(maps: ProbabilityMaps, background_threshold: float, num_labels: int) -> LabelVolume:
    """Label each voxel with its highest-scoring label, or background if no normalized score reaches the threshold"""
    origin, spacing = maps.geometry.origin, maps.geometry.spacing
    if num_labels == 0:
        return LabelVolume(np.zeros(maps.geometry.dims, dtype=np.uint8), 0, spacing=spacing, origin=origin)
    best = np.argmax(maps.maps, axis=0) + 1
    confident = (maps.normalized().max(axis=0) >= background_threshold) & (maps.maps.max(axis=0) > 0.0)
    labels = np.where(confident, best, 0)
    dtype = np.uint8 if num_labels <= np.iinfo(np.uint8).max else np.uint16
    return LabelVolume(labels.astype(dtype), num_labels, spacing=spacing, origin=origin)
