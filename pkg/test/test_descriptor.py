# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Test the gradient orientation histogram descriptor and the keypoint labeling"""
from __future__ import annotations

import numpy as np
import pytest

from keypointtransfer._common import ConfigError
from keypointtransfer.descriptor import (
    DESCRIPTOR_SIZE,
    DescribedKeypoint,
    DescriptorConfig,
    assign_labels,
    clip_renormalize,
    compute_descriptor,
    describe_keypoints,
    support_window,
)
from keypointtransfer.scalespace import Keypoint, detect_keypoints
from keypointtransfer.volume import GeometryError, LabelVolume, ScalarVolume

from _common import blob_volume, gaussian_blobs


def _random_volume(dims=(32, 32, 32), seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).integers(0, 256, dims).astype(np.float64)


def test_support_radius():
    config = DescriptorConfig()
    assert config.support_radius(1.6) == 6
    assert config.support_radius(3.2) == 13
    assert config.support_radius(0.01) == 1


def test_invalid_config():
    with pytest.raises(ConfigError):
        DescriptorConfig(clip=0.0)
    with pytest.raises(ConfigError):
        DescriptorConfig(support_factor=-1.0)


def test_descriptor_is_unit_length_and_clipped():
    volume = ScalarVolume(_random_volume())
    descriptor = compute_descriptor(volume, Keypoint((16.0, 16.0, 16.0), 2.0, 1.0))
    assert descriptor is not None
    assert descriptor.shape == (DESCRIPTOR_SIZE,)
    assert np.linalg.norm(descriptor) == pytest.approx(1.0)
    assert np.all(descriptor >= 0.0)
    assert np.all(descriptor <= 0.2 + 1e-9)


def test_constant_support_gives_no_descriptor():
    volume = ScalarVolume(np.full((24, 24, 24), 42.0))
    assert compute_descriptor(volume, Keypoint((12.0, 12.0, 12.0), 1.6, 1.0)) is None


def test_support_outside_volume_gives_no_descriptor():
    volume = ScalarVolume(_random_volume((20, 20, 20)))
    keypoint = Keypoint((3.0, 10.0, 10.0), 1.6, 1.0)
    assert support_window(volume, keypoint, DescriptorConfig()) is None
    assert compute_descriptor(volume, keypoint) is None


def test_descriptor_depends_only_on_support():
    data = _random_volume()
    keypoint = Keypoint((16.0, 16.0, 16.0), 1.6, 1.0)
    window = support_window(ScalarVolume(data), keypoint, DescriptorConfig())
    masked = np.zeros_like(data)
    masked[window] = data[window]
    assert np.array_equal(
        compute_descriptor(ScalarVolume(data), keypoint), compute_descriptor(ScalarVolume(masked), keypoint)
    )


@pytest.mark.parametrize("scale, offset", [(2.0, 0.0), (3.0, 100.0), (0.5, -40.0)])
def test_descriptor_is_invariant_to_intensity_affine_maps(scale, offset):
    data = _random_volume(seed=1)
    keypoint = Keypoint((15.0, 17.0, 16.0), 1.8, 1.0)
    original = compute_descriptor(ScalarVolume(data), keypoint)
    transformed = compute_descriptor(ScalarVolume(scale * data + offset), keypoint)
    assert np.linalg.norm(original - transformed) < 1e-6


def test_translated_copy_has_identical_descriptor():
    data = gaussian_blobs((40, 40, 40), [((16, 18, 17), 3.0, 100.0), ((20, 14, 15), 2.0, -50.0)])
    shifted = np.zeros_like(data)
    shifted[3:, :, 5:] = data[:-3, :, :-5]
    first = compute_descriptor(ScalarVolume(data), Keypoint((17.0, 16.0, 16.0), 2.0, 1.0))
    second = compute_descriptor(ScalarVolume(shifted), Keypoint((20.0, 16.0, 21.0), 2.0, 1.0))
    assert np.allclose(first, second, rtol=0.0, atol=1e-12)


@pytest.mark.parametrize("sigma", [2.0, 3.0])
def test_upsampled_copy_has_similar_descriptor(sigma):
    blobs = [((23.0, 18.0, 21.0), 4.0, 100.0), ((16.0, 22.0, 19.0), 3.0, -60.0), ((21.0, 24.0, 15.0), 5.0, 40.0)]
    coarse = gaussian_blobs((41, 41, 41), blobs)
    fine = gaussian_blobs((81, 81, 81), [(tuple(2.0 * c for c in center), 2.0 * s, a) for center, s, a in blobs])
    first = compute_descriptor(ScalarVolume(coarse), Keypoint((20.0, 20.0, 20.0), sigma, 1.0))
    second = compute_descriptor(ScalarVolume(fine), Keypoint((40.0, 40.0, 40.0), 2.0 * sigma, 1.0))
    assert first is not None and second is not None
    assert np.linalg.norm(first - second) < 0.1


def test_mirrored_structure_changes_descriptor():
    data = gaussian_blobs((32, 32, 32), [((13, 16, 16), 2.5, 100.0)])
    keypoint = Keypoint((16.0, 16.0, 16.0), 1.6, 1.0)
    first = compute_descriptor(ScalarVolume(data), keypoint)
    second = compute_descriptor(ScalarVolume(data[::-1, :, :].copy()), Keypoint((15.0, 16.0, 16.0), 1.6, 1.0))
    assert np.linalg.norm(first - second) > 0.1


def test_clip_renormalize_is_idempotent():
    values = np.random.default_rng(3).random(DESCRIPTOR_SIZE) ** 4
    once = clip_renormalize(values)
    assert once is not None
    assert np.allclose(clip_renormalize(once), once, rtol=0.0, atol=1e-10)
    assert np.all(once <= 0.2 + 1e-9)


def test_clip_renormalize_with_few_populated_bins():
    values = np.zeros(DESCRIPTOR_SIZE)
    values[:4] = [10.0, 1.0, 1.0, 1.0]
    result = clip_renormalize(values)
    assert np.allclose(result[:4], 0.5)
    assert np.all(result[4:] == 0.0)


def test_clip_renormalize_of_zeros():
    assert clip_renormalize(np.zeros(DESCRIPTOR_SIZE)) is None


def test_describe_keypoints_preserves_order_and_drops_invalid():
    volume = blob_volume((40, 40, 40), [((14, 20, 20), 2.5, 100.0), ((26, 20, 20), 2.0, -80.0)])
    keypoints = [
        Keypoint((20.0, 20.0, 20.0), 1.6, 1.0),
        Keypoint((1.0, 20.0, 20.0), 1.6, 1.0),
        Keypoint((14.0, 20.0, 20.0), 2.0, 1.0),
    ]
    described = describe_keypoints(volume, keypoints, threads=2)
    assert [d.keypoint for d in described] == [keypoints[0], keypoints[2]]
    assert all(d.label is None for d in described)


def test_describe_keypoints_independent_of_threads():
    volume = blob_volume((48, 48, 48), [((20, 24, 24), 3.0, 100.0), ((30, 26, 22), 2.0, -60.0)])
    keypoints = detect_keypoints(volume)
    sequential = describe_keypoints(volume, keypoints, threads=1)
    parallel = describe_keypoints(volume, keypoints, threads=4)
    assert sequential == parallel
    assert all(np.array_equal(a.descriptor, b.descriptor) for a, b in zip(sequential, parallel))


def _described(x, label=None) -> DescribedKeypoint:
    return DescribedKeypoint(Keypoint(x, 1.6, 1.0), np.full(DESCRIPTOR_SIZE, 0.125), label)


def test_assign_labels_uses_rounded_location_and_drops_background():
    data = np.zeros((10, 10, 10), dtype=np.uint8)
    data[5, 5, 5] = 3
    data[2, 2, 2] = 1
    segmentation = LabelVolume(data)
    keypoints = [_described((5.0, 5.0, 5.0)), _described((8.0, 8.0, 8.0)), _described((2.4, 1.6, 2.0))]
    labeled = assign_labels(keypoints, segmentation)
    assert [kp.label for kp in labeled] == [3, 1]
    assert [kp.x for kp in labeled] == [(5.0, 5.0, 5.0), (2.4, 1.6, 2.0)]


def test_assign_labels_outside_segmentation_raises():
    segmentation = LabelVolume(np.ones((4, 4, 4), dtype=np.uint8))
    with pytest.raises(GeometryError):
        assign_labels([_described((4.0, 0.0, 0.0))], segmentation)
