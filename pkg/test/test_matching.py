# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Test the two-stage keypoint matching, the translation estimate and the match distribution"""
from __future__ import annotations
from time import perf_counter

import numpy as np
import pytest

from keypointtransfer._common import ConfigError
from keypointtransfer.descriptor import DESCRIPTOR_SIZE, DescribedKeypoint
from keypointtransfer.matching import (
    MatchingConfig,
    estimate_match_distribution,
    estimate_translation,
    hough_bin_indices,
    hough_translation,
    match_all,
    match_training_image,
    median_translation,
    normalized_translations,
    scale_candidates,
    spatial_tolerance,
    stage1_match,
    stage2_match,
)
from keypointtransfer.scalespace import Keypoint

from _common import brute_force_matches, make_match, random_keypoints, shifted_keypoints


def _with_sigma(keypoints, sigma):
    return [
        DescribedKeypoint(Keypoint(kp.x, sigma, kp.keypoint.dog_value), kp.descriptor, kp.label) for kp in keypoints
    ]


@pytest.mark.parametrize("kwargs", [{"eps_sigma": 1.0}, {"ratio_threshold": 1.0}, {"alignment": "ransac"}])
def test_invalid_config(kwargs):
    with pytest.raises(ConfigError):
        MatchingConfig(**kwargs)


def test_scale_candidates_bounds_are_inclusive():
    mask = scale_candidates(np.array([2.0]), np.array([1.0, 4.0, 0.99, 4.01]), MatchingConfig(eps_sigma=2.0))
    assert mask.tolist() == [[True, True, False, False]]


def test_self_matching_maps_every_keypoint_to_itself():
    keypoints = random_keypoints(np.random.default_rng(0), 40)
    matches = stage1_match(keypoints, keypoints)
    assert [(m.test_index, m.train_index) for m in matches] == [(i, i) for i in range(40)]
    assert all(m.desc_dist == 0.0 and m.translation == (0.0, 0.0, 0.0) for m in matches)

    image = match_training_image(keypoints, keypoints)
    assert image.translation == (0.0, 0.0, 0.0)
    assert image.eps_x == 0.0
    assert [(m.test_index, m.train_index) for m in image.matches] == [(i, i) for i in range(40)]


def test_no_candidates_with_incompatible_scales():
    rng = np.random.default_rng(1)
    test = _with_sigma(random_keypoints(rng, 10), 5.0)
    train = _with_sigma(random_keypoints(rng, 10), 1.0)
    assert stage1_match(test, train) == []
    image = match_training_image(test, train)
    assert image.matches == []
    assert not image.aligned


def test_single_candidate_is_not_matched_in_first_stage():
    rng = np.random.default_rng(2)
    train = random_keypoints(rng, 1)
    assert stage1_match(train, train) == []
    assert stage1_match(train, train, MatchingConfig(use_ratio_test=False))[0].train_index == 0


def test_empty_inputs():
    keypoints = random_keypoints(np.random.default_rng(3), 3)
    assert stage1_match([], keypoints) == []
    assert stage1_match(keypoints, []) == []
    assert match_training_image([], keypoints).matches == []


def _training_set(rng: np.random.Generator, test, size: int):
    """A shifted, perturbed subset of the test keypoints mixed with random keypoints"""
    shift = tuple(float(v) for v in rng.integers(-8, 9, 3))
    chosen = rng.permutation(len(test))[: size // 2]
    kept = []
    for kp in shifted_keypoints([test[i] for i in chosen], shift):
        descriptor = np.abs(kp.descriptor + rng.normal(0.0, 0.02, DESCRIPTOR_SIZE))
        kept.append(DescribedKeypoint(kp.keypoint, descriptor / np.linalg.norm(descriptor), kp.label))
    train = kept + random_keypoints(rng, size - len(kept), labels=[1, 2, 3])
    return [train[i] for i in rng.permutation(len(train))]


def test_both_stages_match_brute_force_on_random_instances():
    config = MatchingConfig()
    elapsed = 0.0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        test = random_keypoints(rng, int(rng.integers(1, 201)))
        for _ in range(5):
            train = _training_set(rng, test, int(rng.integers(1, 201)))
            start = perf_counter()
            first_stage = stage1_match(test, train, config)
            translation = estimate_translation(first_stage, config)
            eps_x = spatial_tolerance(first_stage, translation, config) if first_stage else None
            second_stage = stage2_match(test, train, translation, config, eps_x=eps_x) if first_stage else []
            elapsed += perf_counter() - start

            expected = brute_force_matches(test, train, config)
            assert [(m.test_index, m.train_index) for m in first_stage] == [(i, j) for i, j, _ in expected]
            assert [m.desc_dist for m in first_stage] == pytest.approx([d for _, _, d in expected])
            if first_stage:
                expected = brute_force_matches(test, train, config, translation, eps_x)
                assert [(m.test_index, m.train_index) for m in second_stage] == [(i, j) for i, j, _ in expected]
    assert elapsed < 5.0


@pytest.mark.parametrize("seed", range(5))
def test_second_stage_matches_brute_force_with_loose_tolerance(seed):
    rng = np.random.default_rng(100 + seed)
    test = random_keypoints(rng, int(rng.integers(1, 50)))
    train = random_keypoints(rng, int(rng.integers(1, 50)))
    config = MatchingConfig()
    translation = (float(rng.integers(-5, 6)), 0.0, 2.0)
    eps_x = float(rng.uniform(5.0, 30.0))
    matches = stage2_match(test, train, translation, config, eps_x=eps_x)
    expected = brute_force_matches(test, train, config, translation, eps_x)
    assert [(m.test_index, m.train_index) for m in matches] == [(i, j) for i, j, _ in expected]


def test_second_stage_accepts_single_candidate():
    rng = np.random.default_rng(4)
    train = random_keypoints(rng, 5)
    test = shifted_keypoints(train, (1.0, 0.0, 0.0))
    matches = stage2_match(test[:1], train, (1.0, 0.0, 0.0), eps_x=0.0)
    assert [(m.test_index, m.train_index) for m in matches] == [(0, 0)]


def test_shifted_copy_recovers_translation():
    rng = np.random.default_rng(5)
    train = random_keypoints(rng, 60)
    test = shifted_keypoints(train, (5.0, -3.0, 2.0))
    image = match_training_image(test, train)
    assert image.translation == (5.0, -3.0, 2.0)
    assert len(image.matches) == 60
    assert all(m.translation == (5.0, -3.0, 2.0) for m in image.matches)


def test_spatial_tolerance_is_quantile_of_residuals():
    matches = [make_match(i, i, (float(i), 0.0, 0.0)) for i in range(11)]
    assert spatial_tolerance(matches, (0.0, 0.0, 0.0), MatchingConfig(spatial_keep_fraction=0.1)) == 1.0
    assert spatial_tolerance(matches, (0.0, 0.0, 0.0), MatchingConfig(spatial_keep_fraction=0.5)) == 5.0
    with pytest.raises(ValueError):
        spatial_tolerance([], (0.0, 0.0, 0.0), MatchingConfig())


def test_spatial_constraint_can_be_disabled():
    rng = np.random.default_rng(6)
    test, train = random_keypoints(rng, 30), random_keypoints(rng, 30)
    config = MatchingConfig(use_spatial_constraint=False)
    image = match_training_image(test, train, config=config)
    assert image.eps_x is None
    assert [(m.test_index, m.train_index) for m in image.matches] == [
        (m.test_index, m.train_index) for m in stage1_match(test, train, config)
    ]


def test_hough_with_identical_translations():
    matches = [make_match(i, i, (10.0, -4.0, 2.0)) for i in range(7)]
    assert hough_translation(matches) == (10.0, -4.0, 2.0)


def test_hough_with_single_match():
    assert hough_translation([make_match(0, 0, (1.5, 2.0, -3.0))]) == (1.5, 2.0, -3.0)
    assert hough_translation([]) is None


def test_hough_finds_cluster_among_outliers():
    rng = np.random.default_rng(7)
    cluster = [make_match(i, i, (20.0, 0.0, 0.0) + rng.uniform(-0.5, 0.5, 3)) for i in range(90)]
    outliers = [make_match(90 + i, i, rng.uniform(-50.0, 50.0, 3)) for i in range(10)]
    translation = hough_translation(cluster + outliers)
    assert np.linalg.norm(np.subtract(translation, (20.0, 0.0, 0.0))) <= 10.0
    assert median_translation(cluster + outliers) == pytest.approx((20.0, 0.0, 0.0), abs=1.0)


def test_hough_bin_indices_on_degenerate_axes():
    translations = np.array([[0.0, 5.0, 1.0], [10.0, 5.0, 1.0], [5.0, 5.0, 1.0]])
    indices = hough_bin_indices(translations, 10)
    assert indices.tolist() == [0, 900, 500]


def test_estimate_translation_dispatches_on_alignment():
    matches = [make_match(0, 0, (0.0, 0.0, 0.0)), make_match(1, 1, (1.0, 1.0, 1.0)), make_match(2, 2, (9.0, 9.0, 9.0))]
    assert estimate_translation(matches, MatchingConfig(alignment="median")) == (1.0, 1.0, 1.0)
    assert estimate_translation(matches) == hough_translation(matches)


def test_match_distribution_of_identical_translations_is_uniform():
    matches = estimate_match_distribution([make_match(i, i, (3.0, 3.0, 3.0)) for i in range(8)])
    assert [m.p_m for m in matches] == pytest.approx([1.0 / 8.0] * 8)


def test_match_distribution_of_single_match():
    assert estimate_match_distribution([make_match(0, 0, (1.0, 2.0, 3.0))])[0].p_m == 1.0
    assert estimate_match_distribution([]) == []


def test_match_distribution_favors_clusters():
    matches = (
        [make_match(i, i, (0.0, 0.0, 0.0)) for i in range(5)]
        + [make_match(5 + i, i, (10.0, 10.0, 10.0)) for i in range(5)]
        + [make_match(10, 0, (5.0, 0.0, 10.0))]
    )
    p_m = [m.p_m for m in estimate_match_distribution(matches)]
    assert sum(p_m) == pytest.approx(1.0)
    assert 0.4 <= sum(p_m[:5]) <= 0.6
    assert p_m[10] < min(p_m[:10])


def test_normalized_translations():
    matches = [make_match(0, 0, (0.0, 1.0, 2.0)), make_match(1, 1, (4.0, 1.0, 6.0))]
    assert normalized_translations(matches).tolist() == [[0.0, 0.5, 0.0], [1.0, 0.5, 1.0]]


def test_match_all_is_ordered_and_independent_of_threads():
    rng = np.random.default_rng(8)
    test = random_keypoints(rng, 30)
    training = [shifted_keypoints(test, (float(i), 0.0, 0.0)) for i in range(4)] + [random_keypoints(rng, 20)]
    sequential = match_all(test, training, threads=1)
    parallel = match_all(test, training, threads=3)
    assert [im.image_index for im in sequential] == list(range(5))
    assert [im.matches for im in sequential] == [im.matches for im in parallel]
    assert [im.translation for im in sequential[:4]] == [(-float(i), 0.0, 0.0) for i in range(4)]
