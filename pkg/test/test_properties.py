# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Property-based tests of invariances of the descriptor, the match distribution and the Dice overlap"""
from __future__ import annotations

import numpy as np
from hypothesis import assume, given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from keypointtransfer.descriptor import DESCRIPTOR_SIZE, clip_renormalize, compute_descriptor
from keypointtransfer.eval import dice
from keypointtransfer.matching import estimate_match_distribution
from keypointtransfer.scalespace import Keypoint
from keypointtransfer.volume import LabelVolume, ScalarVolume

from _common import make_match

_IMAGE_DIMS = (24, 24, 24)
_CENTER_KEYPOINT = Keypoint((12.0, 12.0, 12.0), 2.0, 1.0)


@st.composite
def _integer_images(draw) -> np.ndarray:
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return np.random.default_rng(seed).integers(0, 256, size=_IMAGE_DIMS).astype(np.int16)


@given(
    image=_integer_images(),
    scale=st.integers(min_value=1, max_value=16),
    offset=st.integers(min_value=-500, max_value=500),
)
@settings(max_examples=100, deadline=None)
def test_descriptor_is_invariant_to_affine_intensity_changes(image, scale, offset):
    reference = compute_descriptor(ScalarVolume(image), _CENTER_KEYPOINT)
    transformed = compute_descriptor(ScalarVolume((scale * image + offset).astype(np.int16)), _CENTER_KEYPOINT)
    assert reference is not None
    assert transformed is not None
    assert np.max(np.abs(reference - transformed)) < 1e-6


@given(
    arrays(
        dtype=np.float64,
        shape=(DESCRIPTOR_SIZE,),
        elements=st.floats(min_value=0.0, max_value=1e3, allow_nan=False, allow_infinity=False),
    )
)
@settings(max_examples=100, deadline=None)
def test_clip_renormalize_is_idempotent(values):
    assume(np.linalg.norm(values) > 1e-6)
    once = clip_renormalize(values)
    assert once is not None
    assert abs(np.linalg.norm(once) - 1.0) < 1e-9
    twice = clip_renormalize(once)
    assert np.allclose(once, twice, rtol=0.0, atol=1e-9)


_translation = st.tuples(*[st.integers(min_value=-30, max_value=30)] * 3)


@given(
    translations=st.lists(_translation, min_size=1, max_size=20),
    shift=_translation,
)
@settings(max_examples=100, deadline=None)
def test_match_probabilities_are_invariant_to_global_translation(translations, shift):
    matches = [make_match(i, i, t) for i, t in enumerate(translations)]
    moved = [make_match(i, i, tuple(a + b for a, b in zip(t, shift))) for i, t in enumerate(translations)]
    p_m = [m.p_m for m in estimate_match_distribution(matches)]
    moved_p_m = [m.p_m for m in estimate_match_distribution(moved)]
    assert np.allclose(p_m, moved_p_m, rtol=0.0, atol=1e-12)
    assert abs(sum(p_m) - 1.0) < 1e-9


_label_arrays = arrays(dtype=np.uint8, shape=(4, 5, 6), elements=st.integers(min_value=0, max_value=3))


@given(first=_label_arrays, second=_label_arrays, label=st.integers(min_value=1, max_value=3))
@settings(max_examples=100, deadline=None)
def test_dice_is_symmetric_and_bounded(first, second, label):
    first_volume, second_volume = LabelVolume(first, num_labels=3), LabelVolume(second, num_labels=3)
    value = dice(first_volume, second_volume, label)
    assert value == dice(second_volume, first_volume, label)
    assert 0.0 <= value <= 1.0
    assert dice(first_volume, first_volume, label) == 1.0
