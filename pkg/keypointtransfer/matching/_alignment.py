# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Estimation of the translation per training image and of the distribution over matches"""

from __future__ import annotations
from dataclasses import replace
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .._numpy_utils import Array, FloatTriple, as_float_triple
from ._config import MatchingConfig
from ._match import Match


def _translations(matches: Sequence[Match]) -> Array:
    return np.array([m.translation for m in matches], dtype=np.float64).reshape(-1, 3)


def hough_bin_indices(translations: Array, bins: int) -> Array:
    """Return the linear bin index of each translation in a bins³ histogram over their bounding box"""
    lower = translations.min(axis=0)
    extent = translations.max(axis=0) - lower
    indices = np.zeros(translations.shape, dtype=np.int64)
    spread = extent > 0.0
    scaled = (translations[:, spread] - lower[spread]) / extent[spread] * bins
    indices[:, spread] = np.minimum(np.floor(scaled).astype(np.int64), bins - 1)
    return np.ravel_multi_index(tuple(indices.T), (bins, bins, bins))


def hough_translation(matches: Sequence[Match], config: MatchingConfig | None = None) -> FloatTriple | None:
    """
    Return the most likely translation suggested by the matches, or None if there are no matches.

    The translations are binned into a histogram over their bounding box and the mean translation
    of the fullest bin is returned (ties resolved by the lowest linear bin index).
    """
    if not matches:
        return None
    config = config or MatchingConfig()
    translations = _translations(matches)
    linear = hough_bin_indices(translations, config.hough_bins)
    counts = np.bincount(linear, minlength=config.hough_bins**3)
    best = int(np.argmax(counts))
    return as_float_triple(translations[linear == best].mean(axis=0))


def median_translation(matches: Sequence[Match]) -> FloatTriple | None:
    """Return the componentwise median of the match translations, or None if there are no matches"""
    if not matches:
        return None
    return as_float_triple(np.median(_translations(matches), axis=0))


def estimate_translation(matches: Sequence[Match], config: MatchingConfig | None = None) -> FloatTriple | None:
    config = config or MatchingConfig()
    if config.alignment == "median":
        return median_translation(matches)
    return hough_translation(matches, config)


def normalized_translations(matches: Sequence[Match]) -> Array:
    """Map each translation component affinely to [0, 1] over the bounding box (0.5 on degenerate axes)"""
    translations = _translations(matches)
    lower = translations.min(axis=0)
    extent = translations.max(axis=0) - lower
    safe_extent = np.where(extent > 0.0, extent, 1.0)
    return np.where(extent > 0.0, (translations - lower) / safe_extent, 0.5)


def estimate_match_distribution(matches: Sequence[Match], config: MatchingConfig | None = None) -> list[Match]:
    """
    Return the matches with p_m set to their kernel density in normalized translation space.

    The densities are normalized to sum up to one over the given matches (of one training image).
    """
    if not matches:
        return []
    config = config or MatchingConfig()
    normalized = normalized_translations(matches)
    squared_distances = cdist(normalized, normalized, "sqeuclidean")
    density = np.exp(-squared_distances / (2.0 * config.kde_sigma**2)).mean(axis=1)
    p_m = density / density.sum()
    return [replace(m, p_m=float(p)) for m, p in zip(matches, p_m)]
