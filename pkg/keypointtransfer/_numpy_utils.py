# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Array type aliases and small numpy helpers shared across the package"""

from __future__ import annotations
from typing import Tuple

import numpy as np
from numpy import ndarray
from numpy.typing import ArrayLike as NumpyArrayLike


Array = ndarray
ArrayLike = NumpyArrayLike
IndexTriple = Tuple[int, int, int]
FloatTriple = Tuple[float, float, float]

_SPACE_DIM = 3


def as_array(input_array: Array | ArrayLike) -> Array:
    """Return an array with the values of the given input sequence"""
    if isinstance(input_array, Array):
        return input_array
    return np.array(input_array)


def as_float_triple(values: ArrayLike) -> FloatTriple:
    """Convert the given three-component sequence into a tuple of floats"""
    result = tuple(float(v) for v in as_array(values).reshape(-1))
    if len(result) != _SPACE_DIM:
        raise ValueError(f"Expected three components, got {len(result)}")
    return result  # type: ignore[return-value]


def as_index_triple(values: ArrayLike) -> IndexTriple:
    """Convert the given three-component sequence into a tuple of integers"""
    array = as_array(values).reshape(-1)
    if len(array) != _SPACE_DIM:
        raise ValueError(f"Expected three components, got {len(array)}")
    if not all(float(v).is_integer() for v in array):
        raise ValueError(f"Expected integer components, got {array}")
    return (int(array[0]), int(array[1]), int(array[2]))


def round_to_voxel(position: ArrayLike) -> IndexTriple:
    """Return the voxel index closest to the given (continuous) position"""
    return as_index_triple(np.rint(as_array(position)))


def standard_error(values: ArrayLike) -> float:
    """Return the standard error of the mean of the given sample (0 for less than two values)"""
    sample = as_array(values).astype(float)
    if len(sample) < 2:  # noqa: PLR2004
        return 0.0
    return float(np.std(sample, ddof=1) / np.sqrt(len(sample)))
