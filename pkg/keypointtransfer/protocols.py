# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Definitions of the interfaces used by keypointtransfer"""

from __future__ import annotations
from typing import Protocol, Tuple, runtime_checkable

from ._numpy_utils import Array


@runtime_checkable
class Logger(Protocol):
    """Interface for objects receiving progress messages from long-running operations."""

    def log(self, message: str, verbosity_level: int = 1) -> None:
        """
        Log the given message.

        Args:
            message: The message (including trailing newlines, if desired).
            verbosity_level: Minimum verbosity at which the message should appear.
        """
        ...


@runtime_checkable
class Volume(Protocol):
    """A dense 3d grid of values with physical geometry."""

    @property
    def dims(self) -> Tuple[int, int, int]:
        """Return the number of voxels per axis."""
        ...

    @property
    def spacing(self) -> Tuple[float, float, float]:
        """Return the voxel size per axis (mm/voxel)."""
        ...

    @property
    def origin(self) -> Tuple[float, float, float]:
        """Return the physical position of the first voxel (mm)."""
        ...

    @property
    def data(self) -> Array:
        """Return the voxel values as array of shape `dims`, indexed as [x, y, z]."""
        ...


class NullLogger:
    """Logger that discards all messages."""

    def log(self, message: str, verbosity_level: int = 1) -> None:
        pass
