# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Keypoint and match files (comma-separated values with a header row)"""

from __future__ import annotations
from typing import Sequence, TextIO

import numpy as np

from .._numpy_utils import as_float_triple
from ..descriptor import DescribedKeypoint, DESCRIPTOR_SIZE
from ..matching import Match
from ..scalespace import Keypoint
from ..voting import LabelPosterior
from ._nrrd import VolumeIOError

KEYPOINT_COLUMNS = ["x", "y", "z", "sigma", "dog_value", "label"] + [f"d{i}" for i in range(DESCRIPTOR_SIZE)]
MATCH_COLUMNS = ["test_index", "train_image", "train_index", "desc_dist", "tx", "ty", "tz", "p_m"]
_FLOAT_FORMAT = "%.17g"


def write_keypoints(
    filename: str,
    keypoints: Sequence[DescribedKeypoint],
    posteriors: Sequence[LabelPosterior] | None = None,
) -> str:
    """
    Write described keypoints into a csv file, with label 0 denoting unlabeled keypoints.

    If posteriors are given, the voted label (0 for none) and the score per label are appended.
    """
    columns = list(KEYPOINT_COLUMNS)
    rows = [
        [*kp.x, kp.sigma, kp.keypoint.dog_value, kp.label or 0, *kp.descriptor]  # type: ignore[misc]
        for kp in keypoints
    ]
    if posteriors is not None:
        if len(posteriors) != len(keypoints):
            raise ValueError("Number of posteriors must match the number of keypoints")
        num_labels = max((p.num_labels for p in posteriors), default=0)
        columns += ["voted_label"] + [f"score_{label}" for label in range(1, num_labels + 1)]
        for row, posterior in zip(rows, posteriors):
            row += [posterior.voted_label or 0, *posterior.scores]
    _write_table(filename, columns, rows)
    return filename


def read_keypoints(filename: str) -> list[DescribedKeypoint]:
    """Read described (and possibly labeled) keypoints from a csv file written by `write_keypoints`"""
    columns, table = _read_table(filename)
    if columns[: len(KEYPOINT_COLUMNS)] != KEYPOINT_COLUMNS:
        raise VolumeIOError(f"Unexpected keypoint columns in '{filename}': {columns[:len(KEYPOINT_COLUMNS)]}")
    descriptor_begin = KEYPOINT_COLUMNS.index("d0")
    return [
        DescribedKeypoint(
            keypoint=Keypoint(x=as_float_triple(row[0:3]), sigma=float(row[3]), dog_value=float(row[4])),
            descriptor=np.array(row[descriptor_begin : descriptor_begin + DESCRIPTOR_SIZE], dtype=np.float64),
            label=int(row[5]) if int(row[5]) != 0 else None,
        )
        for row in table
    ]


def write_matches(filename: str, matches: Sequence[Match]) -> str:
    """Write matches into a csv file"""
    rows = [
        [m.test_index, m.train_image, m.train_index, m.desc_dist, *m.translation, m.p_m]  # type: ignore[misc]
        for m in matches
    ]
    _write_table(filename, MATCH_COLUMNS, rows)
    return filename


def read_matches(filename: str) -> list[Match]:
    """Read matches from a csv file written by `write_matches`"""
    columns, table = _read_table(filename)
    if columns != MATCH_COLUMNS:
        raise VolumeIOError(f"Unexpected match columns in '{filename}': {columns}")
    return [
        Match(
            test_index=int(row[0]),
            train_image=int(row[1]),
            train_index=int(row[2]),
            desc_dist=float(row[3]),
            translation=as_float_triple(row[4:7]),
            p_m=float(row[7]),
        )
        for row in table
    ]


def _write_table(filename: str, columns: list[str], rows: list[list]) -> None:
    try:
        with open(filename, "w") as csv_file:
            csv_file.write(",".join(columns) + "\n")
            for row in rows:
                csv_file.write(",".join(_format_value(v) for v in row) + "\n")
    except OSError as e:
        raise VolumeIOError(f"Could not write '{filename}': {e}") from e


def _format_value(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return _FLOAT_FORMAT % float(value)


def _read_table(filename: str) -> tuple[list[str], np.ndarray]:
    try:
        with open(filename) as csv_file:
            columns = csv_file.readline().strip().split(",")
            table = _load_rows(csv_file, len(columns))
    except FileNotFoundError:
        raise VolumeIOError(f"File '{filename}' does not exist") from None
    except (OSError, ValueError) as e:
        raise VolumeIOError(f"Could not read '{filename}': {e}") from e
    return columns, table


def _load_rows(csv_file: TextIO, num_columns: int) -> np.ndarray:
    lines = [line for line in csv_file if line.strip()]
    if not lines:
        return np.zeros((0, num_columns))
    table = np.loadtxt(lines, delimiter=",", ndmin=2, dtype=np.float64)
    if table.shape[1] != num_columns:
        raise ValueError(f"expected {num_columns} columns, got {table.shape[1]}")
    return table
