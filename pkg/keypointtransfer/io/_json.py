# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""JSON documents: training manifests, provenance records and summaries"""

from __future__ import annotations
from dataclasses import dataclass
from os.path import dirname, join, isabs, relpath
from typing import Any, Optional, Sequence
import json

import numpy as np

from ._nrrd import VolumeIOError


@dataclass(frozen=True)
class ManifestEntry:
    """
    Files of one training subject.

    Args:
        image: Path to the intensity image.
        labels: Path to the segmentation.
        keypoints: Path to the precomputed keypoint file (optional).
    """

    image: str
    labels: str
    keypoints: Optional[str] = None


def write_json(filename: str, content: Any) -> str:
    """Write the given content as (indented, key-sorted) JSON document"""
    try:
        with open(filename, "w") as json_file:
            json.dump(_to_builtin(content), json_file, indent=2, sort_keys=True)
            json_file.write("\n")
    except OSError as e:
        raise VolumeIOError(f"Could not write '{filename}': {e}") from e
    return filename


def read_json(filename: str) -> Any:
    try:
        with open(filename) as json_file:
            return json.load(json_file)
    except FileNotFoundError:
        raise VolumeIOError(f"File '{filename}' does not exist") from None
    except (OSError, json.JSONDecodeError) as e:
        raise VolumeIOError(f"Could not read '{filename}': {e}") from e


def read_manifest(filename: str) -> list[ManifestEntry]:
    """
    Read a training manifest of the form {"training": [{"image": ..., "labels": ..., "keypoints": ...}, ...]}.

    Relative paths are interpreted relative to the directory of the manifest.
    """
    content = read_json(filename)
    if not isinstance(content, dict) or not isinstance(content.get("training"), list):
        raise VolumeIOError(f"Manifest '{filename}' must contain a 'training' list")
    base = dirname(filename)
    entries = []
    for index, item in enumerate(content["training"]):
        if not isinstance(item, dict) or "image" not in item or "labels" not in item:
            raise VolumeIOError(f"Training entry {index} in '{filename}' requires the fields 'image' and 'labels'")
        unknown = set(item) - {"image", "labels", "keypoints"}
        if unknown:
            raise VolumeIOError(f"Training entry {index} in '{filename}' has unknown fields {sorted(unknown)}")
        entries.append(
            ManifestEntry(
                image=_resolve(base, item["image"]),
                labels=_resolve(base, item["labels"]),
                keypoints=_resolve(base, item["keypoints"]) if item.get("keypoints") else None,
            )
        )
    return entries


def write_manifest(filename: str, entries: Sequence[ManifestEntry]) -> str:
    """Write a training manifest with paths relative to its directory"""
    base = dirname(filename) or "."

    def _entry(entry: ManifestEntry) -> dict:
        result = {"image": relpath(entry.image, base), "labels": relpath(entry.labels, base)}
        if entry.keypoints is not None:
            result["keypoints"] = relpath(entry.keypoints, base)
        return result

    return write_json(filename, {"training": [_entry(e) for e in entries]})


def _resolve(base: str, path: str) -> str:
    return path if isabs(path) else join(base, path)


def _to_builtin(content: Any) -> Any:
    if isinstance(content, dict):
        return {str(k): _to_builtin(v) for k, v in content.items()}
    if isinstance(content, (list, tuple, set, frozenset)):
        items = sorted(content) if isinstance(content, (set, frozenset)) else content
        return [_to_builtin(v) for v in items]
    if isinstance(content, np.ndarray):
        return _to_builtin(content.tolist())
    if isinstance(content, np.integer):
        return int(content)
    if isinstance(content, np.floating):
        return float(content)
    return content
