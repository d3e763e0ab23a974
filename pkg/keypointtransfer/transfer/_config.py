# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Configuration of the segmentation transfer"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .._common import _require

TRANSFER_MODALITIES = ("ct", "mr")


@dataclass(frozen=True)
class TransferConfig:
    """
    Parameters of the segmentation transfer.

    Args:
        default_nu: Intensity noise scale used for all labels without an override.
        nu: Per-label overrides of the intensity noise scale.
        background_threshold: Voxels whose best normalized score is below this value become background.
        cross_label: Map from keypoint label to the set of labels whose masks it transfers.
                     Labels missing from the map (or all labels, if no map is given) transfer themselves.
        modality: Optional preset; "ct" assigns `high_noise_nu` to the `high_noise_labels`.
        high_noise_labels: Labels of structures with large intensity variation (lungs, trachea).
        high_noise_nu: The noise scale used for the high-noise labels under the "ct" preset.
    """

    default_nu: float = 50.0
    nu: Mapping[int, float] = field(default_factory=dict)
    background_threshold: float = 0.15
    cross_label: Optional[Mapping[int, frozenset[int]]] = None
    modality: Optional[str] = None
    high_noise_labels: tuple[int, ...] = ()
    high_noise_nu: float = 300.0

    def __post_init__(self) -> None:
        _require(self.default_nu > 0.0, f"default_nu must be positive, got {self.default_nu}")
        _require(all(v > 0.0 for v in self.nu.values()), f"All nu values must be positive, got {dict(self.nu)}")
        _require(
            0.0 <= self.background_threshold <= 1.0,
            f"background_threshold must be in [0, 1], got {self.background_threshold}",
        )
        _require(
            self.modality is None or self.modality in TRANSFER_MODALITIES,
            f"modality must be one of {TRANSFER_MODALITIES}, got '{self.modality}'",
        )
        _require(self.high_noise_nu > 0.0, f"high_noise_nu must be positive, got {self.high_noise_nu}")
        if self.cross_label is not None:
            object.__setattr__(
                self, "cross_label", {int(k): frozenset(int(v) for v in vs) for k, vs in self.cross_label.items()}
            )

    def nu_for(self, label: int) -> float:
        """Return the intensity noise scale for the given label"""
        if label in self.nu:
            return float(self.nu[label])
        if self.modality == "ct" and label in self.high_noise_labels:
            return self.high_noise_nu
        return self.default_nu

    def transferable_labels(self, keypoint_label: int) -> list[int]:
        """Return the (sorted) labels whose masks a keypoint of the given label transfers"""
        if self.cross_label is None:
            return [keypoint_label]
        return sorted(self.cross_label.get(keypoint_label, frozenset({keypoint_label})))
