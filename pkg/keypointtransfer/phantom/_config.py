# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Configuration of the synthetic phantom corpus"""

from __future__ import annotations
from dataclasses import dataclass

from .._common import _require
from .._numpy_utils import FloatTriple, IndexTriple

# (background, organ intensities) per modality; organs beyond the table continue linearly.
# Within the tables, organ edge contrasts (20 to 70) stay below the texture blob amplitudes.
MODALITY_INTENSITIES = {
    "ct": (100.0, (150.0, 60.0, 170.0, 40.0, 130.0, 80.0, 160.0, 50.0)),
    "mr": (60.0, (120.0, 20.0, 100.0, 30.0, 90.0, 110.0, 10.0, 130.0)),
}


class PhantomError(ValueError):
    """Exception raised for phantom configurations that cannot be realized"""

    pass


@dataclass(frozen=True)
class PhantomConfig:
    """
    Parameters of the synthetic subjects.

    Args:
        dims: Number of voxels per axis.
        num_organs: Number of organs (labels 1..num_organs).
        seed: Seed of the shared organ template; subjects additionally depend on their id.
        subject_jitter: Maximum per-organ displacement (voxels) of a subject w.r.t. the template, drawn
                        uniformly from the ball of this radius.
        global_shift_range: Maximum integer shift (voxels) of a subject along each axis.
        noise_sigma: Standard deviation of the additive Gaussian noise.
        texture_blob_count: Number of Gaussian texture blobs per organ.
        modality: Intensity preset ("ct" or "mr").
        hidden_organs: Organs rendered with background intensity and without texture.
        fov_margin: Margin (voxels) around the organ kept when cropping the field of view.
        spacing: Voxel size in mm.
        border_margin: Minimum distance (voxels) of organs from the volume boundary on top of shift and jitter.
        blob_sigma_range: Range of the principal standard deviations (voxels) of the rotated texture blobs.
        blob_amplitude_range: Range of the absolute texture blob amplitudes (sign drawn at random).
    """

    dims: IndexTriple = (96, 96, 96)
    num_organs: int = 6
    seed: int = 0
    subject_jitter: float = 3.0
    global_shift_range: float = 10.0
    noise_sigma: float = 2.0
    texture_blob_count: int = 8
    modality: str = "ct"
    hidden_organs: tuple[int, ...] = ()
    fov_margin: int = 10
    spacing: FloatTriple = (2.0, 2.0, 2.0)
    border_margin: int = 2
    blob_sigma_range: tuple[float, float] = (2.6, 3.8)
    blob_amplitude_range: tuple[float, float] = (60.0, 100.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "spacing", tuple(float(s) for s in self.spacing))
        object.__setattr__(self, "hidden_organs", tuple(int(h) for h in self.hidden_organs))
        _require(len(self.dims) == 3 and all(d > 0 for d in self.dims), f"Invalid dims {self.dims}")  # noqa: PLR2004
        _require(self.num_organs >= 1, f"num_organs must be positive, got {self.num_organs}")
        _require(0 <= self.seed < 2**64, f"seed must be an unsigned 64-bit integer, got {self.seed}")
        _require(self.subject_jitter >= 0.0, f"subject_jitter must be non-negative, got {self.subject_jitter}")
        _require(
            self.global_shift_range >= 0.0,
            f"global_shift_range must be non-negative, got {self.global_shift_range}",
        )
        _require(self.noise_sigma >= 0.0, f"noise_sigma must be non-negative, got {self.noise_sigma}")
        _require(
            self.texture_blob_count >= 0,
            f"texture_blob_count must be non-negative, got {self.texture_blob_count}",
        )
        _require(self.modality in MODALITY_INTENSITIES, f"Unknown modality '{self.modality}'")
        _require(
            all(1 <= h <= self.num_organs for h in self.hidden_organs),
            f"hidden_organs must be in 1..{self.num_organs}, got {self.hidden_organs}",
        )
        _require(self.fov_margin >= 0, f"fov_margin must be non-negative, got {self.fov_margin}")
        _require(self.border_margin >= 0, f"border_margin must be non-negative, got {self.border_margin}")
        _require(0.0 < self.blob_sigma_range[0] <= self.blob_sigma_range[1], "Invalid blob_sigma_range")
        _require(0.0 <= self.blob_amplitude_range[0] <= self.blob_amplitude_range[1], "Invalid blob_amplitude_range")

    @property
    def margin(self) -> float:
        """Return the distance from the volume boundary reserved for shifts, jitter and the border margin."""
        return self.global_shift_range + self.subject_jitter + self.border_margin

    def intensities(self) -> tuple[float, list[float]]:
        """Return the background intensity and the intensity of each organ."""
        background, table = MODALITY_INTENSITIES[self.modality]
        step = table[-1] - table[-2]
        organs = [
            table[i] if i < len(table) else table[-1] + step * (i - len(table) + 1) for i in range(self.num_organs)
        ]
        return background, organs
