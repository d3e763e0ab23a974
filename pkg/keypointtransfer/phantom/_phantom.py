# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Synthetic labeled subjects made of textured ellipsoidal organs"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
from scipy.spatial.transform import Rotation

from .._numpy_utils import Array, ArrayLike, IndexTriple, as_index_triple
from ..volume import LabelVolume, ScalarVolume, crop
from ._config import PhantomConfig, PhantomError

_BLOB_REGION = 0.8
_BLOB_SEPARATION_FACTOR = 3.0
_BLOB_MAX_ATTEMPTS = 200
_TEMPLATE_OFFSET = 0.02
_SEMI_AXIS_FRACTION = 0.38
_SEMI_AXIS_SPREAD = (0.9, 1.0)


@dataclass
class Subject:
    """
    A synthetic subject.

    Args:
        image: The intensity image.
        labels: The exact organ supports.
        provenance: Seed, applied shifts and organ geometry the subject was generated from.
    """

    image: ScalarVolume
    labels: LabelVolume
    provenance: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class _Blob:
    offset: Array
    scales: Array
    rotation: Array
    amplitude: float

    @property
    def sigma(self) -> float:
        return float(np.mean(self.scales))

    @property
    def precision(self) -> Array:
        """Inverse covariance of the (rotated, anisotropic) Gaussian."""
        return self.rotation @ np.diag(1.0 / self.scales**2) @ self.rotation.T


@dataclass(frozen=True)
class _OrganTemplate:
    label: int
    center: Array
    semi_axes: Array
    intensity: float
    blobs: list[_Blob]


def organ_grid(num_organs: int) -> IndexTriple:
    """Return the number of template cells per axis used to place the given number of organs"""
    nx = int(np.ceil(num_organs ** (1.0 / 3.0) - 1e-9))
    ny = int(np.ceil(np.sqrt(num_organs / nx) - 1e-9))
    nz = int(np.ceil(num_organs / (nx * ny)))
    return nx, ny, nz


def _make_template(config: PhantomConfig) -> list[_OrganTemplate]:
    rng = np.random.default_rng(config.seed)
    usable = np.asarray(config.dims, dtype=np.float64) - 2.0 * config.margin
    if np.any(usable <= 0.0):
        raise PhantomError(f"Volume of size {config.dims} too small for a margin of {config.margin} voxels")
    grid = np.asarray(organ_grid(config.num_organs))
    cell = usable / grid
    _, intensities = config.intensities()

    organs = []
    for index in range(config.num_organs):
        cell_index = np.array(np.unravel_index(index, tuple(grid)), dtype=np.float64)
        offset = rng.uniform(-_TEMPLATE_OFFSET, _TEMPLATE_OFFSET, 3) * cell
        center = config.margin + (cell_index + 0.5) * cell + offset
        semi_axes = _SEMI_AXIS_FRACTION * cell * rng.uniform(*_SEMI_AXIS_SPREAD, 3)
        organs.append(
            _OrganTemplate(
                label=index + 1,
                center=center,
                semi_axes=semi_axes,
                intensity=intensities[index],
                blobs=_make_blobs(rng, semi_axes, config),
            )
        )
    return organs


def _make_blobs(rng: np.random.Generator, semi_axes: Array, config: PhantomConfig) -> list[_Blob]:
    """
    Draw rotated anisotropic Gaussian blobs inside an organ.

    Blob centers are rejection-sampled within the inner part of the ellipsoid such that any two blobs are
    at least `_BLOB_SEPARATION_FACTOR` times the larger of their mean scales apart. Blobs that do not
    find a free spot are skipped.
    """
    blobs: list[_Blob] = []
    for _ in range(config.texture_blob_count):
        scales = rng.uniform(*config.blob_sigma_range, 3)
        rotation = Rotation.random(None, rng).as_matrix()
        amplitude = float(rng.uniform(*config.blob_amplitude_range)) * (1.0 if rng.uniform() < 0.5 else -1.0)
        sigma = float(np.mean(scales))
        for _ in range(_BLOB_MAX_ATTEMPTS):
            direction = rng.uniform(-1.0, 1.0, 3)
            if np.linalg.norm(direction) > 1.0:
                continue
            offset = direction * _BLOB_REGION * semi_axes
            if all(
                np.linalg.norm(offset - b.offset) >= _BLOB_SEPARATION_FACTOR * max(sigma, b.sigma) for b in blobs
            ):
                blobs.append(_Blob(offset=offset, scales=scales, rotation=rotation, amplitude=amplitude))
                break
    return blobs


def ellipsoid_mask(dims: IndexTriple, center: ArrayLike, semi_axes: ArrayLike) -> Array:
    """Return the voxels (by index) whose centers lie inside the given ellipsoid"""
    x, y, z = np.ogrid[0 : dims[0], 0 : dims[1], 0 : dims[2]]
    c, a = np.asarray(center, dtype=np.float64), np.asarray(semi_axes, dtype=np.float64)
    return ((x - c[0]) / a[0]) ** 2 + ((y - c[1]) / a[1]) ** 2 + ((z - c[2]) / a[2]) ** 2 <= 1.0


def _ball_samples(rng: np.random.Generator, count: int, radius: float) -> Array:
    directions = rng.normal(size=(count, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return directions * radius * np.cbrt(rng.uniform(size=(count, 1)))


def _organ_texture(points: Array, center: Array, organ: _OrganTemplate) -> Array:
    values = np.full(len(points), organ.intensity)
    for blob in organ.blobs:
        offsets = points - (center + blob.offset)
        squared = np.einsum("ni,ij,nj->n", offsets, blob.precision, offsets)
        values += blob.amplitude * np.exp(-0.5 * squared)
    return values


def generate_subject(
    config: PhantomConfig,
    subject_id: int,
    global_shift: Optional[ArrayLike] = None,
) -> Subject:
    """
    Generate the subject with the given id.

    All subjects of a configuration share the organ template drawn from `config.seed`. Each subject
    displaces every organ by a random jitter (uniform in a ball of radius `config.subject_jitter`),
    shifts everything by a random integer translation and adds Gaussian noise, all drawn from
    (seed, subject_id).

    Args:
        config: The phantom parameters.
        subject_id: The (non-negative) subject id.
        global_shift: Integer shift overriding the random one (the random draws happen regardless).
    """
    if subject_id < 0:
        raise PhantomError(f"Subject ids must be non-negative, got {subject_id}")
    template = _make_template(config)
    rng = np.random.default_rng([config.seed, subject_id])
    jitter = _ball_samples(rng, config.num_organs, config.subject_jitter)
    shift_range = int(np.floor(config.global_shift_range))
    drawn_shift = rng.integers(-shift_range, shift_range + 1, 3)
    noise = rng.normal(0.0, config.noise_sigma, config.dims) if config.noise_sigma > 0.0 else None
    shift = np.asarray(as_index_triple(global_shift) if global_shift is not None else drawn_shift, dtype=np.float64)

    background, _ = config.intensities()
    image = np.full(config.dims, background, dtype=np.float64)
    labels = np.zeros(config.dims, dtype=np.uint8 if config.num_organs < 256 else np.uint16)  # noqa: PLR2004
    organs = []
    for organ, displacement in zip(template, jitter):
        center = organ.center + displacement + shift
        mask = ellipsoid_mask(config.dims, center, organ.semi_axes)
        if not mask.any():
            raise PhantomError(f"Organ {organ.label} does not cover any voxel")
        if np.any(labels[mask] != 0):
            raise PhantomError(f"Organ {organ.label} overlaps with another organ")
        _check_inside(config, organ.label, center, organ.semi_axes)
        labels[mask] = organ.label

        hidden = organ.label in config.hidden_organs
        if not hidden:
            voxels = np.nonzero(mask)
            image[voxels] = _organ_texture(np.stack(voxels, axis=1).astype(np.float64), center, organ)
        organs.append(
            {
                "label": organ.label,
                "center": center.tolist(),
                "semi_axes": organ.semi_axes.tolist(),
                "intensity": background if hidden else organ.intensity,
                "hidden": hidden,
                "num_blobs": 0 if hidden else len(organ.blobs),
            }
        )

    if noise is not None:
        image += noise
    provenance = {
        "seed": config.seed,
        "subject_id": subject_id,
        "modality": config.modality,
        "global_shift": [int(s) for s in shift],
        "jitter": jitter.tolist(),
        "noise_sigma": config.noise_sigma,
        "dims": list(config.dims),
        "organs": organs,
    }
    return Subject(
        image=ScalarVolume(image.astype(np.float32), spacing=config.spacing),
        labels=LabelVolume(labels, num_labels=config.num_organs, spacing=config.spacing),
        provenance=provenance,
    )


def _check_inside(config: PhantomConfig, label: int, center: Array, semi_axes: Array) -> None:
    lower, upper = center - semi_axes, center + semi_axes
    if np.any(lower < 0.0) or np.any(upper > np.asarray(config.dims) - 1):
        raise PhantomError(f"Organ {label} extends beyond the volume boundary")


def crop_fov(subject: Subject, organ: int, margin: int = 10) -> Subject:
    """
    Crop the subject to the bounding box of an organ, dilated by the given margin (and clipped to the volume).

    Raises:
        PhantomError: If the organ is absent from the subject's labels.
    """
    box = subject.labels.bounding_box(organ)
    if box is None:
        raise PhantomError(f"Cannot crop around organ {organ}: it is absent")
    lower = tuple(max(lo - margin, 0) for lo in box[0])
    upper = tuple(min(hi + margin, d) for hi, d in zip(box[1], subject.labels.dims))
    provenance = dict(subject.provenance)
    provenance["crop"] = {"organ": organ, "margin": margin, "lower": list(lower), "upper": list(upper)}
    return Subject(
        image=crop(subject.image, lower, upper),
        labels=crop(subject.labels, lower, upper),
        provenance=provenance,
    )
