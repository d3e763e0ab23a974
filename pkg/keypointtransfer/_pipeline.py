# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Composition of the stages into the full segmentation pipeline"""

from __future__ import annotations
from dataclasses import dataclass, field, fields, asdict
from typing import Any, Optional, Sequence, Type, TypeVar

from ._common import ConfigError, _measure_time
from ._format import as_seconds, highlighted
from .descriptor import DescriptorConfig, DescribedKeypoint, assign_labels, describe_keypoints
from .io import read_json
from .matching import ImageMatches, MatchingConfig, match_all
from .phantom import PhantomConfig
from .protocols import Logger, NullLogger
from .scalespace import ScaleSpaceConfig, detect_keypoints
from .transfer import SegmentationResult, TrainingSubject, TransferConfig, transfer_segmentation
from .volume import LabelVolume, ScalarVolume, check_same_geometry
from .voting import LabelPosterior, VotingConfig, vote_keypoints

STAGES = ("extraction", "matching", "voting", "transfer")

C = TypeVar("C")


class PipelineError(RuntimeError):
    """Exception raised when a pipeline stage fails"""

    pass


class EmptyTrainingSetError(ValueError):
    """Exception raised when segmenting without any training subject"""

    pass


@dataclass(frozen=True)
class PipelineConfig:
    """The configuration of all stages; an empty JSON document yields the defaults."""

    scale_space: ScaleSpaceConfig = field(default_factory=ScaleSpaceConfig)
    descriptor: DescriptorConfig = field(default_factory=DescriptorConfig)
    matching: MatchingConfig = field(default_factory=MatchingConfig)
    voting: VotingConfig = field(default_factory=VotingConfig)
    transfer: TransferConfig = field(default_factory=TransferConfig)
    phantom: PhantomConfig = field(default_factory=PhantomConfig)
    threads: int = 1

    def __post_init__(self) -> None:
        if self.threads < 1:
            raise ConfigError(f"threads must be positive, got {self.threads}")

    @classmethod
    def from_dict(cls, content: dict[str, Any]) -> PipelineConfig:
        """Create a configuration from a (JSON-like) dictionary, rejecting unknown keys at any level"""
        if not isinstance(content, dict):
            raise ConfigError("The configuration must be a JSON object")
        _check_keys("configuration", content, {f.name for f in fields(cls)})
        sections = {
            f.name: _make_section(f.name, _SECTION_TYPES[f.name], content[f.name])
            for f in fields(cls)
            if f.name in content and f.name in _SECTION_TYPES
        }
        threads = content.get("threads", 1)
        if not isinstance(threads, int) or isinstance(threads, bool):
            raise ConfigError(f"threads must be an integer, got {threads!r}")
        return cls(**sections, threads=threads)

    @classmethod
    def from_json(cls, filename: str) -> PipelineConfig:
        return cls.from_dict(read_json(filename))

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)


_SECTION_TYPES: dict[str, type] = {
    "scale_space": ScaleSpaceConfig,
    "descriptor": DescriptorConfig,
    "matching": MatchingConfig,
    "voting": VotingConfig,
    "transfer": TransferConfig,
    "phantom": PhantomConfig,
}


def _check_keys(where: str, content: dict, allowed: set[str]) -> None:
    unknown = set(content) - allowed
    if unknown:
        raise ConfigError(f"Unknown keys in {where}: {', '.join(sorted(unknown))}")


def _make_section(name: str, section_type: Type[C], content: Any) -> C:
    if not isinstance(content, dict):
        raise ConfigError(f"Section '{name}' must be a JSON object")
    _check_keys(f"section '{name}'", content, {f.name for f in fields(section_type)})  # type: ignore[arg-type]
    values = {key: _convert_value(key, value) for key, value in content.items()}
    try:
        return section_type(**values)
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"Invalid values in section '{name}': {e}") from e


def _convert_value(key: str, value: Any) -> Any:
    try:
        if key == "nu":
            return {int(label): float(nu) for label, nu in value.items()}
        if key == "cross_label":
            return None if value is None else {int(label): frozenset(int(v) for v in vs) for label, vs in value.items()}
    except (AttributeError, TypeError, ValueError) as e:
        raise ConfigError(f"Invalid value for '{key}': {value!r}") from e
    if isinstance(value, list):
        return tuple(value)
    return value


@dataclass
class PipelineResult:
    """
    Output of a segmentation run.

    Args:
        segmentation: The fused segmentation and its score maps.
        test_keypoints: The described keypoints of the test image.
        posteriors: The vote of each test keypoint.
        image_matches: The matches per training image.
        timings: Wall-clock time per stage in seconds.
    """

    segmentation: SegmentationResult
    test_keypoints: list[DescribedKeypoint]
    posteriors: list[LabelPosterior]
    image_matches: list[ImageMatches]
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def labels(self) -> LabelVolume:
        return self.segmentation.labels


def extract_keypoints(
    volume: ScalarVolume,
    config: PipelineConfig | None = None,
    labels: Optional[LabelVolume] = None,
    threads: int | None = None,
) -> list[DescribedKeypoint]:
    """
    Detect and describe the keypoints of an image; if a segmentation is given, label them and drop background ones.
    """
    config = config or PipelineConfig()
    if labels is not None:
        check_same_geometry(volume, labels, "image and segmentation")
    keypoints = detect_keypoints(volume, config.scale_space)
    described = describe_keypoints(volume, keypoints, config.descriptor, threads or config.threads)
    return assign_labels(described, labels) if labels is not None else described


def prepare_training_subject(
    image: ScalarVolume,
    labels: LabelVolume,
    config: PipelineConfig | None = None,
    keypoints: Optional[list[DescribedKeypoint]] = None,
) -> TrainingSubject:
    """Create a training subject, extracting its labeled keypoints unless given"""
    if keypoints is None:
        keypoints = extract_keypoints(image, config, labels)
    return TrainingSubject(image=image, labels=labels, keypoints=keypoints)


def segment(
    test_image: ScalarVolume,
    training: Sequence[TrainingSubject],
    config: PipelineConfig | None = None,
    test_keypoints: Optional[list[DescribedKeypoint]] = None,
    logger: Logger = NullLogger(),
) -> PipelineResult:
    """
    Segment the test image by transferring the training segmentations along keypoint matches.

    Args:
        test_image: The image to segment.
        training: The training subjects with their labeled keypoints.
        config: The pipeline configuration.
        test_keypoints: Precomputed (unlabeled) test keypoints; extracted if not given.
        logger: Receives progress messages.
    """
    if not training:
        raise EmptyTrainingSetError("At least one training subject is required")
    config = config or PipelineConfig()
    threads = config.threads
    num_labels = max(subject.labels.num_labels for subject in training)
    timings = {stage: 0.0 for stage in STAGES}

    if test_keypoints is None:
        timings["extraction"], test_keypoints = _measure_time(extract_keypoints)(test_image, config)
    logger.log(f"Test image: {highlighted(str(len(test_keypoints)))} keypoints\n", verbosity_level=2)

    timings["matching"], image_matches = _measure_time(match_all)(
        test_keypoints, [s.keypoints for s in training], config.matching, threads
    )
    for image in image_matches:
        logger.log(
            f"Training image {image.image_index}: {len(image.matches)} matches "
            f"({image.num_stage1} in first stage), translation {image.translation}\n",
            verbosity_level=3,
        )

    train_labels = [s.keypoint_labels() for s in training]
    timings["voting"], posteriors = _measure_time(vote_keypoints)(
        len(test_keypoints), image_matches, train_labels, num_labels, config.voting, threads
    )
    num_voted = sum(1 for p in posteriors if p.voted_label is not None)
    logger.log(f"Voted labels for {num_voted} of {len(posteriors)} keypoints\n", verbosity_level=2)

    try:
        timings["transfer"], segmentation = _measure_time(transfer_segmentation)(
            test_image, posteriors, training, image_matches, config.transfer, num_labels, threads
        )
    except ValueError as e:
        raise PipelineError(f"Segmentation transfer failed: {e}") from e

    for stage in STAGES:
        logger.log(f"{stage}: {as_seconds(timings[stage])}\n", verbosity_level=2)
    return PipelineResult(
        segmentation=segmentation,
        test_keypoints=test_keypoints,
        posteriors=posteriors,
        image_matches=image_matches,
        timings=timings,
    )
