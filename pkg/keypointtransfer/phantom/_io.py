# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Storage of subjects as NRRD image/label pairs with a provenance record"""

from __future__ import annotations
from os.path import join

from ..io import read_json, read_label_volume, read_scalar_volume, write_json, write_volume
from ._phantom import Subject


def subject_files(directory: str, name: str) -> tuple[str, str, str]:
    """Return the image, label and provenance file names of a subject"""
    return (
        join(directory, f"{name}_image.nrrd"),
        join(directory, f"{name}_labels.nrrd"),
        join(directory, f"{name}_provenance.json"),
    )


def write_subject(subject: Subject, directory: str, name: str) -> tuple[str, str, str]:
    """Write the subject into the given directory and return the names of the written files"""
    image_file, labels_file, provenance_file = subject_files(directory, name)
    write_volume(subject.image, image_file)
    write_volume(subject.labels, labels_file)
    write_json(provenance_file, subject.provenance)
    return image_file, labels_file, provenance_file


def read_subject(directory: str, name: str) -> Subject:
    image_file, labels_file, provenance_file = subject_files(directory, name)
    return Subject(
        image=read_scalar_volume(image_file),
        labels=read_label_volume(labels_file),
        provenance=read_json(provenance_file),
    )
