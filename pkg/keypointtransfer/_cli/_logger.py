# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Logger for output during CLI runs"""

from __future__ import annotations
from typing import TextIO
from textwrap import indent
import sys


class CLILogger:
    """
    Writes messages up to a verbosity level into a stream.

    Args:
        verbosity_level: Messages with a higher level are suppressed (0 silences the logger).
        output_stream: The stream to write into.
        line_prefix: Prefix prepended to every line of a message.
    """

    def __init__(self, verbosity_level: int = 2, output_stream: TextIO = sys.stdout, line_prefix: str = "") -> None:
        self._verbosity = verbosity_level
        self._output_stream = output_stream
        self._line_prefix = line_prefix

    @property
    def verbosity_level(self) -> int:
        return self._verbosity

    @property
    def output_stream(self) -> TextIO:
        return self._output_stream

    def log(self, message: str, verbosity_level: int = 1) -> None:
        if self._verbosity > 0 and self._verbosity >= verbosity_level:
            self._output_stream.write(indent(message, self._line_prefix))

    def with_verbosity(self, verbosity_level: int) -> CLILogger:
        return CLILogger(verbosity_level, self._output_stream, self._line_prefix)

    def with_prefix(self, prefix: str) -> CLILogger:
        return CLILogger(self._verbosity, self._output_stream, self._line_prefix + prefix)
