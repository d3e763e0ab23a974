# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Logging output formatting helpers"""

from __future__ import annotations
from enum import Enum

import colorama

colorama.init()


class TextColor(Enum):
    red = "RED"
    green = "GREEN"
    yellow = "YELLOW"
    cyan = "CYAN"

    def __str__(self) -> str:
        return str(self.value)


class TextStyle(Enum):
    dim = "DIM"
    normal = "NORMAL"
    bright = "BRIGHT"

    def __str__(self) -> str:
        return str(self.value)


_COLOR_CODES = {color: getattr(colorama.Fore, color.value) for color in TextColor}
_STYLE_CODES = {style: getattr(colorama.Style, style.value) for style in TextStyle}
_RESET_CODE = colorama.Style.RESET_ALL


def make_colored(text: str, color: TextColor | None = None, style: TextStyle | None = None) -> str:
    if color is None and style is None:
        return text
    prefix = (_STYLE_CODES[style] if style is not None else "") + (_COLOR_CODES[color] if color is not None else "")
    return f"{prefix}{text}{_RESET_CODE}"


def remove_color_codes(text: str) -> str:
    for code in list(_COLOR_CODES.values()) + list(_STYLE_CODES.values()) + [_RESET_CODE]:
        text = text.replace(code, "")
    return text


def as_warning(text: str) -> str:
    return make_colored(text, color=TextColor.yellow)


def as_error(text: str) -> str:
    return make_colored(text, color=TextColor.red)


def as_success(text: str) -> str:
    return make_colored(text, color=TextColor.green)


def as_stage(text: str) -> str:
    return make_colored(text, color=TextColor.cyan, style=TextStyle.bright)


def highlighted(text: str) -> str:
    return make_colored(text, style=TextStyle.bright)


def as_seconds(seconds: float) -> str:
    return f"{seconds:.2f}s"


def as_dice(value: float | None, good_threshold: float = 0.75) -> str:
    """Format a Dice value, colored by whether it reaches the given threshold"""
    if value is None:
        return as_warning("n/a")
    text = f"{value:.3f}"
    return as_success(text) if value >= good_threshold else as_warning(text)
