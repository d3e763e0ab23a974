# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

from ._main import main

__all__ = [
    "main",
]
