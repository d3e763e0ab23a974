# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Version information for keypointtransfer"""
from importlib import metadata

try:
    __version__ = metadata.version("keypointtransfer")
except Exception:
    __version__ = "unknown"
