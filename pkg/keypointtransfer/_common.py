# SPDX-FileCopyrightText: 2024 The keypointtransfer contributors
# SPDX-License-Identifier: GPL-3.0-or-later

"""Common functions and types"""

from __future__ import annotations
from typing import Callable, TypeVar, Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor
from time import perf_counter
from functools import wraps


T = TypeVar("T")
R = TypeVar("R")


def _measure_time(action: Callable[..., T]) -> Callable[..., tuple[float, T]]:
    @wraps(action)
    def _wrapper_measure_time(*args, **kwargs) -> tuple[float, T]:
        before = perf_counter()
        result = action(*args, **kwargs)
        after = perf_counter()
        return (after - before), result

    return _wrapper_measure_time


def ordered_map(action: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """
    Apply the action to all items and return the results in input order.

    Args:
        action: The function to apply to each item.
        items: The items to process.
        threads: Maximum number of worker threads (1 processes the items sequentially).
    """
    if threads < 1:
        raise ValueError(f"Number of threads must be positive, got {threads}")
    if threads == 1:
        return [action(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(action, items))


def chunked(items: list[T], size: int) -> Iterator[list[T]]:
    """Yield consecutive chunks of at most `size` items"""
    for begin in range(0, len(items), max(size, 1)):
        yield items[begin : begin + max(size, 1)]


class ConfigError(ValueError):
    """Exception raised for invalid or unknown configuration values"""

    pass


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)
