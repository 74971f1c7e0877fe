# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Bounded worker pool used for independent per-frame-pair computations."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING, TypeVar

from .errors import ValidationError

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable

THREADS_ENV = "MFVIS_THREADS"

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    """Get the maximal number of worker threads.

    The value of the environment variable `MFVIS_THREADS` is used if set, the CPU count otherwise.

    Returns:
        int: The number of worker threads, at least 1.

    Raises:
        ValidationError: If `MFVIS_THREADS` is not a positive integer.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or not raw.strip():
        return max(1, os.cpu_count() or 1)
    try:
        threads = int(raw)
    except ValueError:
        threads = 0
    if threads < 1:
        msg = f"{THREADS_ENV} must be a positive integer, got '{raw}'."
        raise ValidationError(msg)
    return threads


def ordered_map(function: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Apply a function to all items, possibly in parallel, preserving the input order.

    Args:
        function (Callable[[T], R]): The function to apply. It must not mutate shared state.
        items (Iterable[T]): The inputs.

    Returns:
        list[R]: The results, in input order.
    """
    work = list(items)
    threads = min(thread_count(), len(work))
    if threads <= 1:
        return [function(item) for item in work]
    logger.debug("Running %d tasks on %d threads", len(work), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(function, work))
