# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Exhaustive per-pixel reference implementation of the patch search."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from ..errors import DimensionMismatchError
from .config import PatchConfig, PatchMetric
from .matching import MatchSet

if TYPE_CHECKING:
    from ..video import Frame


def _patch(lab: list[list[list[float]]], x: int, y: int, patch_size: int) -> list[float]:
    height, width = len(lab), len(lab[0])
    r = patch_size // 2
    values = []
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            row = lab[min(max(y + dy, 0), height - 1)]
            values.extend(row[min(max(x + dx, 0), width - 1)])
    return values


def _distance(a: list[float], b: list[float], metric: PatchMetric) -> float:
    n = len(a)
    if metric is PatchMetric.L2:
        return math.sqrt(sum((u - v) ** 2 for u, v in zip(a, b)) / n)
    if metric is PatchMetric.L1:
        return sum(abs(u - v) for u, v in zip(a, b)) / n
    mean_a, mean_b = sum(a) / n, sum(b) / n
    cross = sum((u - mean_a) * (v - mean_b) for u, v in zip(a, b))
    norm = math.sqrt(sum((u - mean_a) ** 2 for u in a) * sum((v - mean_b) ** 2 for v in b))
    if norm <= 1e-12:
        return 0.5
    return (1.0 - min(1.0, max(-1.0, cross / norm))) / 2.0


def find_matches_bruteforce(frame_t: Frame, frame_that: Frame, config: PatchConfig | None = None) -> MatchSet:
    """Find matches by enumerating every candidate of every pixel.

    Produces the same result as :func:`~mfvis.correspondence.matching.find_matches`, one pixel and one
    candidate at a time. Intended as a test oracle for small frames.

    Args:
        frame_t (Frame): The source frame.
        frame_that (Frame): The target frame.
        config (PatchConfig | None, optional): The search parameters. Defaults to :class:`PatchConfig`.

    Returns:
        MatchSet: The matches of every source pixel, with source index 0 and target index 1.
    """
    config = config or PatchConfig()
    if (frame_t.height, frame_t.width) != (frame_that.height, frame_that.width):
        msg = "Matched frames must have the same size."
        raise DimensionMismatchError(msg)
    height, width, k_max = frame_t.height, frame_t.width, config.max_matches
    source_lab, target_lab = frame_t.lab.tolist(), frame_that.lab.tolist()
    positions = np.full((height, width, k_max, 2), -1, dtype=np.int64)
    distances = np.full((height, width, k_max), np.inf)
    counts = np.zeros((height, width), dtype=np.int64)

    for y in range(height):
        for x in range(width):
            patch = _patch(source_lab, x, y, config.patch_size)
            candidates = []
            rank = 0
            for i in range(-config.radius, config.radius + 1):
                for j in range(-config.radius, config.radius + 1):
                    cx, cy = x + j * config.dilation, y + i * config.dilation
                    rank += 1
                    if not (0 <= cx < width and 0 <= cy < height):
                        continue
                    d = _distance(patch, _patch(target_lab, cx, cy, config.patch_size), config.metric)
                    if d < config.distance_threshold:
                        candidates.append((d, rank, cx, cy))
            candidates.sort()
            for k, (d, _, cx, cy) in enumerate(candidates[:k_max]):
                positions[y, x, k] = (cx, cy)
                distances[y, x, k] = d
            counts[y, x] = min(len(candidates), k_max)

    return MatchSet(source_frame=0, target_frame=1, positions=positions, distances=distances, counts=counts)
