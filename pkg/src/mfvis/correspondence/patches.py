# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Patch extraction and patch distances in normalized Lab space."""

from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple

import numpy as np
import numpy.typing as npt
from numpy.lib.stride_tricks import sliding_window_view

from ..configuration import parse_enum
from ..errors import ValidationError
from .config import PatchMetric

if TYPE_CHECKING:
    from ..video import Frame

NCC_EPS = 1e-12
DEGENERATE_NCC_DISTANCE = 0.5


class PatchDistance(NamedTuple):
    """The distance of two patches."""

    distance: float
    degenerate: bool
    """Set if the NCC of a zero-variance patch was requested; the distance is then 0.5."""


def extract_patch(frame: Frame, p: tuple[int, int], patch_size: int) -> npt.NDArray[np.float64]:
    """Extract the N x N Lab patch centered at a pixel.

    Positions outside the frame are replaced by the nearest edge pixel. The values are ordered
    row-major with interleaved channels, i.e. entry `(dy * N + dx) * 3 + c` holds channel `c` of
    the pixel at row offset `dy` and column offset `dx` from the top-left patch corner.

    Args:
        frame (Frame): The frame.
        p (tuple[int, int]): The center pixel `(x, y)`.
        patch_size (int): The odd patch side length N.

    Returns:
        npt.NDArray[np.float64]: The patch vector of length N * N * 3.
    """
    if patch_size < 1 or patch_size % 2 == 0:
        msg = f"patch_size must be an odd positive integer, got {patch_size}."
        raise ValidationError(msg)
    x, y = p
    r = patch_size // 2
    rows = np.clip(np.arange(y - r, y + r + 1), 0, frame.height - 1)
    cols = np.clip(np.arange(x - r, x + r + 1), 0, frame.width - 1)
    return frame.lab[np.ix_(rows, cols)].reshape(-1).copy()


def patch_stack(lab: npt.NDArray[np.float64], patch_size: int) -> npt.NDArray[np.float64]:
    """Extract the patches of all pixels of a Lab image at once.

    Args:
        lab (npt.NDArray[np.float64]): The Lab image of shape (H, W, 3).
        patch_size (int): The odd patch side length N.

    Returns:
        npt.NDArray[np.float64]: The patches of shape (H, W, N * N * 3), ordered as in :func:`extract_patch`.
    """
    height, width, _ = lab.shape
    r = patch_size // 2
    padded = np.pad(lab, ((r, r), (r, r), (0, 0)), mode="edge")
    windows = sliding_window_view(padded, (patch_size, patch_size), axis=(0, 1))
    return np.ascontiguousarray(windows.transpose(0, 1, 3, 4, 2)).reshape(height, width, -1)


def metric_distances(
    a: npt.NDArray[np.float64], b: npt.NDArray[np.float64], metric: PatchMetric
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.bool_]]:
    """Compute patch distances along the last axis.

    Args:
        a (npt.NDArray[np.float64]): The first patches.
        b (npt.NDArray[np.float64]): The second patches, broadcastable against `a`.
        metric (PatchMetric): The distance to use.

    Returns:
        tuple[npt.NDArray[np.float64], npt.NDArray[np.bool_]]: The distances and the degenerate-NCC indicators.
    """
    if metric is PatchMetric.L2:
        distance = np.sqrt(np.mean((a - b) ** 2, axis=-1))
        return distance, np.zeros(distance.shape, dtype=bool)
    if metric is PatchMetric.L1:
        distance = np.mean(np.abs(a - b), axis=-1)
        return distance, np.zeros(distance.shape, dtype=bool)
    a_centered = a - a.mean(axis=-1, keepdims=True)
    b_centered = b - b.mean(axis=-1, keepdims=True)
    numerator = np.sum(a_centered * b_centered, axis=-1)
    denominator = np.sqrt(np.sum(a_centered**2, axis=-1) * np.sum(b_centered**2, axis=-1))
    degenerate = denominator <= NCC_EPS
    ncc = np.clip(numerator / np.where(degenerate, 1.0, denominator), -1.0, 1.0)
    return np.where(degenerate, DEGENERATE_NCC_DISTANCE, (1.0 - ncc) / 2.0), degenerate


def patch_distance(a: npt.ArrayLike, b: npt.ArrayLike, metric: PatchMetric | str = PatchMetric.L2) -> PatchDistance:
    """Compute the distance of two patches.

    All metrics are oriented so that smaller values mean more similar patches.

    Args:
        a (npt.ArrayLike): The first patch vector.
        b (npt.ArrayLike): The second patch vector.
        metric (PatchMetric | str, optional): The distance to use. Defaults to L2.

    Returns:
        PatchDistance: The distance and whether it is a degenerate NCC value.

    Raises:
        ValidationError: If the patches differ in length.
    """
    a_vec = np.asarray(a, dtype=np.float64).reshape(-1)
    b_vec = np.asarray(b, dtype=np.float64).reshape(-1)
    if a_vec.shape != b_vec.shape or a_vec.size == 0:
        msg = f"Patches must be non-empty and of equal length, got {a_vec.size} and {b_vec.size}."
        raise ValidationError(msg)
    distance, degenerate = metric_distances(a_vec, b_vec, parse_enum(PatchMetric, metric, "patch metric"))
    return PatchDistance(float(distance), bool(degenerate))
