# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Matching costs between predicted mask sequences and ground-truth box sequences."""

from __future__ import annotations

import enum
import logging
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from ..configuration import parse_enum
from ..errors import DimensionMismatchError, ValidationError
from ..losses import dice_loss
from .assignment import CostMatrix
from .box_masks import DEFAULT_BIN_THRESHOLD, BoxMaskSequence, mask_to_boxmask

if TYPE_CHECKING:
    from ..video import Box

logger = logging.getLogger(__name__)

DEFAULT_POINTS = 4096


class MatchingStrategy(str, enum.Enum):
    """How the cost between a predicted instance sequence and a ground-truth sequence is computed."""

    SPATIO_TEMPORAL = "spatio_temporal"
    """Dice loss of sampled box-mask values over the whole sequence."""
    FRAMEWISE = "framewise"
    """L1 plus generalized-IoU loss of the boxes, averaged over frames."""


def sample_points(
    seq_a: BoxMaskSequence,
    seq_b: BoxMaskSequence,
    n_points: int = DEFAULT_POINTS,
    seed: int = 0,
    *,
    exhaustive: bool = False,
    inside_boxes: bool = False,
) -> npt.NDArray[np.int64]:
    """Sample pixel coordinates shared by two box-mask sequences.

    Args:
        seq_a (BoxMaskSequence): The first sequence.
        seq_b (BoxMaskSequence): The second sequence.
        n_points (int, optional): The number of uniform samples per frame. Defaults to 4096.
        seed (int, optional): The sampling seed.
        exhaustive (bool, optional): Use every pixel exactly once instead of sampling.
        inside_boxes (bool, optional): Sample inside the box enclosing both sequences' boxes of each frame.

    Returns:
        npt.NDArray[np.int64]: The `(y, x)` coordinates of shape (T, n, 2).

    Raises:
        DimensionMismatchError: If the sequences differ in shape.
        ValidationError: If `n_points` is not positive.
    """
    if seq_a.shape != seq_b.shape:
        msg = f"Box mask sequences differ in shape: {seq_a.shape} and {seq_b.shape}."
        raise DimensionMismatchError(msg)
    n_frames, height, width = seq_a.shape
    if exhaustive:
        ys, xs = np.mgrid[0:height, 0:width]
        grid = np.stack([ys.ravel(), xs.ravel()], axis=1)
        return np.broadcast_to(grid, (n_frames, *grid.shape)).copy()
    if n_points < 1:
        msg = f"n_points must be positive, got {n_points}."
        raise ValidationError(msg)

    rng = np.random.default_rng(seed)
    points = np.empty((n_frames, n_points, 2), dtype=np.int64)
    boxes_a, boxes_b = seq_a.boxes(), seq_b.boxes()
    for t in range(n_frames):
        x_min, y_min, x_max, y_max = 0, 0, width, height
        if inside_boxes:
            present = [box for box in (boxes_a[t], boxes_b[t]) if box is not None]
            if present:
                x_min, y_min = min(b[0] for b in present), min(b[1] for b in present)
                x_max, y_max = max(b[2] for b in present), max(b[3] for b in present)
        points[t, :, 0] = rng.integers(y_min, y_max, size=n_points)
        points[t, :, 1] = rng.integers(x_min, x_max, size=n_points)
    return points


def st_boxmask_cost(
    pred: BoxMaskSequence,
    gt: BoxMaskSequence,
    n_points: int = DEFAULT_POINTS,
    seed: int = 0,
    *,
    exhaustive: bool = False,
    inside_boxes: bool = False,
) -> float:
    """Compute the spatio-temporal box-mask cost.

    Both sequences are read at the same sampled points and one dice loss is computed over the
    samples of all frames together.

    Args:
        pred (BoxMaskSequence): The predicted box masks.
        gt (BoxMaskSequence): The ground-truth box masks.
        n_points (int, optional): The number of samples per frame. Defaults to 4096.
        seed (int, optional): The sampling seed.
        exhaustive (bool, optional): Use every pixel instead of sampling.
        inside_boxes (bool, optional): Sample inside the boxes only.

    Returns:
        float: The cost in [0, 1].
    """
    points = sample_points(pred, gt, n_points, seed, exhaustive=exhaustive, inside_boxes=inside_boxes)
    frames = np.broadcast_to(np.arange(points.shape[0])[:, None], points.shape[:2])
    a = pred.masks[frames, points[..., 0], points[..., 1]]
    b = gt.masks[frames, points[..., 0], points[..., 1]]
    return dice_loss(a.astype(np.float64), b.astype(np.float64))


def generalized_iou(box_a: Box, box_b: Box) -> float:
    """Compute the generalized IoU of two boxes.

    Zero-area boxes are allowed: two identical boxes have gIoU 1, boxes without a common area have
    IoU 0, and the enclosure penalty is dropped if the enclosing box has no area.

    Args:
        box_a (Box): The first box `(x_min, y_min, x_max, y_max)`.
        box_b (Box): The second box.

    Returns:
        float: The generalized IoU in [-1, 1].
    """
    if tuple(box_a) == tuple(box_b):
        return 1.0
    ax0, ay0, ax1, ay1 = (float(v) for v in box_a)
    bx0, by0, bx1, by1 = (float(v) for v in box_b)
    intersection = max(0.0, min(ax1, bx1) - max(ax0, bx0)) * max(0.0, min(ay1, by1) - max(ay0, by0))
    union = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - intersection
    iou = intersection / union if union > 0 else 0.0
    enclosure = (max(ax1, bx1) - min(ax0, bx0)) * (max(ay1, by1) - min(ay0, by0))
    if enclosure <= 0:
        return iou
    return iou - (enclosure - union) / enclosure


def framewise_cost(pred_boxes: npt.ArrayLike, gt_boxes: npt.ArrayLike, height: int, width: int) -> float:
    """Compute the frame-wise box cost.

    Per frame, the L1 distance of the box coordinates normalized by the frame width and height
    (summed over the four coordinates) is added to `1 - gIoU`; the result is averaged over frames.

    Args:
        pred_boxes (npt.ArrayLike): The predicted boxes of shape (T, 4).
        gt_boxes (npt.ArrayLike): The ground-truth boxes of shape (T, 4).
        height (int): The frame height.
        width (int): The frame width.

    Returns:
        float: The cost.

    Raises:
        DimensionMismatchError: If the sequences differ in length.
    """
    pred = np.asarray(pred_boxes, dtype=np.float64).reshape(-1, 4)
    gt = np.asarray(gt_boxes, dtype=np.float64).reshape(-1, 4)
    if pred.shape != gt.shape or len(pred) == 0:
        msg = f"Box sequences must be non-empty and of equal length, got {len(pred)} and {len(gt)}."
        raise DimensionMismatchError(msg)
    scale = np.array([width, height, width, height], dtype=np.float64)
    costs = [
        float(np.abs(p / scale - g / scale).sum()) + 1.0 - generalized_iou(tuple(p), tuple(g))  # type: ignore[arg-type]
        for p, g in zip(pred, gt)
    ]
    return float(np.mean(costs))


def predicted_boxes(mask: npt.ArrayLike, bin_threshold: float = DEFAULT_BIN_THRESHOLD) -> npt.NDArray[np.int64]:
    """Get the per-frame boxes of a soft mask sequence, using the point box (0, 0, 0, 0) for empty frames."""
    sequence = mask_to_boxmask(mask, bin_threshold)
    return np.array([box if box is not None else (0, 0, 0, 0) for box in sequence.boxes()], dtype=np.int64)


def build_cost_matrix(
    pred_masks: npt.ArrayLike,
    gt_boxes: npt.ArrayLike,
    strategy: MatchingStrategy | str = MatchingStrategy.SPATIO_TEMPORAL,
    n_points: int = DEFAULT_POINTS,
    seed: int = 0,
    *,
    exhaustive: bool = False,
    inside_boxes: bool = False,
    bin_threshold: float = DEFAULT_BIN_THRESHOLD,
) -> CostMatrix:
    """Compute the costs between every predicted instance sequence and every ground-truth sequence.

    Args:
        pred_masks (npt.ArrayLike): Predicted mask probabilities of shape (n_pred, T, H, W).
        gt_boxes (npt.ArrayLike): Ground-truth boxes of shape (n_gt, T, 4).
        strategy (MatchingStrategy | str, optional): The cost. Defaults to spatio-temporal.
        n_points (int, optional): The number of samples per frame for the spatio-temporal cost.
        seed (int, optional): The sampling seed, shared by all entries.
        exhaustive (bool, optional): Use every pixel instead of sampling.
        inside_boxes (bool, optional): Sample inside the boxes only.
        bin_threshold (float, optional): The mask binarization threshold.

    Returns:
        CostMatrix: The costs of shape (n_pred, n_gt).
    """
    strategy = parse_enum(MatchingStrategy, strategy, "matching strategy")
    masks = np.asarray(pred_masks, dtype=np.float64)
    boxes = np.asarray(gt_boxes, dtype=np.int64)
    if masks.ndim != 4 or boxes.ndim != 3 or boxes.shape[1:] != (masks.shape[1], 4):
        msg = f"Predicted masks {masks.shape} and ground-truth boxes {boxes.shape} do not fit together."
        raise DimensionMismatchError(msg)
    _, _, height, width = masks.shape
    costs = np.zeros((masks.shape[0], boxes.shape[0]))
    if strategy is MatchingStrategy.FRAMEWISE:
        pred_boxes = [predicted_boxes(mask, bin_threshold) for mask in masks]
        for i, j in np.ndindex(costs.shape):
            costs[i, j] = framewise_cost(pred_boxes[i], boxes[j], height, width)
    else:
        pred_sequences = [mask_to_boxmask(mask, bin_threshold) for mask in masks]
        gt_sequences = [BoxMaskSequence.from_boxes(b, height, width) for b in boxes]
        for i, j in np.ndindex(costs.shape):
            costs[i, j] = st_boxmask_cost(
                pred_sequences[i], gt_sequences[j], n_points, seed, exhaustive=exhaustive, inside_boxes=inside_boxes
            )
    logger.debug("Built %s cost matrix of shape %s", strategy.value, costs.shape)
    return CostMatrix(costs)
