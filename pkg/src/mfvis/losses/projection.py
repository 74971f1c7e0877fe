# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""The box projection loss."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from ..errors import DimensionMismatchError, ValidationError
from .term import LossTerm

if TYPE_CHECKING:
    from ..video import MaskField, Tube

DICE_EPS = 1e-5


def dice_loss(a: npt.ArrayLike, b: npt.ArrayLike, eps: float = DICE_EPS) -> float:
    """Compute the soft dice loss `1 - (2 sum(a b) + eps) / (sum(a^2) + sum(b^2) + eps)`."""
    a_vec = np.asarray(a, dtype=np.float64).ravel()
    b_vec = np.asarray(b, dtype=np.float64).ravel()
    return float(1.0 - (2.0 * np.dot(a_vec, b_vec) + eps) / (np.dot(a_vec, a_vec) + np.dot(b_vec, b_vec) + eps))


def dice_loss_grad(
    a: npt.NDArray[np.float64], b: npt.NDArray[np.float64], eps: float = DICE_EPS
) -> tuple[float, npt.NDArray[np.float64]]:
    """Compute the soft dice loss and its gradient with respect to `a`.

    Args:
        a (npt.NDArray[np.float64]): The prediction.
        b (npt.NDArray[np.float64]): The target.
        eps (float, optional): The smoothing constant. Defaults to 1e-5.

    Returns:
        tuple[float, npt.NDArray[np.float64]]: The loss and its gradient.
    """
    intersection = 2.0 * np.dot(a, b) + eps
    union = np.dot(a, a) + np.dot(b, b) + eps
    return float(1.0 - intersection / union), -2.0 * b / union + 2.0 * a * intersection / union**2


def projection_loss(mask_field: MaskField, tube: Tube) -> LossTerm:
    """Compute the projection loss and its gradient.

    In every frame, the mask is projected onto the x and y axes by taking the maximum over the other
    axis. Each projection is compared with the projection of the instance's ground-truth box by the
    dice loss. The losses of both axes are summed over all frames and averaged over instances. The
    gradient of a maximum is routed to its first maximal pixel.

    Args:
        mask_field (MaskField): The soft masks.
        tube (Tube): The tube with ground-truth boxes for every instance and frame.

    Returns:
        LossTerm: The projection loss and its gradient.

    Raises:
        ValidationError: If the tube has no ground-truth boxes.
        DimensionMismatchError: If the mask field does not cover the tube or the instance counts differ.
    """
    mask_field.check_matches(tube)
    if tube.gt_boxes is None:
        msg = "The projection loss needs ground-truth boxes."
        raise ValidationError(msg)
    n_instances, n_frames, height, width = mask_field.shape
    if n_instances != tube.n_instances:
        msg = f"Mask field has {n_instances} instances, but the tube has boxes for {tube.n_instances}."
        raise DimensionMismatchError(msg)

    grad = np.zeros(mask_field.shape)
    total = 0.0
    columns, rows = np.arange(width), np.arange(height)
    for i, t in np.ndindex(n_instances, n_frames):
        mask = mask_field.values[i, t]
        x_min, y_min, x_max, y_max = (int(v) for v in tube.gt_boxes[i, t])

        arg_rows = np.argmax(mask, axis=0)
        target_x = np.zeros(width)
        target_x[x_min:x_max] = 1.0
        loss_x, grad_x = dice_loss_grad(mask[arg_rows, columns], target_x)
        grad[i, t, arg_rows, columns] += grad_x

        arg_columns = np.argmax(mask, axis=1)
        target_y = np.zeros(height)
        target_y[y_min:y_max] = 1.0
        loss_y, grad_y = dice_loss_grad(mask[rows, arg_columns], target_y)
        grad[i, t, rows, arg_columns] += grad_y

        total += loss_x + loss_y

    if n_instances == 0:
        return LossTerm(0.0, grad)
    return LossTerm(total / n_instances, grad / n_instances)
