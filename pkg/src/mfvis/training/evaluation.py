# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Video IoU of predicted masks against ground truth."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np
import numpy.typing as npt

from ..errors import DimensionMismatchError

if TYPE_CHECKING:
    from ..video import MaskField


@dataclass(frozen=True)
class IouReport:
    """Per-instance video IoU and its mean."""

    per_instance: tuple[float, ...]
    mean: float

    def to_dict(self) -> dict[str, Any]:
        """Convert the report into a JSON object."""
        return {"per_instance": list(self.per_instance), "mean_iou": self.mean}


def evaluate_iou(mask_field: MaskField, gt_masks: npt.ArrayLike, bin_threshold: float = 0.5) -> IouReport:
    """Compute the IoU of every instance over its whole spatio-temporal volume.

    Predicted probabilities strictly above `bin_threshold` count as foreground. An instance whose
    prediction and ground truth are both empty has IoU 1.

    Args:
        mask_field (MaskField): The predicted masks.
        gt_masks (npt.ArrayLike): Ground-truth masks of shape (n_instances, T, H, W).
        bin_threshold (float, optional): The binarization threshold. Defaults to 0.5.

    Returns:
        IouReport: The per-instance IoU and the mean IoU.

    Raises:
        DimensionMismatchError: If the masks differ in shape.
    """
    gt = np.asarray(gt_masks, dtype=bool)
    if gt.shape != mask_field.shape:
        msg = f"Ground-truth masks have shape {gt.shape}, predictions have shape {mask_field.shape}."
        raise DimensionMismatchError(msg)
    pred = mask_field.values > bin_threshold
    ious = []
    for p, g in zip(pred, gt):
        union = np.count_nonzero(p | g)
        ious.append(1.0 if union == 0 else np.count_nonzero(p & g) / union)
    return IouReport(per_instance=tuple(ious), mean=float(np.mean(ious)) if ious else 1.0)
