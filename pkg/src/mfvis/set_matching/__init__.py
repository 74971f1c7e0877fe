# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Instance-sequence matching under box supervision."""

from __future__ import annotations

from .assignment import UNASSIGNED, Assignment, CostMatrix, hungarian_assign
from .box_masks import DEFAULT_BIN_THRESHOLD, BoxMaskSequence, mask_to_boxmask
from .costs import (
    DEFAULT_POINTS,
    MatchingStrategy,
    build_cost_matrix,
    framewise_cost,
    generalized_iou,
    predicted_boxes,
    sample_points,
    st_boxmask_cost,
)

__all__ = [
    "DEFAULT_BIN_THRESHOLD",
    "DEFAULT_POINTS",
    "UNASSIGNED",
    "Assignment",
    "BoxMaskSequence",
    "CostMatrix",
    "MatchingStrategy",
    "build_cost_matrix",
    "framewise_cost",
    "generalized_iou",
    "hungarian_assign",
    "mask_to_boxmask",
    "predicted_boxes",
    "sample_points",
    "st_boxmask_cost",
]
