# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Toy optimization of per-pixel masks from box annotations, with evaluation and overlays."""

from __future__ import annotations

from .config import TrainConfig
from .evaluation import IouReport, evaluate_iou
from .logits import LogitField, init_logits
from .overlay import render_mask_overlay
from .trainer import StepRecord, TrainingResult, train

__all__ = [
    "IouReport",
    "LogitField",
    "StepRecord",
    "TrainConfig",
    "TrainingResult",
    "evaluate_iou",
    "init_logits",
    "render_mask_overlay",
    "train",
]
