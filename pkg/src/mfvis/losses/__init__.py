# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Box-supervised spatial losses, the temporal KNN-patch loss and their analytic gradients."""

from __future__ import annotations

from .config import EdgeTopology, LossWeights
from .consistency import ConsistencyTerms, consistency_loss
from .gradcheck import finite_diff_gradient
from .pairwise import EdgeSet, build_color_edges, pairwise_loss
from .projection import DICE_EPS, dice_loss, dice_loss_grad, projection_loss
from .temporal import tk_loss
from .term import LossTerm
from .total import LossReport, build_edge_sets, prepare_loss_inputs, total_loss

__all__ = [
    "DICE_EPS",
    "ConsistencyTerms",
    "EdgeSet",
    "EdgeTopology",
    "LossReport",
    "LossTerm",
    "LossWeights",
    "build_color_edges",
    "build_edge_sets",
    "consistency_loss",
    "dice_loss",
    "dice_loss_grad",
    "finite_diff_gradient",
    "pairwise_loss",
    "prepare_loss_inputs",
    "projection_loss",
    "tk_loss",
    "total_loss",
]
