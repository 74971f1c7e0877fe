# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""The combined spatio-temporal objective."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np
import numpy.typing as npt

from ..correspondence import ConnectionScheme, PatchConfig, compute_match_sets
from ..errors import ValidationError
from ..video import save_field_values
from .config import LossWeights
from .pairwise import EdgeSet, build_color_edges, pairwise_loss
from .projection import projection_loss
from .temporal import tk_loss

if TYPE_CHECKING:
    from collections.abc import Sequence

    from ..correspondence import MatchSet
    from ..video import MaskField, Tube

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LossReport:
    """All loss components of a mask field and the gradient of the overall loss.

    Attributes:
        l_temp (float): The temporal loss.
        l_proj (float): The projection loss.
        l_pair (float): The pairwise loss.
        l_spatial (float): `l_proj + lambda_pair * l_pair`.
        l_seg (float): `l_spatial + lambda_temp * l_temp`.
        grad (npt.NDArray[np.float64]): The gradient of `l_seg`, shaped like the mask field.
    """

    l_temp: float
    l_proj: float
    l_pair: float
    l_spatial: float
    l_seg: float
    grad: npt.NDArray[np.float64]

    @property
    def is_finite(self) -> bool:
        """Whether all values and the gradient are finite."""
        scalars = (self.l_temp, self.l_proj, self.l_pair, self.l_spatial, self.l_seg)
        return bool(np.all(np.isfinite(scalars)) and np.all(np.isfinite(self.grad)))

    def scalars(self) -> dict[str, float]:
        """The loss values by name."""
        return {
            "l_temp": self.l_temp,
            "l_proj": self.l_proj,
            "l_pair": self.l_pair,
            "l_spatial": self.l_spatial,
            "l_seg": self.l_seg,
        }

    def to_dict(self, grad_path: Path | str | None = None) -> dict[str, Any]:
        """Convert the report into a JSON object.

        Args:
            grad_path (Path | str | None, optional): The location of a gradient dump to reference.

        Returns:
            dict[str, Any]: The loss values and the gradient dump path, if any.
        """
        return {**self.scalars(), "grad_path": None if grad_path is None else str(grad_path)}

    def save_gradient(self, path: Path | str) -> None:
        """Dump the gradient in mask-field format."""
        save_field_values(self.grad, path)

    def save(self, path: Path | str, grad_path: Path | str | None = None) -> None:
        """Write the report as JSON, optionally dumping the gradient in mask-field format.

        Args:
            path (Path | str): The JSON file.
            grad_path (Path | str | None, optional): The gradient dump file.
        """
        if grad_path is not None:
            self.save_gradient(grad_path)
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(grad_path), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def build_edge_sets(tube: Tube, weights: LossWeights | None = None) -> list[EdgeSet]:
    """Build the pairwise color edges of every frame of a tube."""
    weights = weights or LossWeights()
    return [build_color_edges(frame, weights.sigma_pixel, weights.topology) for frame in tube.frames]


def total_loss(
    mask_field: MaskField,
    tube: Tube,
    config: PatchConfig | None = None,
    weights: LossWeights | None = None,
    scheme: ConnectionScheme | str = ConnectionScheme.CYCLIC,
    *,
    temporal: bool = True,
    pairwise: bool = True,
    match_sets: Sequence[MatchSet] | None = None,
    edge_sets: Sequence[EdgeSet] | None = None,
) -> LossReport:
    """Compute the overall objective and all its components.

    `L_spatial = L_proj + lambda_pair * L_pair` and `L_seg = L_spatial + lambda_temp * L_temp`.
    A component switched off by `temporal=False` or `pairwise=False` is reported as 0 and does not
    contribute to the gradient.

    Args:
        mask_field (MaskField): The soft masks.
        tube (Tube): The tube with ground-truth boxes.
        config (PatchConfig | None, optional): The patch-search parameters. Defaults to :class:`PatchConfig`.
        weights (LossWeights | None, optional): The loss weights. Defaults to :class:`LossWeights`.
        scheme (ConnectionScheme | str, optional): The connection scheme. Defaults to cyclic.
        temporal (bool, optional): Whether to compute the temporal loss.
        pairwise (bool, optional): Whether to compute the pairwise loss.
        match_sets (Sequence[MatchSet] | None, optional): Precomputed matches for the temporal loss.
        edge_sets (Sequence[EdgeSet] | None, optional): Precomputed per-frame edges for the pairwise loss.

    Returns:
        LossReport: The loss components and the gradient of the overall loss.
    """
    weights = weights or LossWeights()
    projection = projection_loss(mask_field, tube)
    grad = projection.grad.copy()

    l_pair = 0.0
    if pairwise:
        if edge_sets is None:
            edge_sets = build_edge_sets(tube, weights)
        box_masks = tube.box_masks() if weights.restrict_pairs_to_boxes else None
        pair = pairwise_loss(mask_field, edge_sets, weights.clamp_eps, box_masks=box_masks)
        l_pair = pair.value
        grad += weights.lambda_pair * pair.grad

    l_temp = 0.0
    if temporal:
        temp = tk_loss(mask_field, tube, config, scheme, clamp_eps=weights.clamp_eps, match_sets=match_sets)
        l_temp = temp.value
        grad += weights.lambda_temp * temp.grad

    l_spatial = projection.value + weights.lambda_pair * l_pair
    l_seg = l_spatial + weights.lambda_temp * l_temp
    return LossReport(
        l_temp=l_temp, l_proj=projection.value, l_pair=l_pair, l_spatial=l_spatial, l_seg=l_seg, grad=grad
    )


def prepare_loss_inputs(
    tube: Tube,
    config: PatchConfig | None = None,
    weights: LossWeights | None = None,
    scheme: ConnectionScheme | str = ConnectionScheme.CYCLIC,
    *,
    temporal: bool = True,
    pairwise: bool = True,
) -> tuple[list[MatchSet] | None, list[EdgeSet] | None]:
    """Precompute the frame-dependent parts of the objective.

    Args:
        tube (Tube): The tube.
        config (PatchConfig | None, optional): The patch-search parameters.
        weights (LossWeights | None, optional): The loss weights.
        scheme (ConnectionScheme | str, optional): The connection scheme.
        temporal (bool, optional): Whether matches are needed.
        pairwise (bool, optional): Whether edges are needed.

    Returns:
        tuple[list[MatchSet] | None, list[EdgeSet] | None]: The match sets and edge sets, None where not needed.
    """
    if temporal and tube.n_frames < 2:
        msg = f"The temporal loss needs at least 2 frames, got {tube.n_frames}."
        raise ValidationError(msg)
    match_sets = compute_match_sets(tube, config, scheme) if temporal else None
    edge_sets = build_edge_sets(tube, weights) if pairwise else None
    return match_sets, edge_sets
