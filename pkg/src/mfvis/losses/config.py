# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Loss weights and the pairwise edge topology."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any

import numpy as np

from ..configuration import from_mapping, to_mapping
from ..errors import ValidationError

DEFAULT_CLAMP_EPS = 1e-6
MAX_CLAMP_EPS = 1e-3


@dataclass(frozen=True)
class EdgeTopology:
    """The neighborhood used for pairwise color edges.

    Attributes:
        dilation (int): The pixel distance between neighbors of the 8-neighborhood.
        theta (float): The scale of the color similarity `exp(-||lab_i - lab_j|| / theta)`.
    """

    dilation: int = 2
    theta: float = 0.1

    def __post_init__(self) -> None:
        """Validate the parameters."""
        if self.dilation < 1:
            msg = f"The pairwise dilation must be a positive integer, got {self.dilation}."
            raise ValidationError(msg)
        if not self.theta > 0:
            msg = f"The color similarity scale must be positive, got {self.theta}."
            raise ValidationError(msg)


@dataclass(frozen=True)
class LossWeights:
    """Weights and constants of the combined objective.

    Attributes:
        lambda_pair (float): The weight of the pairwise loss in the spatial loss.
        lambda_temp (float): The weight of the temporal loss in the overall loss.
        sigma_pixel (float): The minimal color similarity of a pairwise edge.
        clamp_eps (float): The lower clamp of the agreement probability inside the logarithm.
        pairwise_dilation (int): The pixel distance of pairwise neighbors.
        color_theta (float): The scale of the color similarity.
        restrict_pairs_to_boxes (bool): Only keep pairwise edges with an endpoint inside the instance box.
    """

    lambda_pair: float = 1.0
    lambda_temp: float = 0.1
    sigma_pixel: float = 0.3
    clamp_eps: float = DEFAULT_CLAMP_EPS
    pairwise_dilation: int = 2
    color_theta: float = 0.1
    restrict_pairs_to_boxes: bool = False

    def __post_init__(self) -> None:
        """Validate the parameters."""
        for name in ("lambda_pair", "lambda_temp"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                msg = f"{name} must be a finite non-negative weight, got {value}."
                raise ValidationError(msg)
        if not self.sigma_pixel > 0:
            msg = f"sigma_pixel must be positive, got {self.sigma_pixel}."
            raise ValidationError(msg)
        if not 0 < self.clamp_eps <= MAX_CLAMP_EPS:
            msg = f"clamp_eps must lie in (0, {MAX_CLAMP_EPS}], got {self.clamp_eps}."
            raise ValidationError(msg)
        EdgeTopology(self.pairwise_dilation, self.color_theta)

    @property
    def topology(self) -> EdgeTopology:
        """The pairwise edge topology."""
        return EdgeTopology(self.pairwise_dilation, self.color_theta)

    @classmethod
    def from_dict(cls, data: Any) -> LossWeights:  # noqa: ANN401
        """Parse the weights from a JSON object, rejecting unknown keys."""
        return from_mapping(cls, data, "weights")

    def to_dict(self) -> dict[str, Any]:
        """Convert the weights into a JSON object."""
        return to_mapping(self)

    def replace(self, **changes: Any) -> LossWeights:  # noqa: ANN401
        """Create a copy with some weights replaced."""
        return dataclasses.replace(self, **changes)
