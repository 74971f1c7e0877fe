# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Parameters of the toy mask optimization."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..configuration import from_mapping, parse_enum, to_mapping
from ..correspondence import ConnectionScheme, PatchConfig
from ..errors import ValidationError
from ..losses import LossWeights

NESTED_FIELDS = ("weights", "patch_config")


@dataclass(frozen=True)
class TrainConfig:
    """Optimization parameters.

    Attributes:
        steps (int): The number of gradient steps.
        learning_rate (float): The step size per pixel; the gradient is scaled by the frame pixel count.
        weights (LossWeights): The loss weights.
        patch_config (PatchConfig): The patch-search parameters of the temporal loss.
        scheme (ConnectionScheme): The frame connection scheme.
        seed (int): The seed of the logit initialization.
        disable_pair (bool): Drop the pairwise loss.
        disable_temp (bool): Drop the temporal loss.
        logit_bound (float): Logits are clipped to `[-logit_bound, logit_bound]` after every step.
        bin_threshold (float): The binarization threshold of the evaluation.
    """

    steps: int = 1000
    learning_rate: float = 1.0
    weights: LossWeights = field(default_factory=LossWeights)
    patch_config: PatchConfig = field(default_factory=PatchConfig)
    scheme: ConnectionScheme = ConnectionScheme.CYCLIC
    seed: int = 0
    disable_pair: bool = False
    disable_temp: bool = False
    logit_bound: float = 8.0
    bin_threshold: float = 0.5

    def __post_init__(self) -> None:
        """Validate the parameters."""
        object.__setattr__(self, "scheme", parse_enum(ConnectionScheme, self.scheme, "connection scheme"))
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 1:
            msg = f"steps must be a positive integer, got {self.steps}."
            raise ValidationError(msg)
        if not np.isfinite(self.learning_rate) or self.learning_rate < 0:
            msg = f"learning_rate must be finite and non-negative, got {self.learning_rate}."
            raise ValidationError(msg)
        if not self.logit_bound > 0:
            msg = f"logit_bound must be positive, got {self.logit_bound}."
            raise ValidationError(msg)
        if not 0 < self.bin_threshold < 1:
            msg = f"bin_threshold must lie in (0, 1), got {self.bin_threshold}."
            raise ValidationError(msg)

    @classmethod
    def from_dict(
        cls, data: Any, weights: LossWeights | None = None, patch_config: PatchConfig | None = None  # noqa: ANN401
    ) -> TrainConfig:
        """Parse the scalar parameters from a JSON object, rejecting unknown keys.

        Args:
            data (Any): The decoded JSON object.
            weights (LossWeights | None, optional): The loss weights. Defaults to :class:`LossWeights`.
            patch_config (PatchConfig | None, optional): The patch parameters. Defaults to :class:`PatchConfig`.

        Returns:
            TrainConfig: The parsed parameters.
        """
        return from_mapping(
            cls, data, "train", weights=weights or LossWeights(), patch_config=patch_config or PatchConfig()
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert the scalar parameters into a JSON object, without the nested records."""
        return {k: v for k, v in to_mapping(self).items() if k not in NESTED_FIELDS}

    def replace(self, **changes: Any) -> TrainConfig:  # noqa: ANN401
        """Create a copy with some parameters replaced."""
        return dataclasses.replace(self, **changes)
