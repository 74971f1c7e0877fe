# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Unconstrained per-pixel mask logits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt
from scipy.special import expit, logit

from ..errors import ValidationError
from ..video import MaskField

if TYPE_CHECKING:
    from ..video import Tube

INIT_SPREAD = 0.01


@dataclass(frozen=True, eq=False)
class LogitField:
    """Finite mask logits of shape (n_instances, T, H, W); the masks are their logistic function."""

    values: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        """Validate and freeze the logits."""
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 4:
            msg = f"Logit fields must have shape (n_instances, T, H, W), got {values.shape}."
            raise ValidationError(msg)
        if not np.all(np.isfinite(values)):
            msg = "Logits must be finite."
            raise ValidationError(msg)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def mask_field(self) -> MaskField:
        """The mask probabilities."""
        return MaskField(expit(self.values))


def init_logits(tube: Tube, n_instances: int, seed: int = 0) -> LogitField:
    """Initialize logits so that all mask probabilities lie within 0.5 +- 0.01.

    Args:
        tube (Tube): The tube providing T, H and W.
        n_instances (int): The number of instances.
        seed (int, optional): The random seed.

    Returns:
        LogitField: The initial logits `logit(0.5 + u)` with `u ~ U(-0.01, 0.01)`.
    """
    rng = np.random.default_rng(seed)
    shape = (n_instances, tube.n_frames, tube.height, tube.width)
    return LogitField(logit(0.5 + rng.uniform(-INIT_SPREAD, INIT_SPREAD, size=shape)))
