# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""The value and gradient of a single loss term."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import numpy.typing as npt


class LossTerm(NamedTuple):
    """A scalar loss and its gradient with respect to a mask field, of shape (n_instances, T, H, W)."""

    value: float
    grad: npt.NDArray[np.float64]
