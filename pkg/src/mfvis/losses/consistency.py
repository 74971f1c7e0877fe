# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""The mask consistency loss of two probabilities."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from .config import DEFAULT_CLAMP_EPS


class ConsistencyTerms(NamedTuple):
    """Elementwise consistency losses and their partial derivatives."""

    value: npt.NDArray[np.float64]
    grad_a: npt.NDArray[np.float64]
    grad_b: npt.NDArray[np.float64]


def consistency_loss(m_a: npt.ArrayLike, m_b: npt.ArrayLike, clamp_eps: float = DEFAULT_CLAMP_EPS) -> ConsistencyTerms:
    """Compute `-log(m_a m_b + (1 - m_a)(1 - m_b))` elementwise.

    The agreement probability is clamped to `[clamp_eps, 1]`. Where the lower clamp is active,
    both partial derivatives are zero. They are also zero where both probabilities agree with
    certainty (`q = 1`), since every descent direction there leaves [0, 1].

    Args:
        m_a (npt.ArrayLike): The first mask probabilities in [0, 1].
        m_b (npt.ArrayLike): The second mask probabilities in [0, 1], broadcastable against `m_a`.
        clamp_eps (float, optional): The lower clamp of the agreement probability. Defaults to 1e-6.

    Returns:
        ConsistencyTerms: The losses and the partials with respect to `m_a` and `m_b`.
    """
    a = np.asarray(m_a, dtype=np.float64)
    b = np.asarray(m_b, dtype=np.float64)
    q = a * b + (1.0 - a) * (1.0 - b)
    flat = (q < clamp_eps) | (q >= 1.0)
    q = np.clip(q, clamp_eps, 1.0)
    grad_a = np.where(flat, 0.0, -(2.0 * b - 1.0) / q)
    grad_b = np.where(flat, 0.0, -(2.0 * a - 1.0) / q)
    # 0.0 - x keeps the loss at +0.0 where q = 1
    return ConsistencyTerms(0.0 - np.log(q), grad_a, grad_b)
