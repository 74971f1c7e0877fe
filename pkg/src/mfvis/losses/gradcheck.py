# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Numerical gradients by central differences."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from ..errors import ValidationError
from ..video import MaskField
from .config import DEFAULT_CLAMP_EPS

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

MIN_STEP = 1e-7
MAX_STEP = 1e-3

Entry = tuple[int, int, int, int]


def finite_diff_gradient(
    loss_fn: Callable[[MaskField], float],
    mask_field: MaskField,
    entries: Sequence[Entry],
    h: float = 1e-5,
    clamp_eps: float = DEFAULT_CLAMP_EPS,
) -> npt.NDArray[np.float64]:
    """Estimate partial derivatives of a loss by central differences `(f(m + h) - f(m - h)) / 2h`.

    The perturbed fields are rounded like every mask field, and the difference quotient uses the rounded step.

    Args:
        loss_fn (Callable[[MaskField], float]): The loss.
        mask_field (MaskField): The point of evaluation.
        entries (Sequence[Entry]): The `(instance, t, y, x)` entries to differentiate.
        h (float, optional): The step, in [1e-7, 1e-3]. Defaults to 1e-5.
        clamp_eps (float, optional): Entries must stay within `(clamp_eps, 1 - clamp_eps)` when perturbed.

    Returns:
        npt.NDArray[np.float64]: The estimated partial derivative of every entry.

    Raises:
        ValidationError: If the step or an entry is out of range.
    """
    if not MIN_STEP <= h <= MAX_STEP:
        msg = f"The finite-difference step must lie in [{MIN_STEP}, {MAX_STEP}], got {h}."
        raise ValidationError(msg)
    values = mask_field.values
    partials = np.empty(len(entries))
    for k, entry in enumerate(entries):
        entry = tuple(int(v) for v in entry)  # noqa: PLW2901
        if len(entry) != 4 or any(not 0 <= v < n for v, n in zip(entry, values.shape)):
            msg = f"Entry {entry} lies outside the mask field of shape {values.shape}."
            raise ValidationError(msg)
        m = values[entry]
        if not (clamp_eps < m - h and m + h < 1.0 - clamp_eps):
            msg = f"Entry {entry} with value {m} is too close to 0 or 1 for a step of {h}."
            raise ValidationError(msg)
        plus, minus = values.copy(), values.copy()
        plus[entry] = m + h
        minus[entry] = m - h
        upper, lower = MaskField(plus), MaskField(minus)
        step = upper.values[entry] - lower.values[entry]
        partials[k] = (loss_fn(upper) - loss_fn(lower)) / step
    return partials
