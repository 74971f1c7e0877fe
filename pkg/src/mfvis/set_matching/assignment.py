# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Cost matrices and optimal one-to-one assignment."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt
from scipy.optimize import linear_sum_assignment

from ..errors import ValidationError

UNASSIGNED = -1


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Finite, non-negative costs of shape (n_pred, n_gt)."""

    values: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        """Validate and freeze the costs."""
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            msg = f"A cost matrix must be two-dimensional, got shape {values.shape}."
            raise ValidationError(msg)
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            msg = "Costs must be finite and non-negative."
            raise ValidationError(msg)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> tuple[int, int]:
        """The shape (n_pred, n_gt)."""
        rows, columns = self.values.shape
        return int(rows), int(columns)

    def to_list(self) -> list[list[float]]:
        """The costs as nested lists."""
        return [[float(v) for v in row] for row in self.values]


@dataclass(frozen=True)
class Assignment:
    """A one-to-one assignment of predictions to ground-truth instances.

    Attributes:
        pred_to_gt (tuple[int, ...]): The assigned ground-truth index of every prediction, -1 if unassigned.
        total_cost (float): The summed cost of all assigned pairs.
    """

    pred_to_gt: tuple[int, ...]
    total_cost: float

    def pairs(self) -> list[tuple[int, int]]:
        """The assigned `(prediction, ground truth)` pairs."""
        return [(i, j) for i, j in enumerate(self.pred_to_gt) if j != UNASSIGNED]

    def to_dict(self) -> dict[str, Any]:
        """Convert the assignment into a JSON object."""
        return {"pred_to_gt": list(self.pred_to_gt), "total_cost": self.total_cost}


def hungarian_assign(costs: CostMatrix | npt.ArrayLike) -> Assignment:
    """Find the one-to-one assignment with minimal total cost.

    For rectangular matrices, the surplus predictions or ground-truth instances stay unassigned.

    Args:
        costs (CostMatrix | npt.ArrayLike): The costs of shape (n_pred, n_gt).

    Returns:
        Assignment: The optimal assignment.

    Raises:
        ValidationError: If the costs are not a finite two-dimensional array.
    """
    values = costs.values if isinstance(costs, CostMatrix) else np.asarray(costs, dtype=np.float64)
    if values.ndim != 2 or not np.all(np.isfinite(values)):
        msg = "Assignment needs a finite two-dimensional cost matrix."
        raise ValidationError(msg)
    rows, columns = linear_sum_assignment(values)
    pred_to_gt = [UNASSIGNED] * values.shape[0]
    for i, j in zip(rows, columns):
        pred_to_gt[int(i)] = int(j)
    return Assignment(pred_to_gt=tuple(pred_to_gt), total_cost=float(values[rows, columns].sum()))
