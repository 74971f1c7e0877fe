# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Parameters of the patch search and of the frame connection schemes."""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass
from typing import Any

from ..configuration import from_mapping, parse_enum, to_mapping
from ..errors import ValidationError


class PatchMetric(str, enum.Enum):
    """The distance used to compare two patches."""

    L2 = "l2"
    """Root mean squared difference of all patch entries."""
    L1 = "l1"
    """Mean absolute difference of all patch entries."""
    NCC = "ncc"
    """`(1 - ncc) / 2` for the normalized cross-correlation `ncc` of the two patches."""


class ConnectionScheme(str, enum.Enum):
    """The set of ordered frame pairs that are matched within a tube."""

    DENSE = "dense"
    SEQUENTIAL = "sequential"
    CYCLIC = "cyclic"


@dataclass(frozen=True)
class PatchConfig:
    """Patch-matching parameters.

    Attributes:
        patch_size (int): The odd patch side length N.
        radius (int): The search radius R, in units of `dilation` pixels.
        max_matches (int): The maximal number of matches K kept per pixel.
        distance_threshold (float): Only candidates with a distance strictly below D are kept.
        dilation (int): The spacing of candidate positions within the search window.
        metric (PatchMetric): The patch distance.
    """

    patch_size: int = 3
    radius: int = 5
    max_matches: int = 5
    distance_threshold: float = 0.05
    dilation: int = 3
    metric: PatchMetric = PatchMetric.L2

    def __post_init__(self) -> None:
        """Validate the parameters."""
        object.__setattr__(self, "metric", parse_enum(PatchMetric, self.metric, "patch metric"))
        if self.patch_size < 1 or self.patch_size % 2 == 0:
            msg = f"patch_size must be an odd positive integer, got {self.patch_size}."
            raise ValidationError(msg)
        if self.radius < 0:
            msg = f"radius must be non-negative, got {self.radius}."
            raise ValidationError(msg)
        if not 1 <= self.max_matches <= 255:
            msg = f"max_matches must be between 1 and 255, got {self.max_matches}."
            raise ValidationError(msg)
        if not self.distance_threshold >= 0:
            msg = f"distance_threshold must be non-negative, got {self.distance_threshold}."
            raise ValidationError(msg)
        if self.dilation < 1:
            msg = f"dilation must be a positive integer, got {self.dilation}."
            raise ValidationError(msg)

    @property
    def window_size(self) -> int:
        """The number of candidate positions per pixel, `(2R + 1)^2`."""
        return (2 * self.radius + 1) ** 2

    @classmethod
    def from_dict(cls, data: Any) -> PatchConfig:  # noqa: ANN401
        """Parse the parameters from a JSON object, rejecting unknown keys."""
        return from_mapping(cls, data, "patch")

    def to_dict(self) -> dict[str, Any]:
        """Convert the parameters into a JSON object."""
        return to_mapping(self)

    def replace(self, **changes: Any) -> PatchConfig:  # noqa: ANN401
        """Create a copy with some parameters replaced."""
        return dataclasses.replace(self, **changes)
