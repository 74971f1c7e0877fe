# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Sequences of filled box masks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..errors import ValidationError
from ..video import Box, fill_box, tight_box

DEFAULT_BIN_THRESHOLD = 0.5


@dataclass(frozen=True, eq=False)
class BoxMaskSequence:
    """Per-frame binary masks of shape (T, H, W), each an axis-aligned filled rectangle or empty."""

    masks: npt.NDArray[np.bool_]

    def __post_init__(self) -> None:
        """Check that every frame holds a filled rectangle or nothing."""
        masks = np.array(self.masks, dtype=bool)
        if masks.ndim != 3:
            msg = f"Box mask sequences must have shape (T, H, W), got {masks.shape}."
            raise ValidationError(msg)
        for t, mask in enumerate(masks):
            if not np.array_equal(mask, fill_box(tight_box(mask), *mask.shape)):
                msg = f"Frame {t} of a box mask sequence is not a filled rectangle."
                raise ValidationError(msg)
        masks.flags.writeable = False
        object.__setattr__(self, "masks", masks)

    @classmethod
    def from_boxes(cls, boxes: npt.ArrayLike, height: int, width: int) -> BoxMaskSequence:
        """Rasterize a sequence of boxes.

        Args:
            boxes (npt.ArrayLike): Half-open boxes `(x_min, y_min, x_max, y_max)` of shape (T, 4).
            height (int): The frame height.
            width (int): The frame width.

        Returns:
            BoxMaskSequence: The filled boxes.
        """
        rows = np.asarray(boxes, dtype=np.int64).reshape(-1, 4)
        filled = [fill_box((int(r[0]), int(r[1]), int(r[2]), int(r[3])), height, width) for r in rows]
        return cls(np.stack(filled))

    @property
    def shape(self) -> tuple[int, int, int]:
        """The sequence shape (T, H, W)."""
        t, h, w = self.masks.shape
        return int(t), int(h), int(w)

    def boxes(self) -> list[Box | None]:
        """The box of every frame, None for empty frames."""
        return [tight_box(mask) for mask in self.masks]


def mask_to_boxmask(mask: npt.ArrayLike, bin_threshold: float = DEFAULT_BIN_THRESHOLD) -> BoxMaskSequence:
    """Replace a soft mask sequence by the filled tight boxes of its foreground.

    Args:
        mask (npt.ArrayLike): Mask probabilities of shape (T, H, W).
        bin_threshold (float, optional): Pixels strictly above the threshold are foreground. Defaults to 0.5.

    Returns:
        BoxMaskSequence: The box masks; frames without foreground are empty.
    """
    probabilities = np.asarray(mask, dtype=np.float64)
    if probabilities.ndim != 3:
        msg = f"Mask sequences must have shape (T, H, W), got {probabilities.shape}."
        raise ValidationError(msg)
    _, height, width = probabilities.shape
    filled = [fill_box(tight_box(frame > bin_threshold), height, width) for frame in probabilities]
    return BoxMaskSequence(np.stack(filled))
