# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Mask overlays on video frames."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt
from PIL import Image

if TYPE_CHECKING:
    from ..video import Frame

PALETTE = np.array(
    [(230, 25, 75), (60, 180, 75), (255, 225, 25), (0, 130, 200), (245, 130, 48), (145, 30, 180), (70, 240, 240)],
    dtype=np.float64,
)


def render_mask_overlay(frame: Frame, masks: npt.ArrayLike, alpha: float = 0.5) -> Image.Image:
    """Blend instance masks onto a frame.

    Each instance gets a palette color, weighted by `alpha` times its mask probability.

    Args:
        frame (Frame): The frame.
        masks (npt.ArrayLike): Mask probabilities of shape (n_instances, H, W).
        alpha (float, optional): The maximal opacity of a mask. Defaults to 0.5.

    Returns:
        Image.Image: The blended RGB image.
    """
    image = frame.rgb.astype(np.float64)
    for i, mask in enumerate(np.asarray(masks, dtype=np.float64)):
        weight = alpha * np.clip(mask, 0.0, 1.0)[..., None]
        image = (1.0 - weight) * image + weight * PALETTE[i % len(PALETTE)]
    return Image.fromarray(np.clip(np.rint(image), 0, 255).astype(np.uint8))
