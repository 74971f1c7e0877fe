# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Conversion of RGB frames into the normalized Lab space used for patch and color comparisons."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt
from skimage import color

from ..errors import ValidationError
from .model import Frame

LAB_OFFSET = np.array([0.0, 128.0, 128.0])
LAB_SCALE = np.array([100.0, 255.0, 255.0])


def normalize_lab(lab: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """Rescale CIE-Lab values (L in [0, 100], a and b in [-128, 127]) to [0, 1]."""
    return np.clip((np.asarray(lab, dtype=np.float64) + LAB_OFFSET) / LAB_SCALE, 0.0, 1.0)


def rgb_to_lab(rgb_frame: npt.ArrayLike) -> Frame:
    """Convert an 8-bit RGB image into a frame carrying both RGB and normalized Lab channels.

    The conversion assumes sRGB input under the D65 illuminant. Values outside [0, 255] are clipped.

    Args:
        rgb_frame (npt.ArrayLike): The image of shape (H, W, 3).

    Returns:
        Frame: The converted frame.

    Raises:
        ValidationError: If the image does not have shape (H, W, 3).
    """
    rgb = np.asarray(rgb_frame)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        msg = f"RGB frames must have shape (H, W, 3), got {rgb.shape}."
        raise ValidationError(msg)
    if rgb.dtype != np.uint8:
        rgb = np.clip(np.rint(rgb.astype(np.float64)), 0, 255).astype(np.uint8)
    lab = color.rgb2lab(rgb, illuminant="D65", observer="2")
    return Frame(rgb=rgb, lab=normalize_lab(lab))
