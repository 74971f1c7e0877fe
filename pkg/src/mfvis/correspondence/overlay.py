# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Visualization of patch correspondences."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from PIL import Image, ImageDraw

if TYPE_CHECKING:
    from ..video import Frame
    from .matching import MatchSet

DEFAULT_OVERLAY_POINTS = 100


def render_correspondence_overlay(
    match_set: MatchSet,
    source: Frame,
    target: Frame,
    n_points: int = DEFAULT_OVERLAY_POINTS,
    seed: int = 0,
    scale: int = 4,
) -> Image.Image:
    """Draw sampled patch centres and their matches side by side.

    Up to `n_points` source pixels with at least one match are sampled. Each is drawn on the left
    (source) half together with its matches on the right (target) half in a shared random color.

    Args:
        match_set (MatchSet): The matches between the two frames.
        source (Frame): The source frame.
        target (Frame): The target frame.
        n_points (int, optional): The number of sampled source pixels. Defaults to 100.
        seed (int, optional): The sampling seed.
        scale (int, optional): The magnification of the frames.

    Returns:
        Image.Image: The overlay image.
    """
    height, width = source.height, source.width
    canvas = Image.new("RGB", (2 * width * scale, height * scale))
    canvas.paste(Image.fromarray(source.rgb).resize((width * scale, height * scale), Image.Resampling.NEAREST), (0, 0))
    target_image = Image.fromarray(target.rgb).resize((width * scale, height * scale), Image.Resampling.NEAREST)
    canvas.paste(target_image, (width * scale, 0))
    draw = ImageDraw.Draw(canvas)

    rng = np.random.default_rng(seed)
    ys, xs = np.nonzero(match_set.counts > 0)
    chosen = rng.permutation(len(ys))[:n_points]
    radius = max(1, scale // 2)

    def dot(x: float, y: float, color: tuple[int, int, int]) -> None:
        cx, cy = (x + 0.5) * scale, (y + 0.5) * scale
        draw.ellipse((cx - radius, cy - radius, cx + radius, cy + radius), fill=color, outline=(255, 255, 255))

    for index in chosen:
        x, y = int(xs[index]), int(ys[index])
        color = tuple(int(c) for c in rng.integers(64, 256, size=3))
        dot(x, y, color)  # type: ignore[arg-type]
        for (tx, ty), _ in match_set.matches_at((x, y)):
            dot(tx + width, ty, color)  # type: ignore[arg-type]
    return canvas
