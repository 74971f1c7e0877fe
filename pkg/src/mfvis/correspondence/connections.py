# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Frame connection schemes of a tube."""

from __future__ import annotations

from ..configuration import parse_enum
from ..errors import ValidationError
from .config import ConnectionScheme


def build_tube_connections(n_frames: int, scheme: ConnectionScheme | str) -> list[tuple[int, int]]:
    """Enumerate the ordered frame pairs `(t, t_hat)` that are matched within a tube.

    - Cyclic: `(t, (t + 1) % T)` for every frame, T pairs.
    - Sequential: `(t, t + 1)` for all but the last frame, T - 1 pairs.
    - Dense: every pair `(t, t_hat)` with `t < t_hat`, T (T - 1) / 2 pairs.

    Args:
        n_frames (int): The tube length T.
        scheme (ConnectionScheme | str): The connection scheme.

    Returns:
        list[tuple[int, int]]: The frame pairs in a fixed order.

    Raises:
        ValidationError: If the tube has fewer than two frames.
    """
    scheme = parse_enum(ConnectionScheme, scheme, "connection scheme")
    if n_frames < 2:
        msg = f"Temporal connections need at least 2 frames, got {n_frames}."
        raise ValidationError(msg)
    if scheme is ConnectionScheme.CYCLIC:
        return [(t, (t + 1) % n_frames) for t in range(n_frames)]
    if scheme is ConnectionScheme.SEQUENTIAL:
        return [(t, t + 1) for t in range(n_frames - 1)]
    return [(t, t_hat) for t in range(n_frames) for t_hat in range(t + 1, n_frames)]
