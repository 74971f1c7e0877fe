# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""The temporal KNN-patch loss over a tube."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np

from ..correspondence import ConnectionScheme, PatchConfig, compute_match_sets
from ..errors import ValidationError
from .config import DEFAULT_CLAMP_EPS
from .consistency import consistency_loss
from .term import LossTerm

if TYPE_CHECKING:
    from collections.abc import Sequence

    from ..correspondence import MatchSet
    from ..video import MaskField, Tube

logger = logging.getLogger(__name__)


def tk_loss(
    mask_field: MaskField,
    tube: Tube,
    config: PatchConfig | None = None,
    scheme: ConnectionScheme | str = ConnectionScheme.CYCLIC,
    *,
    clamp_eps: float = DEFAULT_CLAMP_EPS,
    match_sets: Sequence[MatchSet] | None = None,
) -> LossTerm:
    """Compute the temporal KNN-patch loss and its gradient.

    For every connected frame pair `(t, t_hat)`, the consistency losses of all matched pixel pairs
    are summed and divided by the pixel count `H * W`. The per-pair losses are summed over the
    connections and averaged over instances. Matches depend on the frames only and are constants
    with respect to the mask field.

    Args:
        mask_field (MaskField): The soft masks.
        tube (Tube): The tube the masks belong to.
        config (PatchConfig | None, optional): The patch-search parameters. Defaults to :class:`PatchConfig`.
        scheme (ConnectionScheme | str, optional): The connection scheme. Defaults to cyclic.
        clamp_eps (float, optional): The consistency-loss clamp.
        match_sets (Sequence[MatchSet] | None, optional): Precomputed matches, replacing `config` and `scheme`.

    Returns:
        LossTerm: The temporal loss and its gradient.

    Raises:
        ValidationError: If the tube has fewer than two frames or a match set refers to a missing frame.
        DimensionMismatchError: If the mask field does not cover the tube.
    """
    mask_field.check_matches(tube)
    if tube.n_frames < 2:
        msg = f"The temporal loss needs at least 2 frames, got {tube.n_frames}."
        raise ValidationError(msg)
    if match_sets is None:
        match_sets = compute_match_sets(tube, config, scheme)

    n_instances, n_frames, height, width = mask_field.shape
    pixels = height * width
    values = mask_field.values.reshape(n_instances, n_frames, pixels)
    grad = np.zeros_like(values)
    totals = np.zeros(n_instances)
    for match_set in match_sets:
        t, t_hat = match_set.source_frame, match_set.target_frame
        if not (0 <= t < n_frames and 0 <= t_hat < n_frames):
            msg = f"Match set ({t}, {t_hat}) refers to a frame outside the tube."
            raise ValidationError(msg)
        if (match_set.height, match_set.width) != (height, width):
            msg = f"Match set ({t}, {t_hat}) was computed for frames of a different size."
            raise ValidationError(msg)
        pairs = match_set.pairs()
        if pairs.distance.size == 0:
            continue
        source = pairs.source_y * width + pairs.source_x
        target = pairs.target_y * width + pairs.target_x
        terms = consistency_loss(values[:, t, source], values[:, t_hat, target], clamp_eps)
        totals += terms.value.sum(axis=1) / pixels
        for i in range(n_instances):
            grad[i, t] += np.bincount(source, weights=terms.grad_a[i], minlength=pixels) / pixels
            grad[i, t_hat] += np.bincount(target, weights=terms.grad_b[i], minlength=pixels) / pixels

    if n_instances == 0:
        return LossTerm(0.0, grad.reshape(mask_field.shape))
    logger.debug("Temporal loss per instance: %s", totals)
    return LossTerm(float(totals.mean()), grad.reshape(mask_field.shape) / n_instances)
