# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Correspondence accuracy against ground-truth instance labels."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from ..errors import DimensionMismatchError, ValidationError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from .matching import MatchSet


def pair_accuracy(
    match_set: MatchSet, source_labels: npt.NDArray[np.integer], target_labels: npt.NDArray[np.integer]
) -> float | None:
    """Compute the fraction of matches whose source and target pixels carry the same instance label.

    Args:
        match_set (MatchSet): The matches of one frame pair.
        source_labels (npt.NDArray[np.integer]): The label map of the source frame, of shape (H, W).
        target_labels (npt.NDArray[np.integer]): The label map of the target frame, of shape (H, W).

    Returns:
        float | None: The accuracy, or None if the match set is empty.
    """
    shape = (match_set.height, match_set.width)
    if np.shape(source_labels) != shape or np.shape(target_labels) != shape:
        msg = f"Label maps must have shape {shape}."
        raise DimensionMismatchError(msg)
    pairs = match_set.pairs()
    if pairs.distance.size == 0:
        return None
    agree = source_labels[pairs.source_y, pairs.source_x] == target_labels[pairs.target_y, pairs.target_x]
    return float(np.mean(agree))


def correspondence_accuracy(
    match_sets: Sequence[MatchSet], gt_instance_maps: Sequence[npt.NDArray[np.integer]] | npt.NDArray[np.integer]
) -> float | None:
    """Average the per-pair correspondence accuracy over several frame pairs.

    Frame pairs without any match are skipped.

    Args:
        match_sets (Sequence[MatchSet]): The match sets.
        gt_instance_maps (Sequence[npt.NDArray[np.integer]] | npt.NDArray[np.integer]): Per-frame label maps,
            indexed by frame.

    Returns:
        float | None: The mean accuracy, or None if no frame pair has a match.

    Raises:
        ValidationError: If a match set refers to a frame without a label map.
    """
    accuracies = []
    for match_set in match_sets:
        for t in (match_set.source_frame, match_set.target_frame):
            if not 0 <= t < len(gt_instance_maps):
                msg = f"No ground-truth instance map for frame {t}."
                raise ValidationError(msg)
        accuracy = pair_accuracy(
            match_set,
            np.asarray(gt_instance_maps[match_set.source_frame]),
            np.asarray(gt_instance_maps[match_set.target_frame]),
        )
        if accuracy is not None:
            accuracies.append(accuracy)
    return float(np.mean(accuracies)) if accuracies else None
