# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Color-similarity edges and the spatial pairwise loss."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from ..errors import DimensionMismatchError, ValidationError
from .config import DEFAULT_CLAMP_EPS, EdgeTopology
from .consistency import consistency_loss
from .term import LossTerm

if TYPE_CHECKING:
    from collections.abc import Sequence

    from ..video import Frame, MaskField


@dataclass(frozen=True, eq=False)
class EdgeSet:
    """The undirected pixel pairs of one frame, as flat row-major pixel indices.

    Attributes:
        height (int): The frame height.
        width (int): The frame width.
        source (npt.NDArray[np.intp]): The first endpoint of every edge.
        target (npt.NDArray[np.intp]): The second endpoint of every edge.
        similarity (npt.NDArray[np.float64]): The color similarity of every edge.
    """

    height: int
    width: int
    source: npt.NDArray[np.intp]
    target: npt.NDArray[np.intp]
    similarity: npt.NDArray[np.float64]

    def __len__(self) -> int:
        """The number of edges."""
        return len(self.source)

    def pixel_pairs(self) -> set[tuple[tuple[int, int], tuple[int, int]]]:
        """Get the edges as a set of sorted `((x, y), (x, y))` pairs."""
        pairs = set()
        for s, t in zip(self.source.tolist(), self.target.tolist()):
            a, b = (s % self.width, s // self.width), (t % self.width, t // self.width)
            pairs.add((min(a, b), max(a, b)))
        return pairs


def neighbor_offsets(dilation: int) -> tuple[tuple[int, int], ...]:
    """The `(dy, dx)` offsets covering each undirected 8-neighborhood edge once."""
    return (0, dilation), (dilation, -dilation), (dilation, 0), (dilation, dilation)


def build_color_edges(frame: Frame, sigma_pixel: float = 0.3, topology: EdgeTopology | None = None) -> EdgeSet:
    """Connect neighboring pixels of similar color.

    Two pixels at an 8-neighborhood offset scaled by the topology dilation are connected if the
    similarity `exp(-||lab_i - lab_j|| / theta)` of their normalized Lab colors is at least `sigma_pixel`.

    Args:
        frame (Frame): The frame.
        sigma_pixel (float, optional): The minimal similarity. Defaults to 0.3.
        topology (EdgeTopology | None, optional): The neighborhood. Defaults to :class:`EdgeTopology`.

    Returns:
        EdgeSet: The edges, each undirected edge once.
    """
    topology = topology or EdgeTopology()
    height, width = frame.height, frame.width
    lab = frame.lab
    indices = np.arange(height * width).reshape(height, width)
    sources, targets, similarities = [], [], []
    for dy, dx in neighbor_offsets(topology.dilation):
        y1 = height - dy
        x0, x1 = max(0, -dx), min(width, width - dx)
        if y1 <= 0 or x0 >= x1:
            continue
        difference = lab[:y1, x0:x1] - lab[dy:, x0 + dx : x1 + dx]
        similarity = np.exp(-np.linalg.norm(difference, axis=-1) / topology.theta)
        keep = similarity >= sigma_pixel
        sources.append(indices[:y1, x0:x1][keep])
        targets.append(indices[dy:, x0 + dx : x1 + dx][keep])
        similarities.append(similarity[keep])
    return EdgeSet(
        height=height,
        width=width,
        source=np.concatenate(sources) if sources else np.zeros(0, dtype=np.intp),
        target=np.concatenate(targets) if targets else np.zeros(0, dtype=np.intp),
        similarity=np.concatenate(similarities) if similarities else np.zeros(0),
    )


def pairwise_loss(
    mask_field: MaskField,
    edge_sets: Sequence[EdgeSet],
    clamp_eps: float = DEFAULT_CLAMP_EPS,
    *,
    box_masks: npt.NDArray[np.bool_] | None = None,
) -> LossTerm:
    """Compute the pairwise loss and its gradient.

    The loss is normalised by per-frame edge averaging rather than summed over edges: in every frame,
    the consistency loss is divided by that frame's edge count (frames without edges contribute 0).
    The frame losses are then averaged over the T frames and over instances.

    Args:
        mask_field (MaskField): The soft masks.
        edge_sets (Sequence[EdgeSet]): One edge set per frame.
        clamp_eps (float, optional): The consistency-loss clamp.
        box_masks (npt.NDArray[np.bool_] | None, optional): Filled instance boxes of shape (n_instances, T, H, W).
            If given, only edges with at least one endpoint inside the instance's box are used.

    Returns:
        LossTerm: The pairwise loss and its gradient.

    Raises:
        DimensionMismatchError: If the edge sets or box masks do not fit the mask field.
    """
    n_instances, n_frames, height, width = mask_field.shape
    if len(edge_sets) != n_frames:
        msg = f"Expected one edge set per frame ({n_frames}), got {len(edge_sets)}."
        raise DimensionMismatchError(msg)
    if any((edges.height, edges.width) != (height, width) for edges in edge_sets):
        msg = f"Edge sets must be built on frames of {height}x{width} pixels."
        raise DimensionMismatchError(msg)
    if box_masks is not None and np.shape(box_masks) != mask_field.shape:
        msg = f"Box masks have shape {np.shape(box_masks)}, expected {mask_field.shape}."
        raise DimensionMismatchError(msg)
    if n_instances == 0:
        return LossTerm(0.0, np.zeros(mask_field.shape))
    if n_frames == 0:
        msg = "The pairwise loss needs at least one frame."
        raise ValidationError(msg)

    pixels = height * width
    values = mask_field.values.reshape(n_instances, n_frames, pixels)
    grad = np.zeros_like(values)
    totals = np.zeros(n_instances)
    for i, t in np.ndindex(n_instances, n_frames):
        source, target = edge_sets[t].source, edge_sets[t].target
        if box_masks is not None:
            inside = np.asarray(box_masks[i, t]).ravel()
            keep = inside[source] | inside[target]
            source, target = source[keep], target[keep]
        if len(source) == 0:
            continue
        scale = 1.0 / (len(source) * n_frames)
        terms = consistency_loss(values[i, t, source], values[i, t, target], clamp_eps)
        totals[i] += terms.value.sum() * scale
        grad[i, t] += (
            np.bincount(source, weights=terms.grad_a, minlength=pixels)
            + np.bincount(target, weights=terms.grad_b, minlength=pixels)
        ) * scale
    return LossTerm(float(totals.mean()), grad.reshape(mask_field.shape) / n_instances)
