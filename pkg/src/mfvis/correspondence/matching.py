# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""One-to-K patch matching between two frames."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
import numpy.typing as npt

from ..configuration import parse_enum
from ..errors import DimensionMismatchError, ValidationError
from ..parallel import ordered_map
from .config import ConnectionScheme, PatchConfig
from .connections import build_tube_connections
from .patches import metric_distances, patch_stack

if TYPE_CHECKING:
    from ..video import Frame, Tube

logger = logging.getLogger(__name__)


class MatchPairs(NamedTuple):
    """All matches of a match set as flat arrays, in row-major source order and ascending rank."""

    source_x: npt.NDArray[np.intp]
    source_y: npt.NDArray[np.intp]
    target_x: npt.NDArray[np.intp]
    target_y: npt.NDArray[np.intp]
    distance: npt.NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class MatchSet:
    """The matches of every pixel of a source frame in a target frame.

    Attributes:
        source_frame (int): The index t of the source frame.
        target_frame (int): The index t_hat of the target frame.
        positions (npt.NDArray[np.int64]): Matched target pixels `(x, y)` of shape (H, W, K, 2), -1 in unused slots.
        distances (npt.NDArray[np.float64]): Patch distances of shape (H, W, K), ascending per pixel,
            inf in unused slots.
        counts (npt.NDArray[np.int64]): The number of matches per pixel, of shape (H, W).
    """

    source_frame: int
    target_frame: int
    positions: npt.NDArray[np.int64]
    distances: npt.NDArray[np.float64]
    counts: npt.NDArray[np.int64]

    def __post_init__(self) -> None:
        """Check array shapes and freeze the arrays."""
        positions = np.asarray(self.positions, dtype=np.int64)
        distances = np.asarray(self.distances, dtype=np.float64)
        counts = np.asarray(self.counts, dtype=np.int64)
        if positions.ndim != 4 or positions.shape[3] != 2 or distances.shape != positions.shape[:3]:
            msg = f"Inconsistent match arrays: positions {positions.shape}, distances {distances.shape}."
            raise DimensionMismatchError(msg)
        if counts.shape != distances.shape[:2]:
            msg = f"Match counts have shape {counts.shape}, expected {distances.shape[:2]}."
            raise DimensionMismatchError(msg)
        for name, array in (("positions", positions), ("distances", distances), ("counts", counts)):
            array.flags.writeable = False
            object.__setattr__(self, name, array)

    @property
    def height(self) -> int:
        """The frame height."""
        return int(self.counts.shape[0])

    @property
    def width(self) -> int:
        """The frame width."""
        return int(self.counts.shape[1])

    @property
    def slots(self) -> int:
        """The number of match slots per pixel."""
        return int(self.distances.shape[2])

    @property
    def total_matches(self) -> int:
        """The total number of matches over all pixels."""
        return int(self.counts.sum())

    def matches_at(self, p: tuple[int, int]) -> list[tuple[tuple[int, int], float]]:
        """Get the matches of a single source pixel.

        Args:
            p (tuple[int, int]): The source pixel `(x, y)`.

        Returns:
            list[tuple[tuple[int, int], float]]: The matched target pixels `(x, y)` with their distances, best first.
        """
        x, y = p
        return [
            ((int(self.positions[y, x, k, 0]), int(self.positions[y, x, k, 1])), float(self.distances[y, x, k]))
            for k in range(int(self.counts[y, x]))
        ]

    def pairs(self) -> MatchPairs:
        """Get all matches as flat arrays."""
        used = np.arange(self.slots)[None, None, :] < self.counts[..., None]
        ys, xs, ks = np.nonzero(used)
        return MatchPairs(
            source_x=xs,
            source_y=ys,
            target_x=self.positions[ys, xs, ks, 0].astype(np.intp),
            target_y=self.positions[ys, xs, ks, 1].astype(np.intp),
            distance=self.distances[ys, xs, ks],
        )

    def validate(self, config: PatchConfig) -> None:
        """Check that the matches satisfy the contract of a search with the given parameters.

        Args:
            config (PatchConfig): The search parameters the matches were produced with.

        Raises:
            ValidationError: If any match violates the threshold, window, ordering or count constraints.
        """
        if np.any(self.counts < 0) or np.any(self.counts > config.max_matches) or np.any(self.counts > self.slots):
            msg = f"Match counts must lie in [0, {config.max_matches}]."
            raise ValidationError(msg)
        used = np.arange(self.slots)[None, None, :] < self.counts[..., None]
        if np.any(self.positions[~used] != -1) or np.any(np.isfinite(self.distances[~used])):
            msg = "Unused match slots must be empty."
            raise ValidationError(msg)
        pairs = self.pairs()
        if np.any(pairs.distance < 0) or np.any(pairs.distance >= config.distance_threshold):
            msg = f"Match distances must lie in [0, {config.distance_threshold})."
            raise ValidationError(msg)
        ordered = np.where(used, self.distances, np.finfo(np.float64).max)
        if np.any(np.diff(ordered, axis=2) < 0):
            msg = "Matches must be sorted by ascending distance."
            raise ValidationError(msg)
        if (
            np.any(pairs.target_x < 0)
            or np.any(pairs.target_x >= self.width)
            or np.any(pairs.target_y < 0)
            or np.any(pairs.target_y >= self.height)
        ):
            msg = "Matched positions must lie inside the frame."
            raise ValidationError(msg)
        dx, dy = pairs.target_x - pairs.source_x, pairs.target_y - pairs.source_y
        reach = config.radius * config.dilation
        if (
            np.any(dx % config.dilation)
            or np.any(dy % config.dilation)
            or np.any(np.abs(dx) > reach)
            or np.any(np.abs(dy) > reach)
        ):
            msg = "Matched positions must lie on the search window of their source pixel."
            raise ValidationError(msg)


def search_offsets(config: PatchConfig) -> npt.NDArray[np.int64]:
    """Enumerate the candidate offsets `(dy, dx)` of the search window in row-major order.

    Args:
        config (PatchConfig): The search parameters.

    Returns:
        npt.NDArray[np.int64]: The offsets, of shape ((2R + 1)^2, 2).
    """
    steps = np.arange(-config.radius, config.radius + 1, dtype=np.int64) * config.dilation
    dy, dx = np.meshgrid(steps, steps, indexing="ij")
    return np.stack([dy.ravel(), dx.ravel()], axis=1)


def match_patches(
    source: npt.NDArray[np.float64],
    target: npt.NDArray[np.float64],
    config: PatchConfig,
    source_frame: int = 0,
    target_frame: int = 1,
) -> MatchSet:
    """Match precomputed patch stacks (see :func:`~mfvis.correspondence.patches.patch_stack`).

    Args:
        source (npt.NDArray[np.float64]): The source patches of shape (H, W, P).
        target (npt.NDArray[np.float64]): The target patches of shape (H, W, P).
        config (PatchConfig): The search parameters.
        source_frame (int, optional): The source frame index stored in the result.
        target_frame (int, optional): The target frame index stored in the result.

    Returns:
        MatchSet: The matches of every source pixel.
    """
    height, width, _ = source.shape
    offsets = search_offsets(config)
    distances = np.full((len(offsets), height, width), np.inf)
    for c, (dy, dx) in enumerate(offsets):
        y0, y1 = max(0, -dy), min(height, height - dy)
        x0, x1 = max(0, -dx), min(width, width - dx)
        if y0 >= y1 or x0 >= x1:
            continue
        distances[c, y0:y1, x0:x1], _ = metric_distances(
            source[y0:y1, x0:x1], target[y0 + dy : y1 + dy, x0 + dx : x1 + dx], config.metric
        )

    kept = np.where(distances < config.distance_threshold, distances, np.inf)
    k = min(config.max_matches, len(offsets))
    order = np.argsort(kept, axis=0, kind="stable")[:k]
    best = np.take_along_axis(kept, order, axis=0)
    used = np.isfinite(best)
    ys, xs = np.mgrid[0:height, 0:width]

    positions = np.full((height, width, config.max_matches, 2), -1, dtype=np.int64)
    match_distances = np.full((height, width, config.max_matches), np.inf)
    positions[:, :, :k, 0] = np.where(used, xs[None] + offsets[order, 1], -1).transpose(1, 2, 0)
    positions[:, :, :k, 1] = np.where(used, ys[None] + offsets[order, 0], -1).transpose(1, 2, 0)
    match_distances[:, :, :k] = best.transpose(1, 2, 0)
    return MatchSet(
        source_frame=source_frame,
        target_frame=target_frame,
        positions=positions,
        distances=match_distances,
        counts=used.sum(axis=0),
    )


def find_matches(
    frame_t: Frame,
    frame_that: Frame,
    config: PatchConfig | None = None,
    *,
    source_frame: int = 0,
    target_frame: int = 1,
) -> MatchSet:
    """Find up to K matching target patches for the patch around every source pixel.

    The candidates of pixel p are `p + dilation * (j, i)` for `|i|, |j| <= R`, restricted to the
    frame. Of those with a distance strictly below D, the K closest are kept in ascending order;
    ties are broken by the row-major order of the candidates.

    Args:
        frame_t (Frame): The source frame.
        frame_that (Frame): The target frame.
        config (PatchConfig | None, optional): The search parameters. Defaults to :class:`PatchConfig`.
        source_frame (int, optional): The source frame index stored in the result.
        target_frame (int, optional): The target frame index stored in the result.

    Returns:
        MatchSet: The matches of every source pixel.

    Raises:
        DimensionMismatchError: If the frames differ in size.
    """
    config = config or PatchConfig()
    if (frame_t.height, frame_t.width) != (frame_that.height, frame_that.width):
        msg = "Matched frames must have the same size."
        raise DimensionMismatchError(msg)
    return match_patches(
        patch_stack(frame_t.lab, config.patch_size),
        patch_stack(frame_that.lab, config.patch_size),
        config,
        source_frame,
        target_frame,
    )


def compute_match_sets(
    tube: Tube,
    config: PatchConfig | None = None,
    scheme: ConnectionScheme | str = ConnectionScheme.CYCLIC,
) -> list[MatchSet]:
    """Match all frame pairs of a tube connection scheme.

    Frame pairs are processed independently on the worker pool; the result order follows
    :func:`~mfvis.correspondence.connections.build_tube_connections`.

    Args:
        tube (Tube): The tube.
        config (PatchConfig | None, optional): The search parameters. Defaults to :class:`PatchConfig`.
        scheme (ConnectionScheme | str, optional): The connection scheme. Defaults to cyclic.

    Returns:
        list[MatchSet]: One match set per connected frame pair.
    """
    config = config or PatchConfig()
    scheme = parse_enum(ConnectionScheme, scheme, "connection scheme")
    connections = build_tube_connections(tube.n_frames, scheme)
    stacks = ordered_map(lambda frame: patch_stack(frame.lab, config.patch_size), tube.frames)
    match_sets = ordered_map(lambda pair: match_patches(stacks[pair[0]], stacks[pair[1]], config, *pair), connections)
    logger.info(
        "Matched %d frame pairs (%s): %d matches in total",
        len(match_sets),
        scheme.value,
        sum(m.total_matches for m in match_sets),
    )
    return match_sets
