# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Tests box-mask sequences, the sequence matching costs and the optimal assignment."""

from __future__ import annotations

import json
from itertools import permutations
from pathlib import Path

import numpy as np
import pytest

from mfvis import DimensionMismatchError, ValidationError
from mfvis.set_matching import (
    UNASSIGNED,
    BoxMaskSequence,
    CostMatrix,
    MatchingStrategy,
    build_cost_matrix,
    framewise_cost,
    generalized_iou,
    hungarian_assign,
    mask_to_boxmask,
    predicted_boxes,
    sample_points,
    st_boxmask_cost,
)
from mfvis.video import SyntheticSpec, Tube, generate_synthetic_tube

BASE_PATH = Path(__file__).parent / "resources" / "synthetic"


def load_tube(name: str) -> Tube:
    """Generates a tube from a synthetic test specification.

    Args:
        name (str): The specification file name without suffix.

    Returns:
        Tube: The generated tube.
    """
    data = json.loads((BASE_PATH / f"{name}.json").read_text(encoding="utf-8"))
    return generate_synthetic_tube(SyntheticSpec.from_dict(data))


def test_box_mask_sequence_from_boxes() -> None:
    """Test rasterizing boxes and reading them back."""
    sequence = BoxMaskSequence.from_boxes([[1, 2, 4, 5], [0, 0, 0, 0]], height=6, width=8)
    assert sequence.shape == (2, 6, 8)
    assert sequence.boxes() == [(1, 2, 4, 5), None]
    assert np.count_nonzero(sequence.masks[0]) == 9
    assert not sequence.masks.flags.writeable


def test_box_mask_sequence_rejects_other_shapes() -> None:
    """Test that only filled rectangles are accepted."""
    masks = np.zeros((1, 4, 4), dtype=bool)
    masks[0, 0, 0] = masks[0, 2, 2] = True
    with pytest.raises(ValidationError):
        BoxMaskSequence(masks)
    with pytest.raises(ValidationError):
        BoxMaskSequence(np.zeros((4, 4), dtype=bool))


def test_mask_to_boxmask() -> None:
    """Test that soft masks are replaced by the filled boxes of their foreground."""
    mask = np.zeros((3, 6, 6))
    mask[0, 1, 1] = mask[0, 3, 4] = 0.9
    mask[1, 2, 2] = 0.5
    mask[2] = 0.7
    sequence = mask_to_boxmask(mask)
    assert sequence.boxes() == [(1, 1, 5, 4), None, (0, 0, 6, 6)]
    assert mask_to_boxmask(mask, bin_threshold=0.8).boxes()[2] is None
    with pytest.raises(ValidationError):
        mask_to_boxmask(np.zeros((6, 6)))


def test_exhaustive_cost_examples() -> None:
    """Test the spatio-temporal cost of identical, disjoint and half-overlapping boxes."""
    a = BoxMaskSequence.from_boxes([[0, 0, 4, 4], [2, 2, 6, 6]], 8, 8)
    disjoint = BoxMaskSequence.from_boxes([[4, 4, 8, 8], [0, 6, 2, 8]], 8, 8)
    shifted = BoxMaskSequence.from_boxes([[2, 0, 6, 4], [4, 2, 8, 6]], 8, 8)
    assert st_boxmask_cost(a, a, exhaustive=True) == pytest.approx(0.0, abs=1e-9)
    assert st_boxmask_cost(a, disjoint, exhaustive=True) == pytest.approx(1.0, abs=1e-6)
    assert st_boxmask_cost(a, shifted, exhaustive=True) == pytest.approx(1.0 - 32.0 / 64.0, abs=1e-6)
    assert st_boxmask_cost(shifted, a, exhaustive=True) == pytest.approx(st_boxmask_cost(a, shifted, exhaustive=True))


def test_sampled_cost_approximates_the_exhaustive_cost() -> None:
    """Test that uniform sampling estimates the exhaustive cost and is reproducible."""
    a = BoxMaskSequence.from_boxes([[0, 0, 8, 8], [4, 4, 12, 12]], 16, 16)
    b = BoxMaskSequence.from_boxes([[4, 0, 12, 8], [4, 6, 12, 14]], 16, 16)
    exact = st_boxmask_cost(a, b, exhaustive=True)
    sampled = st_boxmask_cost(a, b, n_points=4096, seed=3)
    assert sampled == pytest.approx(exact, abs=0.05)
    assert st_boxmask_cost(a, b, n_points=4096, seed=3) == sampled
    inside = st_boxmask_cost(a, b, n_points=4096, seed=3, inside_boxes=True)
    assert 0.0 < inside < 1.0


def test_sample_points() -> None:
    """Test the shape and range of sampled points."""
    a = BoxMaskSequence.from_boxes([[2, 3, 5, 6], [0, 0, 0, 0]], 10, 12)
    b = BoxMaskSequence.from_boxes([[4, 1, 7, 4], [0, 0, 0, 0]], 10, 12)
    points = sample_points(a, b, n_points=500, seed=1)
    assert points.shape == (2, 500, 2)
    assert points[..., 0].min() >= 0
    assert points[..., 0].max() < 10
    assert points[..., 1].max() < 12

    inside = sample_points(a, b, n_points=500, seed=1, inside_boxes=True)
    ys, xs = inside[0, :, 0], inside[0, :, 1]
    assert ys.min() >= 1
    assert ys.max() < 6
    assert xs.min() >= 2
    assert xs.max() < 7
    assert inside[1, :, 0].max() >= 5

    exhaustive = sample_points(a, b, exhaustive=True)
    assert exhaustive.shape == (2, 120, 2)
    assert len({tuple(p) for p in exhaustive[0].tolist()}) == 120


def test_sample_points_validation() -> None:
    """Test mismatched sequences and invalid sample counts."""
    a = BoxMaskSequence.from_boxes([[0, 0, 2, 2]], 4, 4)
    with pytest.raises(DimensionMismatchError):
        sample_points(a, BoxMaskSequence.from_boxes([[0, 0, 2, 2]], 4, 5))
    with pytest.raises(ValidationError):
        sample_points(a, a, n_points=0)


@pytest.mark.parametrize(
    ("box_a", "box_b", "expected"),
    [
        ((0, 0, 2, 2), (0, 0, 2, 2), 1.0),
        ((0, 0, 2, 2), (1, 0, 3, 2), 1.0 / 3.0),
        ((0, 0, 1, 1), (2, 0, 3, 1), -1.0 / 3.0),
        ((0, 0, 0, 0), (1, 1, 1, 1), -1.0),
        ((0, 0, 0, 0), (0, 0, 0, 0), 1.0),
        ((0, 0, 4, 4), (1, 1, 3, 3), 0.25),
    ],
)
def test_generalized_iou(box_a: tuple[int, int, int, int], box_b: tuple[int, int, int, int], expected: float) -> None:
    """Test the generalized IoU of box pairs."""
    assert generalized_iou(box_a, box_b) == pytest.approx(expected)
    assert generalized_iou(box_b, box_a) == pytest.approx(expected)


def test_framewise_cost() -> None:
    """Test the averaged L1 plus gIoU box cost."""
    boxes = [[0, 0, 2, 2], [1, 1, 3, 3]]
    assert framewise_cost(boxes, boxes, 4, 4) == pytest.approx(0.0)

    shifted = [[1, 0, 3, 2], [1, 1, 3, 3]]
    # first frame: L1 = 2 * 1/4, 1 - gIoU = 2/3; second frame is exact
    assert framewise_cost(shifted, boxes, 4, 4) == pytest.approx((0.5 + 2.0 / 3.0) / 2)
    assert framewise_cost(boxes, shifted, 4, 4) == pytest.approx(framewise_cost(shifted, boxes, 4, 4))

    far = framewise_cost([[0, 0, 1, 1]], [[30, 30, 31, 31]], 32, 32)
    assert far > 1.0
    with pytest.raises(DimensionMismatchError):
        framewise_cost(boxes, boxes[:1], 4, 4)


def test_predicted_boxes_of_empty_frames() -> None:
    """Test that frames without foreground get the point box at the origin."""
    mask = np.zeros((2, 5, 5))
    mask[1, 1:3, 2:4] = 0.9
    assert predicted_boxes(mask).tolist() == [[0, 0, 0, 0], [2, 1, 4, 3]]


def test_hungarian_assignment() -> None:
    """Test optimal assignments of square and rectangular cost matrices."""
    square = hungarian_assign([[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]])
    assert square.pred_to_gt == (1, 0, 2)
    assert square.total_cost == pytest.approx(5.0)
    assert square.pairs() == [(0, 1), (1, 0), (2, 2)]

    tall = hungarian_assign(CostMatrix(np.array([[1.0, 2.0], [0.0, 3.0], [5.0, 5.0]])))
    assert tall.pred_to_gt == (1, 0, UNASSIGNED)
    assert tall.total_cost == pytest.approx(2.0)
    assert tall.to_dict() == {"pred_to_gt": [1, 0, -1], "total_cost": 2.0}

    wide = hungarian_assign([[3.0, 1.0, 2.0]])
    assert wide.pred_to_gt == (1,)


def exhaustive_minimum(costs: np.ndarray) -> float:
    """Finds the cheapest one-to-one assignment by trying every permutation.

    Args:
        costs (np.ndarray): The costs of shape (n_pred, n_gt).

    Returns:
        float: The minimal total cost over all assignments of min(n_pred, n_gt) pairs.
    """
    rows, cols = costs.shape
    if rows <= cols:
        return min(sum(costs[r, c] for r, c in enumerate(p)) for p in permutations(range(cols), rows))
    return min(sum(costs[r, c] for c, r in enumerate(p)) for p in permutations(range(rows), cols))


def test_hungarian_assignment_is_optimal() -> None:
    """Test random square and rectangular matrices against exhaustive search."""
    rng = np.random.default_rng(21)
    for _ in range(100):
        rows, cols = (int(v) for v in rng.integers(1, 7, size=2))
        costs = rng.random((rows, cols)) * 10.0
        assignment = hungarian_assign(costs)
        best = exhaustive_minimum(costs)
        assert assignment.total_cost == pytest.approx(best)
        assigned = [gt for _, gt in assignment.pairs()]
        assert len(assigned) == len(set(assigned)) == min(rows, cols)
        assert sum(costs[p, g] for p, g in assignment.pairs()) == pytest.approx(best)


def test_cost_matrix_validation() -> None:
    """Test that invalid cost matrices are rejected."""
    for values in ([1.0, 2.0], [[1.0, -1.0]], [[np.nan]]):
        with pytest.raises(ValidationError):
            CostMatrix(np.array(values))
    with pytest.raises(ValidationError):
        hungarian_assign([[np.inf, 1.0]])
    assert CostMatrix(np.array([[0.5, 1.0]])).to_list() == [[0.5, 1.0]]


@pytest.mark.parametrize("strategy", list(MatchingStrategy))
def test_swapped_instances_are_recovered(strategy: MatchingStrategy) -> None:
    """Test that predictions in reversed order are assigned to their own boxes."""
    tube = load_tube("moving-shapes")
    assert tube.gt_boxes is not None
    predictions = tube.box_masks()[::-1].astype(np.float64)
    costs = build_cost_matrix(predictions, tube.gt_boxes, strategy, n_points=1024, seed=0)
    assert costs.shape == (2, 2)
    assert costs.values[0, 1] == pytest.approx(0.0, abs=1e-6)
    assert costs.values[1, 0] == pytest.approx(0.0, abs=1e-6)
    assert costs.values[0, 0] > 0.5
    assignment = hungarian_assign(costs)
    assert assignment.pred_to_gt == (1, 0)
    assert assignment.total_cost == pytest.approx(0.0, abs=1e-6)


def test_spatio_temporal_cost_uses_the_whole_sequence() -> None:
    """Test that a prediction matching most frames beats one matching a single frame."""
    gt = np.array([[[0, 0, 4, 4], [4, 0, 8, 4], [8, 0, 12, 4]]])
    mostly = np.zeros((3, 12, 12))
    mostly[0, 0:4, 0:4] = mostly[1, 0:4, 4:8] = 1.0
    once = np.zeros((3, 12, 12))
    once[2, 0:4, 8:12] = 1.0
    costs = build_cost_matrix(np.stack([mostly, once]), gt, exhaustive=True)
    assert costs.values[0, 0] < costs.values[1, 0]
    assert hungarian_assign(costs).pred_to_gt == (0, UNASSIGNED)


def test_build_cost_matrix_validation() -> None:
    """Test mismatched predictions and annotations."""
    with pytest.raises(DimensionMismatchError):
        build_cost_matrix(np.zeros((1, 2, 4, 4)), np.zeros((1, 3, 4), dtype=np.int64))
    with pytest.raises(ValidationError):
        build_cost_matrix(np.zeros((1, 2, 4, 4)), np.zeros((1, 2, 4), dtype=np.int64), "boxwise")
