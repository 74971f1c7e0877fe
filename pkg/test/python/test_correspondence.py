# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Tests patch extraction, patch distances, the KNN patch search and its storage."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from mfvis import FormatError, TruncatedPayloadError, ValidationError
from mfvis.correspondence import (
    ConnectionScheme,
    MatchSet,
    PatchConfig,
    PatchMetric,
    build_tube_connections,
    compute_match_sets,
    correspondence_accuracy,
    decode_matchset,
    encode_matchset,
    extract_patch,
    find_matches,
    find_matches_bruteforce,
    load_matchset,
    matchset_nbytes,
    pair_accuracy,
    patch_distance,
    render_correspondence_overlay,
    save_matchset,
    search_offsets,
)
from mfvis.correspondence.storage import MATCH_MAGIC
from mfvis.video import Frame, SyntheticSpec, generate_synthetic_tube

BASE_PATH = Path(__file__).parent / "resources" / "synthetic"


def lab_frame(lab: np.ndarray) -> Frame:
    """Creates a frame with the given normalized Lab values and a black RGB image.

    Args:
        lab (np.ndarray): The Lab values of shape (H, W, 3).

    Returns:
        Frame: The frame.
    """
    return Frame(rgb=np.zeros(lab.shape, dtype=np.uint8), lab=lab)


def random_frame(seed: int, height: int = 10, width: int = 12) -> Frame:
    """Creates a frame with uniformly random Lab values.

    Args:
        seed (int): The random seed.
        height (int, optional): The frame height.
        width (int, optional): The frame width.

    Returns:
        Frame: The frame.
    """
    return lab_frame(np.random.default_rng(seed).random((height, width, 3)))


def test_extract_patch_clamps_to_the_edge() -> None:
    """Test the value order and edge handling of patch extraction."""
    lab = np.arange(5 * 4 * 3, dtype=np.float64).reshape(5, 4, 3) / 100
    frame = lab_frame(lab)

    center = extract_patch(frame, (1, 2), 3)
    assert np.array_equal(center, lab[1:4, 0:3].reshape(-1))

    corner = extract_patch(frame, (0, 0), 3)
    expected = np.concatenate([lab[y, x] for y in (0, 0, 1) for x in (0, 0, 1)])
    assert np.array_equal(corner, expected)
    assert corner.shape == (27,)

    assert np.array_equal(extract_patch(frame, (3, 4), 1), lab[4, 3])
    with pytest.raises(ValidationError):
        extract_patch(frame, (0, 0), 2)


def test_patch_distances() -> None:
    """Test the three patch metrics on hand-computable patches."""
    zeros = np.zeros(27)
    shifted = np.full(27, 0.1)
    assert patch_distance(zeros, zeros).distance == 0.0
    assert patch_distance(zeros, shifted, PatchMetric.L2).distance == pytest.approx(0.1)
    assert patch_distance(zeros, shifted, "l1").distance == pytest.approx(0.1)

    ramp = np.linspace(0.0, 1.0, 27)
    assert patch_distance(ramp, 0.5 * ramp + 0.2, PatchMetric.NCC).distance == pytest.approx(0.0, abs=1e-12)
    assert patch_distance(ramp, 1.0 - ramp, PatchMetric.NCC).distance == pytest.approx(1.0)

    degenerate = patch_distance(shifted, ramp, PatchMetric.NCC)
    assert degenerate.degenerate
    assert degenerate.distance == 0.5
    assert not patch_distance(ramp, ramp, PatchMetric.NCC).degenerate

    with pytest.raises(ValidationError):
        patch_distance(zeros, np.zeros(26))
    with pytest.raises(ValidationError):
        patch_distance(zeros, zeros, "cosine")


@pytest.mark.parametrize("seed", range(3))
def test_patch_distance_symmetry(seed: int) -> None:
    """Test that all metrics are symmetric and vanish on identical patches."""
    rng = np.random.default_rng(seed)
    a, b = rng.random(27), rng.random(27)
    for metric in PatchMetric:
        assert patch_distance(a, b, metric).distance == pytest.approx(patch_distance(b, a, metric).distance)
        assert patch_distance(a, a, metric).distance == pytest.approx(0.0, abs=1e-12)


def test_patch_config_validation() -> None:
    """Test that invalid search parameters are rejected."""
    for changes in (
        {"patch_size": 4},
        {"patch_size": 0},
        {"radius": -1},
        {"max_matches": 0},
        {"max_matches": 256},
        {"distance_threshold": -0.1},
        {"dilation": 0},
        {"metric": "l3"},
    ):
        with pytest.raises(ValidationError):
            PatchConfig(**changes)  # type: ignore[arg-type]
    with pytest.raises(ValidationError):
        PatchConfig.from_dict({"k": 3})
    assert PatchConfig.from_dict({"metric": "NCC"}).metric is PatchMetric.NCC
    assert PatchConfig().window_size == 121


def test_search_offsets() -> None:
    """Test the row-major candidate order."""
    offsets = search_offsets(PatchConfig(radius=1, dilation=2))
    assert offsets.tolist() == [[-2, -2], [-2, 0], [-2, 2], [0, -2], [0, 0], [0, 2], [2, -2], [2, 0], [2, 2]]


@pytest.mark.parametrize(
    "config",
    [
        PatchConfig(patch_size=3, radius=2, max_matches=4, distance_threshold=0.45, dilation=1),
        PatchConfig(patch_size=3, radius=3, max_matches=5, distance_threshold=0.45, dilation=2),
        PatchConfig(patch_size=1, radius=2, max_matches=3, distance_threshold=0.3, dilation=3),
        PatchConfig(patch_size=5, radius=1, max_matches=9, distance_threshold=1.0, dilation=1),
        PatchConfig(patch_size=3, radius=2, max_matches=4, distance_threshold=0.35, metric=PatchMetric.L1),
        PatchConfig(patch_size=3, radius=2, max_matches=4, distance_threshold=0.5, metric=PatchMetric.NCC),
    ],
)
@pytest.mark.parametrize("seed", range(2))
def test_matches_equal_exhaustive_search(config: PatchConfig, seed: int) -> None:
    """Test the vectorized search against the per-pixel reference implementation."""
    source, target = random_frame(2 * seed), random_frame(2 * seed + 1)
    fast = find_matches(source, target, config)
    slow = find_matches_bruteforce(source, target, config)
    fast.validate(config)
    slow.validate(config)
    assert fast.total_matches > 0
    assert np.array_equal(fast.counts, slow.counts)
    assert np.array_equal(fast.positions, slow.positions)
    assert np.allclose(fast.distances, slow.distances, rtol=0, atol=1e-12)


def test_zero_threshold_yields_no_matches() -> None:
    """Test that the strict threshold excludes even identical patches at D = 0."""
    frame = random_frame(0)
    match_set = find_matches(frame, frame, PatchConfig(distance_threshold=0.0))
    assert match_set.total_matches == 0
    assert match_set.pairs().distance.size == 0


def test_self_matching() -> None:
    """Test that every pixel of a textured frame matches itself first."""
    frame = random_frame(3)
    match_set = find_matches(frame, frame, PatchConfig(max_matches=1, distance_threshold=0.01))
    assert np.all(match_set.counts == 1)
    ys, xs = np.mgrid[0 : frame.height, 0 : frame.width]
    assert np.array_equal(match_set.positions[..., 0, 0], xs)
    assert np.array_equal(match_set.positions[..., 0, 1], ys)
    assert np.all(match_set.distances[..., 0] == 0.0)


def test_ties_follow_row_major_candidate_order() -> None:
    """Test that equally distant candidates are ranked by their position in the search window."""
    frame = lab_frame(np.full((10, 10, 3), 0.5))
    config = PatchConfig(radius=1, max_matches=3, distance_threshold=0.1, dilation=1)
    match_set = find_matches(frame, frame, config)
    assert [p for p, _ in match_set.matches_at((5, 5))] == [(4, 4), (5, 4), (6, 4)]
    assert [p for p, _ in match_set.matches_at((0, 0))] == [(0, 0), (1, 0), (0, 1)]
    assert np.all(match_set.counts == 3)


def test_smaller_k_keeps_a_prefix() -> None:
    """Test that reducing K keeps the best matches of a larger K."""
    source, target = random_frame(4), random_frame(5)
    config = PatchConfig(radius=3, max_matches=7, distance_threshold=0.45, dilation=1)
    large = find_matches(source, target, config)
    small = find_matches(source, target, config.replace(max_matches=3))
    assert np.array_equal(small.counts, np.minimum(large.counts, 3))
    used = np.arange(3)[None, None, :] < small.counts[..., None]
    assert np.array_equal(small.positions[used], large.positions[:, :, :3][used])
    assert np.array_equal(small.distances[used], large.distances[:, :, :3][used])


@pytest.mark.parametrize("metric", list(PatchMetric))
@pytest.mark.parametrize("dilation", [1, 3])
@pytest.mark.parametrize("radius", [1, 2])
@pytest.mark.parametrize("max_matches", [1, 3, 5])
def test_default_threshold_matches_equal_exhaustive_search(
    max_matches: int, radius: int, dilation: int, metric: PatchMetric
) -> None:
    """Test the vectorized search against the reference on low-contrast frames at the default threshold."""
    rng = np.random.default_rng(max_matches + 10 * radius + 100 * dilation)
    lab = 0.5 + 0.02 * rng.random((12, 14, 3))
    source = lab_frame(lab)
    target = lab_frame(np.clip(lab + 1e-3 * rng.standard_normal(lab.shape), 0.0, 1.0))
    config = PatchConfig(radius=radius, max_matches=max_matches, dilation=dilation, metric=metric)
    assert config.distance_threshold == 0.05
    fast = find_matches(source, target, config)
    slow = find_matches_bruteforce(source, target, config)
    assert fast.total_matches > 0
    assert np.array_equal(fast.counts, slow.counts)
    assert np.array_equal(fast.positions, slow.positions)
    assert np.allclose(fast.distances, slow.distances, rtol=0, atol=1e-12)


@pytest.mark.parametrize("metric", list(PatchMetric))
def test_raising_the_threshold_keeps_every_match(metric: PatchMetric) -> None:
    """Test that a larger threshold only appends matches behind the ones found before."""
    source, target = random_frame(6), random_frame(7)
    config = PatchConfig(radius=2, max_matches=5, dilation=1, metric=metric)
    previous = None
    for threshold in (0.05, 0.1, 0.2, 0.3, 0.45, 0.6):
        current = find_matches(source, target, config.replace(distance_threshold=threshold))
        if previous is not None:
            assert np.all(current.counts >= previous.counts)
            kept = np.arange(config.max_matches)[None, None, :] < previous.counts[..., None]
            assert np.array_equal(current.positions[kept], previous.positions[kept])
            assert np.array_equal(current.distances[kept], previous.distances[kept])
        previous = current
    assert previous is not None
    assert previous.total_matches > 0


def test_validate_detects_violations() -> None:
    """Test that inconsistent match sets fail validation."""
    config = PatchConfig(radius=1, max_matches=2, distance_threshold=0.5, dilation=1)
    positions = np.full((1, 3, 2, 2), -1)
    distances = np.full((1, 3, 2), np.inf)
    counts = np.zeros((1, 3), dtype=np.int64)
    positions[0, 1, :2] = [[0, 0], [2, 0]]
    distances[0, 1, :2] = [0.3, 0.1]
    counts[0, 1] = 2
    with pytest.raises(ValidationError, match="ascending"):
        MatchSet(0, 1, positions, distances, counts).validate(config)

    distances[0, 1, :2] = [0.1, 0.6]
    with pytest.raises(ValidationError, match="distances"):
        MatchSet(0, 1, positions, distances, counts).validate(config)

    distances[0, 1, :2] = [0.1, 0.2]
    MatchSet(0, 1, positions, distances, counts).validate(config)
    with pytest.raises(ValidationError, match="window"):
        MatchSet(0, 1, positions, distances, counts).validate(config.replace(dilation=2))


@pytest.mark.parametrize("n_frames", range(2, 11))
def test_connection_counts(n_frames: int) -> None:
    """Test the number and shape of the frame pairs of every scheme."""
    dense = build_tube_connections(n_frames, ConnectionScheme.DENSE)
    sequential = build_tube_connections(n_frames, ConnectionScheme.SEQUENTIAL)
    cyclic = build_tube_connections(n_frames, "cyclic")
    assert len(dense) == n_frames * (n_frames - 1) // 2
    assert len(sequential) == n_frames - 1
    assert len(cyclic) == n_frames
    assert all(t < t_hat for t, t_hat in dense)
    assert len(set(dense)) == len(dense)
    assert cyclic[:-1] == sequential
    assert cyclic[-1] == (n_frames - 1, 0)


def test_connections_need_two_frames() -> None:
    """Test that single frames have no temporal connections."""
    with pytest.raises(ValidationError):
        build_tube_connections(1, ConnectionScheme.DENSE)
    with pytest.raises(ValidationError):
        build_tube_connections(3, "random")


def hand_made_match_set(source_frame: int = 0, target_frame: int = 1) -> MatchSet:
    """Creates a 2x2 match set with three matches.

    Args:
        source_frame (int, optional): The source frame index.
        target_frame (int, optional): The target frame index.

    Returns:
        MatchSet: The match set.
    """
    positions = np.full((2, 2, 2, 2), -1)
    distances = np.full((2, 2, 2), np.inf)
    counts = np.zeros((2, 2), dtype=np.int64)
    positions[0, 0, :2] = [[0, 0], [1, 0]]
    distances[0, 0, :2] = [0.01, 0.02]
    counts[0, 0] = 2
    positions[0, 1, 0] = [1, 1]
    distances[0, 1, 0] = 0.03
    counts[0, 1] = 1
    return MatchSet(source_frame, target_frame, positions, distances, counts)


def test_pair_accuracy() -> None:
    """Test the label agreement of hand-made matches."""
    match_set = hand_made_match_set()
    source_labels = np.array([[1, 1], [0, 0]])
    target_labels = np.array([[1, 0], [0, 1]])
    assert pair_accuracy(match_set, source_labels, target_labels) == pytest.approx(2 / 3)
    assert match_set.matches_at((0, 0)) == [((0, 0), 0.01), ((1, 0), 0.02)]
    assert match_set.matches_at((1, 1)) == []


def test_correspondence_accuracy() -> None:
    """Test that empty frame pairs are skipped and missing label maps are rejected."""
    labels = [np.array([[1, 1], [0, 0]]), np.array([[1, 0], [0, 1]])]
    empty = MatchSet(1, 0, np.full((2, 2, 1, 2), -1), np.full((2, 2, 1), np.inf), np.zeros((2, 2), dtype=np.int64))
    assert correspondence_accuracy([hand_made_match_set(), empty], labels) == pytest.approx(2 / 3)
    assert correspondence_accuracy([empty], labels) is None
    with pytest.raises(ValidationError):
        correspondence_accuracy([hand_made_match_set(0, 5)], labels)


def test_static_tube_matches_are_accurate() -> None:
    """Test that a noise-free static tube is matched within instances."""
    spec = SyntheticSpec.from_dict(json.loads((BASE_PATH / "static-rectangle.json").read_text(encoding="utf-8")))
    tube = generate_synthetic_tube(spec)
    config = PatchConfig()
    match_sets = compute_match_sets(tube, config, ConnectionScheme.CYCLIC)
    assert [(m.source_frame, m.target_frame) for m in match_sets] == [(0, 1), (1, 2), (2, 0)]
    for match_set in match_sets:
        match_set.validate(config)
    accuracy = correspondence_accuracy(match_sets, tube.instance_label_maps())
    assert accuracy is not None
    assert accuracy >= 0.99


RIGID_VELOCITIES = [
    ((2, 0), (0, 1)),
    ((1, 1), (1, 0)),
    ((0, 2), (-1, -1)),
    ((-1, 1), (1, -1)),
    ((-2, 0), (0, -2)),
]


def rigid_motion_spec(seed: int) -> SyntheticSpec:
    """Creates a variant of the shipped rigid-motion tube with other velocities and noise.

    Args:
        seed (int): The variant, an index into `RIGID_VELOCITIES` that also seeds the noise.

    Returns:
        SyntheticSpec: The tube specification.
    """
    path = Path(__file__).parents[2] / "configs" / "rigid-motion.json"
    data = json.loads(path.read_text(encoding="utf-8"))["synthetic"]
    data["seed"] = seed
    for instance, velocity in zip(data["instances"], RIGID_VELOCITIES[seed]):
        instance["velocity"] = list(velocity)
    return SyntheticSpec.from_dict(data)


def test_rigid_motion_matches_are_accurate() -> None:
    """Test the default search on noisy rigidly moving shapes."""
    accuracies = []
    for seed in range(len(RIGID_VELOCITIES)):
        spec = rigid_motion_spec(seed)
        assert (spec.height, spec.width, spec.n_frames, spec.noise_sigma) == (64, 64, 5, 0.01)
        tube = generate_synthetic_tube(spec)
        match_sets = compute_match_sets(tube, PatchConfig(), ConnectionScheme.CYCLIC)
        accuracy = correspondence_accuracy(match_sets, tube.instance_label_maps())
        assert accuracy is not None
        accuracies.append(accuracy)
    assert np.mean(accuracies) >= 0.95


def test_thread_count_does_not_change_matches(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test that parallel matching returns the sequential result."""
    spec = SyntheticSpec.from_dict(json.loads((BASE_PATH / "moving-shapes.json").read_text(encoding="utf-8")))
    tube = generate_synthetic_tube(spec)
    monkeypatch.setenv("MFVIS_THREADS", "1")
    sequential = compute_match_sets(tube, scheme=ConnectionScheme.DENSE)
    monkeypatch.setenv("MFVIS_THREADS", "4")
    parallel = compute_match_sets(tube, scheme=ConnectionScheme.DENSE)
    assert len(sequential) == len(parallel) == 6
    for a, b in zip(sequential, parallel):
        assert (a.source_frame, a.target_frame) == (b.source_frame, b.target_frame)
        assert np.array_equal(a.positions, b.positions)
    monkeypatch.setenv("MFVIS_THREADS", "zero")
    with pytest.raises(ValidationError):
        compute_match_sets(tube)


def test_matchset_storage(tmp_path: Path) -> None:
    """Test that stored match sets keep positions and single-precision distances."""
    config = PatchConfig(radius=2, max_matches=4, distance_threshold=0.45, dilation=1)
    match_set = find_matches(random_frame(6), random_frame(7), config, source_frame=3, target_frame=4)
    data = encode_matchset(match_set)
    assert len(data) == matchset_nbytes(match_set)
    assert data.startswith(MATCH_MAGIC)

    save_matchset(match_set, tmp_path / "match.bin")
    loaded = load_matchset(tmp_path / "match.bin")
    assert (loaded.source_frame, loaded.target_frame) == (3, 4)
    assert np.array_equal(loaded.counts, match_set.counts)
    assert np.array_equal(loaded.positions, match_set.positions)
    assert np.allclose(loaded.distances, match_set.distances, rtol=1e-6, atol=0)
    loaded.validate(config)


def test_malformed_matchsets(tmp_path: Path) -> None:
    """Test the errors raised for broken match-set data."""
    data = encode_matchset(hand_made_match_set())
    with pytest.raises(TruncatedPayloadError):
        decode_matchset(data[:-1])
    with pytest.raises(FormatError):
        decode_matchset(data + b"\0")
    with pytest.raises(FormatError):
        decode_matchset(b"MFVISXXX" + data[8:])
    too_many = MATCH_MAGIC + np.array([0, 1, 1, 1, 1], dtype="<u4").tobytes() + bytes((2,))
    with pytest.raises(FormatError):
        decode_matchset(too_many)
    with pytest.raises(FormatError):
        load_matchset(tmp_path / "missing.bin")


def test_correspondence_overlay() -> None:
    """Test the size of the side-by-side overlay."""
    source, target = random_frame(8), random_frame(9)
    match_set = find_matches(source, target, PatchConfig(distance_threshold=0.45, dilation=1, radius=2))
    image = render_correspondence_overlay(match_set, source, target, n_points=10, scale=3)
    assert image.size == (2 * 12 * 3, 10 * 3)
    assert image.mode == "RGB"
