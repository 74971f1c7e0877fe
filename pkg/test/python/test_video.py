# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Tests frames, synthetic tube generation and the tube and mask-field file formats."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from mfvis import DimensionMismatchError, FormatError, TruncatedPayloadError, ValidationError
from mfvis.video import (
    Frame,
    InstanceSpec,
    MaskField,
    OccluderSpec,
    ShapeKind,
    SyntheticSpec,
    Tube,
    fill_box,
    generate_synthetic_tube,
    load_field_values,
    load_maskfield,
    load_tube,
    rgb_to_lab,
    save_field_values,
    save_maskfield,
    save_tube,
    tight_box,
)

BASE_PATH = Path(__file__).parent / "resources" / "synthetic"


def load_spec(name: str) -> SyntheticSpec:
    """Loads a synthetic specification from the test resources.

    Args:
        name (str): The name of the specification file, without extension.

    Returns:
        SyntheticSpec: The parsed specification.
    """
    return SyntheticSpec.from_dict(json.loads((BASE_PATH / f"{name}.json").read_text(encoding="utf-8")))


@pytest.mark.parametrize(
    ("rgb", "expected"),
    [
        ((255, 255, 255), (1.0, 128 / 255, 128 / 255)),
        ((0, 0, 0), (0.0, 128 / 255, 128 / 255)),
        ((255, 0, 0), (53.24 / 100, (80.09 + 128) / 255, (67.20 + 128) / 255)),
    ],
)
def test_rgb_to_lab_reference_colors(rgb: tuple[int, int, int], expected: tuple[float, float, float]) -> None:
    """Test the normalized Lab values of a few reference colors."""
    frame = rgb_to_lab(np.full((2, 3, 3), rgb, dtype=np.uint8))
    assert frame.height == 2
    assert frame.width == 3
    assert tuple(frame.lab[1, 2]) == pytest.approx(expected, abs=2e-3)
    assert np.all(frame.rgb == rgb)


def reference_lab(rgb: np.ndarray) -> np.ndarray:
    """Converts 8-bit sRGB colors to normalized Lab with the textbook formulas.

    Args:
        rgb (np.ndarray): Colors of shape (..., 3).

    Returns:
        np.ndarray: The Lab values rescaled to [0, 1] like frame Lab channels.
    """
    c = rgb.astype(np.float64) / 255.0
    linear = np.where(c > 0.04045, ((c + 0.055) / 1.055) ** 2.4, c / 12.92)
    matrix = np.array([
        [0.412453, 0.357580, 0.180423],
        [0.212671, 0.715160, 0.072169],
        [0.019334, 0.119193, 0.950227],
    ])
    xyz = linear @ matrix.T / np.array([0.95047, 1.0, 1.08883])
    f = np.where(xyz > 0.008856, np.cbrt(xyz), 7.787 * xyz + 16.0 / 116.0)
    lab = np.stack(
        [116.0 * f[..., 1] - 16.0, 500.0 * (f[..., 0] - f[..., 1]), 200.0 * (f[..., 1] - f[..., 2])], axis=-1
    )
    return np.clip((lab + np.array([0.0, 128.0, 128.0])) / np.array([100.0, 255.0, 255.0]), 0.0, 1.0)


def test_rgb_to_lab_mid_gray() -> None:
    """Test that sRGB gray 119 sits at half lightness without chroma."""
    frame = rgb_to_lab(np.full((1, 1, 3), 119, dtype=np.uint8))
    assert tuple(frame.lab[0, 0]) == pytest.approx((0.5003, 128 / 255, 128 / 255), abs=1e-3)


def test_rgb_to_lab_against_formula() -> None:
    """Test 1000 random colors against an independent implementation of the conversion."""
    rgb = np.random.default_rng(7).integers(0, 256, size=(25, 40, 3), dtype=np.uint8)
    frame = rgb_to_lab(rgb)
    assert np.abs(frame.lab - reference_lab(rgb)).max() < 1e-3


def test_rgb_to_lab_range() -> None:
    """Test that arbitrary colors map into the unit cube."""
    rng = np.random.default_rng(0)
    frame = rgb_to_lab(rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8))
    assert frame.lab.min() >= 0.0
    assert frame.lab.max() <= 1.0


def test_frame_validation() -> None:
    """Test that malformed frames are rejected."""
    with pytest.raises(ValidationError):
        rgb_to_lab(np.zeros((4, 4), dtype=np.uint8))
    with pytest.raises(ValidationError):
        Frame(rgb=np.zeros((4, 4, 3), dtype=np.float64), lab=np.zeros((4, 4, 3)))
    with pytest.raises(DimensionMismatchError):
        Frame(rgb=np.zeros((4, 4, 3), dtype=np.uint8), lab=np.zeros((4, 5, 3)))
    with pytest.raises(ValidationError):
        Frame(rgb=np.zeros((4, 4, 3), dtype=np.uint8), lab=np.full((4, 4, 3), 1.5))


def test_frame_arrays_are_read_only() -> None:
    """Test that frame pixel data cannot be modified."""
    frame = rgb_to_lab(np.zeros((3, 3, 3), dtype=np.uint8))
    with pytest.raises(ValueError, match="read-only"):
        frame.lab[0, 0, 0] = 0.5


def test_tight_and_filled_boxes() -> None:
    """Test the conversion between masks and boxes."""
    mask = np.zeros((6, 8), dtype=bool)
    assert tight_box(mask) is None
    mask[2:4, 3:7] = True
    assert tight_box(mask) == (3, 2, 7, 4)
    assert np.array_equal(fill_box((3, 2, 7, 4), 6, 8), mask)
    assert not fill_box(None, 6, 8).any()


def test_static_rectangle() -> None:
    """Test that a static rectangle produces exact masks and boxes in every frame."""
    tube = generate_synthetic_tube(load_spec("static-rectangle"))
    assert tube.n_frames == 3
    assert tube.n_instances == 1
    assert tube.gt_masks is not None
    assert tube.gt_boxes is not None
    expected = fill_box((6, 8, 18, 18), 24, 24)
    for t in range(3):
        assert np.array_equal(tube.gt_masks[0, t], expected)
        assert tuple(tube.gt_boxes[0, t]) == (6, 8, 18, 18)
        assert np.all(tube.frames[t].rgb[expected] == (220, 60, 60))
        assert np.all(tube.frames[t].rgb[~expected] == (40, 90, 160))


def test_moving_rectangle_boxes() -> None:
    """Test that boxes follow an integer velocity."""
    spec = SyntheticSpec(
        instances=(InstanceSpec(ShapeKind.RECTANGLE, (10, 12, 30, 28), (200, 40, 40), velocity=(2, 1)),),
        height=48,
        width=48,
        n_frames=4,
    )
    tube = generate_synthetic_tube(spec)
    assert tube.gt_boxes is not None
    for t in range(4):
        assert tuple(tube.gt_boxes[0, t]) == (10 + 2 * t, 12 + t, 30 + 2 * t, 28 + t)


def test_disk_and_polygon_shapes() -> None:
    """Test the rasterization of disks and polygons."""
    disk = InstanceSpec(ShapeKind.DISK, (8, 8, 3), (255, 255, 255))
    mask = disk.rasterize(0, 16, 16)
    ys, xs = np.mgrid[0:16, 0:16] + 0.5
    assert np.array_equal(mask, (xs - 8) ** 2 + (ys - 8) ** 2 <= 9)

    triangle = InstanceSpec(ShapeKind.POLYGON, (0, 0, 8, 0, 0, 8), (255, 255, 255))
    mask = triangle.rasterize(0, 8, 8)
    assert np.array_equal(mask, xs[:8, :8] + ys[:8, :8] < 8)
    assert triangle.extent() == (0.0, 0.0, 8.0, 8.0)


def test_painters_order() -> None:
    """Test that later instances occlude earlier ones."""
    tube = generate_synthetic_tube(load_spec("overlapping-rectangles"))
    assert tube.gt_masks is not None
    first = fill_box((4, 4, 20, 20), 32, 32)
    second = fill_box((12, 12, 28, 28), 32, 32)
    assert np.array_equal(tube.gt_masks[0, 0], first & ~second)
    assert np.array_equal(tube.gt_masks[1, 0], second)
    assert np.all(tube.frames[0].rgb[first & second] == (60, 200, 80))
    labels = tube.instance_label_maps()
    assert labels[0, 14, 14] == 2
    assert labels[0, 5, 5] == 1
    assert labels[0, 30, 1] == 0


def test_occluder() -> None:
    """Test that the occluder hides instances without being annotated."""
    tube = generate_synthetic_tube(load_spec("occluded"))
    assert tube.gt_masks is not None
    assert tube.gt_boxes is not None
    assert np.array_equal(tube.gt_masks[0, 0], fill_box((10, 4, 20, 20), 32, 32))
    assert tuple(tube.gt_boxes[0, 1]) == (10, 4, 20, 20)
    assert np.all(tube.frames[1].rgb[:, :10] == (200, 200, 200))


def test_invisible_instances_are_rejected() -> None:
    """Test that instances hidden by the occluder or leaving the frame are rejected."""
    hidden = SyntheticSpec(
        instances=(InstanceSpec(ShapeKind.RECTANGLE, (4, 4, 8, 8), (255, 0, 0)),),
        height=16,
        width=16,
        n_frames=1,
        occluder=OccluderSpec((0, 0, 16, 16), (0, 0, 0)),
    )
    with pytest.raises(ValidationError):
        generate_synthetic_tube(hidden)

    leaving = SyntheticSpec(
        instances=(InstanceSpec(ShapeKind.RECTANGLE, (0, 0, 4, 4), (255, 0, 0), velocity=(-5, 0)),),
        height=16,
        width=16,
        n_frames=2,
    )
    with pytest.raises(ValidationError):
        generate_synthetic_tube(leaving)


@pytest.mark.parametrize(
    "instance",
    [
        {"kind": "rectangle", "geometry": [4, 4, 2, 8], "color": [0, 0, 0]},
        {"kind": "disk", "geometry": [4, 4, 0], "color": [0, 0, 0]},
        {"kind": "polygon", "geometry": [0, 0, 4, 4], "color": [0, 0, 0]},
        {"kind": "hexagon", "geometry": [0, 0, 4, 4], "color": [0, 0, 0]},
        {"kind": "rectangle", "geometry": [0, 0, 4, 4], "color": [0, 0, 256]},
        {"kind": "rectangle", "geometry": [0, 0, 40, 4], "color": [0, 0, 0]},
        {"kind": "rectangle", "geometry": [0, 0, 4, 4], "color": [0, 0, 0], "speed": 1},
    ],
)
def test_invalid_specifications(instance: dict[str, object]) -> None:
    """Test that invalid synthetic specifications are rejected."""
    with pytest.raises(ValidationError):
        SyntheticSpec.from_dict({"height": 16, "width": 16, "instances": [instance]})


def test_specification_dict_round_trip() -> None:
    """Test that a specification survives the conversion to JSON."""
    spec = load_spec("moving-shapes")
    assert SyntheticSpec.from_dict(json.loads(json.dumps(spec.to_dict()))) == spec
    assert spec.shape_kinds == (ShapeKind.RECTANGLE, ShapeKind.DISK)


def test_generation_is_deterministic() -> None:
    """Test that the seed fully determines the noise."""
    spec = load_spec("moving-shapes")
    first = generate_synthetic_tube(spec)
    second = generate_synthetic_tube(spec)
    other = generate_synthetic_tube(SyntheticSpec.from_dict({**spec.to_dict(), "seed": 6}))
    for a, b, c in zip(first.frames, second.frames, other.frames):
        assert np.array_equal(a.rgb, b.rgb)
        assert not np.array_equal(a.rgb, c.rgb)
    assert first.gt_masks is not None
    assert other.gt_masks is not None
    assert np.array_equal(first.gt_masks, other.gt_masks)


def test_tube_validation() -> None:
    """Test that inconsistent annotations are rejected."""
    frames = (rgb_to_lab(np.zeros((8, 8, 3), dtype=np.uint8)),) * 2
    with pytest.raises(DimensionMismatchError):
        Tube(frames=frames, gt_boxes=np.zeros((1, 3, 4), dtype=np.int64))
    with pytest.raises(ValidationError):
        Tube(frames=frames, gt_boxes=np.array([[[0, 0, 9, 4], [0, 0, 4, 4]]]))
    with pytest.raises(ValidationError):
        Tube(frames=frames, gt_boxes=np.array([[[2, 0, 2, 4], [0, 0, 4, 4]]]))
    with pytest.raises(DimensionMismatchError):
        Tube(frames=(*frames, rgb_to_lab(np.zeros((8, 9, 3), dtype=np.uint8))))
    with pytest.raises(ValidationError):
        Tube(frames=())


def test_tube_helpers() -> None:
    """Test box rasterization and truncation."""
    tube = generate_synthetic_tube(load_spec("moving-shapes"))
    assert tube.gt_masks is not None
    boxes = tube.box_masks()
    assert boxes.shape == (2, 4, 40, 48)
    assert np.all(boxes[tube.gt_masks])
    short = tube.truncated(2)
    assert short.n_frames == 2
    assert short.n_instances == 2
    assert short.lab.shape == (2, 40, 48, 3)
    with pytest.raises(ValidationError):
        tube.truncated(0)
    with pytest.raises(ValidationError):
        Tube(frames=tube.frames).box_masks()


def test_mask_field_validation() -> None:
    """Test the mask-field value and shape contract."""
    tube = generate_synthetic_tube(load_spec("static-rectangle"))
    field = MaskField.constant(tube, 0.25)
    assert field.shape == (1, 3, 24, 24)
    field.check_matches(tube, require_instances=True)
    with pytest.raises(ValidationError):
        MaskField(np.full((1, 3, 24, 24), 1.5))
    with pytest.raises(ValidationError):
        MaskField(np.full((3, 24, 24), 0.5))
    with pytest.raises(DimensionMismatchError):
        MaskField(np.full((1, 2, 24, 24), 0.5)).check_matches(tube)
    with pytest.raises(DimensionMismatchError):
        MaskField.constant(tube, 0.5, n_instances=2).check_matches(tube, require_instances=True)


def test_tube_round_trip(tmp_path: Path) -> None:
    """Test that a stored tube is read back unchanged."""
    tube = generate_synthetic_tube(load_spec("moving-shapes"))
    save_tube(tube, tmp_path / "tube")
    assert (tmp_path / "tube" / "frame_0003.png").is_file()
    loaded = load_tube(tmp_path / "tube")
    assert loaded.n_frames == tube.n_frames
    for a, b in zip(tube.frames, loaded.frames):
        assert np.array_equal(a.rgb, b.rgb)
        assert np.array_equal(a.lab, b.lab)
    assert loaded.gt_boxes is not None
    assert tube.gt_boxes is not None
    assert np.array_equal(loaded.gt_boxes, tube.gt_boxes)
    assert loaded.gt_masks is not None
    assert tube.gt_masks is not None
    assert np.array_equal(loaded.gt_masks, tube.gt_masks)
    assert loaded.spec == tube.spec


def test_tube_without_annotations(tmp_path: Path) -> None:
    """Test that tubes without annotations can be stored."""
    frames = tuple(rgb_to_lab(np.full((5, 6, 3), v, dtype=np.uint8)) for v in (10, 20))
    save_tube(Tube(frames=frames), tmp_path)
    loaded = load_tube(tmp_path)
    assert loaded.n_instances == 0
    assert loaded.gt_boxes is None
    assert loaded.gt_masks is None


def test_malformed_tube_directories(tmp_path: Path) -> None:
    """Test that broken tube directories raise format errors."""
    with pytest.raises(FormatError):
        load_tube(tmp_path)

    tube = generate_synthetic_tube(load_spec("static-rectangle"))
    save_tube(tube, tmp_path)
    Image.fromarray(np.zeros((24, 20, 3), dtype=np.uint8)).save(tmp_path / "frame_0001.png")
    with pytest.raises(DimensionMismatchError):
        load_tube(tmp_path)

    Image.fromarray(np.zeros((24, 24), dtype=np.uint8)).save(tmp_path / "frame_0001.png")
    with pytest.raises(FormatError):
        load_tube(tmp_path)

    (tmp_path / "frame_0001.png").unlink()
    with pytest.raises(FormatError):
        load_tube(tmp_path)

    (tmp_path / "tube.json").write_text("{not json", encoding="utf-8")
    with pytest.raises(FormatError):
        load_tube(tmp_path)


@pytest.mark.parametrize("seed", range(3))
def test_mask_field_round_trip(tmp_path: Path, seed: int) -> None:
    """Test that stored mask fields reload bit for bit."""
    rng = np.random.default_rng(seed)
    values = rng.random((2, 3, 5, 7))
    field = MaskField(values)
    assert np.array_equal(field.values, values.astype(np.float32))
    save_maskfield(field, tmp_path / "masks.bin")
    assert (tmp_path / "masks.bin").stat().st_size == 16 + 16 + 2 * 3 * 5 * 7 * 4
    loaded = load_maskfield(tmp_path / "masks.bin")
    assert loaded.shape == field.shape
    assert np.array_equal(loaded.values, field.values)
    save_maskfield(loaded, tmp_path / "again.bin")
    assert (tmp_path / "again.bin").read_bytes() == (tmp_path / "masks.bin").read_bytes()


def test_malformed_mask_fields(tmp_path: Path) -> None:
    """Test the errors raised for broken mask-field files."""
    path = tmp_path / "masks.bin"
    with pytest.raises(FormatError):
        load_field_values(path)

    save_field_values(np.full((1, 2, 3, 4), 0.5), path)
    data = path.read_bytes()

    path.write_bytes(data[:-1])
    with pytest.raises(TruncatedPayloadError):
        load_field_values(path)

    path.write_bytes(data + b"\0")
    with pytest.raises(FormatError):
        load_field_values(path)

    path.write_bytes(b"X" + data[1:])
    with pytest.raises(FormatError):
        load_field_values(path)

    save_field_values(np.full((1, 2, 3, 4), 2.0), path)
    with pytest.raises(FormatError):
        load_maskfield(path)

    tube = generate_synthetic_tube(load_spec("static-rectangle"))
    save_field_values(np.full((1, 2, 24, 24), 0.5), path)
    with pytest.raises(DimensionMismatchError):
        load_maskfield(path, tube)
