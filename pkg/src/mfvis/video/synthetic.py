# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Generation of synthetic tubes of translating shapes with exact ground-truth masks."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from ..configuration import from_mapping, parse_enum, to_mapping
from ..errors import ValidationError
from .color import rgb_to_lab
from .model import Box, Tube, fill_box, tight_box

logger = logging.getLogger(__name__)

Color = tuple[int, int, int]


class ShapeKind(str, enum.Enum):
    """The shape of a synthetic instance."""

    RECTANGLE = "rectangle"
    DISK = "disk"
    POLYGON = "polygon"


def _color(value: Any, name: str) -> Color:  # noqa: ANN401
    rgb = tuple(int(c) for c in value)
    if len(rgb) != 3 or any(not 0 <= c <= 255 for c in rgb):
        msg = f"{name} must be three integers in [0, 255], got {value}."
        raise ValidationError(msg)
    return rgb  # type: ignore[return-value]


@dataclass(frozen=True)
class InstanceSpec:
    """A single moving shape.

    The geometry depends on the shape kind:
    a rectangle is `(x_min, y_min, x_max, y_max)`,
    a disk is `(center_x, center_y, radius)`
    and a polygon is the flat vertex list `(x_0, y_0, x_1, y_1, ...)`.
    All values are in pixels at frame 0; the shape is offset by `t * velocity` in frame `t`.
    """

    kind: ShapeKind
    geometry: tuple[float, ...]
    color: Color
    velocity: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        """Validate the geometry for the given shape kind."""
        kind = parse_enum(ShapeKind, self.kind, "shape kind")
        geometry = tuple(float(v) for v in self.geometry)
        velocity = tuple(float(v) for v in self.velocity)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "geometry", geometry)
        object.__setattr__(self, "velocity", velocity)
        object.__setattr__(self, "color", _color(self.color, "Instance color"))
        if len(velocity) != 2 or not np.all(np.isfinite(velocity)):
            msg = f"Velocity must be a finite (vx, vy) pair, got {self.velocity}."
            raise ValidationError(msg)
        if not np.all(np.isfinite(geometry)):
            msg = "Shape geometry must be finite."
            raise ValidationError(msg)
        if kind is ShapeKind.RECTANGLE and (
            len(geometry) != 4 or geometry[0] >= geometry[2] or geometry[1] >= geometry[3]
        ):
            msg = f"A rectangle needs (x_min, y_min, x_max, y_max) with positive extent, got {geometry}."
            raise ValidationError(msg)
        if kind is ShapeKind.DISK and (len(geometry) != 3 or geometry[2] <= 0):
            msg = f"A disk needs (center_x, center_y, radius) with a positive radius, got {geometry}."
            raise ValidationError(msg)
        if kind is ShapeKind.POLYGON and (len(geometry) < 6 or len(geometry) % 2):
            msg = f"A polygon needs at least three (x, y) vertices, got {len(geometry)} values."
            raise ValidationError(msg)

    def extent(self) -> tuple[float, float, float, float]:
        """The bounding box of the shape at frame 0 as `(x_min, y_min, x_max, y_max)`."""
        g = self.geometry
        if self.kind is ShapeKind.RECTANGLE:
            return g[0], g[1], g[2], g[3]
        if self.kind is ShapeKind.DISK:
            return g[0] - g[2], g[1] - g[2], g[0] + g[2], g[1] + g[2]
        xs, ys = g[0::2], g[1::2]
        return min(xs), min(ys), max(xs), max(ys)

    def rasterize(self, t: int, height: int, width: int) -> npt.NDArray[np.bool_]:
        """Rasterize the shape in frame `t`, sampling every pixel at its centre.

        Args:
            t (int): The frame index.
            height (int): The frame height.
            width (int): The frame width.

        Returns:
            npt.NDArray[np.bool_]: The shape's mask of shape (H, W), clipped to the frame.
        """
        dx, dy = t * self.velocity[0], t * self.velocity[1]
        ys, xs = np.mgrid[0:height, 0:width].astype(np.float64) + 0.5
        xs -= dx
        ys -= dy
        g = self.geometry
        if self.kind is ShapeKind.RECTANGLE:
            return (xs >= g[0]) & (xs < g[2]) & (ys >= g[1]) & (ys < g[3])
        if self.kind is ShapeKind.DISK:
            return (xs - g[0]) ** 2 + (ys - g[1]) ** 2 <= g[2] ** 2
        # even-odd rule
        inside = np.zeros((height, width), dtype=bool)
        vx, vy = g[0::2], g[1::2]
        for k in range(len(vx)):
            x0, y0 = vx[k], vy[k]
            x1, y1 = vx[k - 1], vy[k - 1]
            if y0 == y1:
                continue
            crosses = (y0 > ys) != (y1 > ys)
            x_cross = (x1 - x0) * (ys - y0) / (y1 - y0) + x0
            inside ^= crosses & (xs < x_cross)
        return inside


@dataclass(frozen=True)
class OccluderSpec:
    """A static box painted on top of all instances."""

    box: Box
    color: Color

    def __post_init__(self) -> None:
        """Validate the box."""
        box = tuple(int(v) for v in self.box)
        if len(box) != 4 or box[0] >= box[2] or box[1] >= box[3]:
            msg = f"An occluder needs a box (x_min, y_min, x_max, y_max) with positive extent, got {self.box}."
            raise ValidationError(msg)
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "color", _color(self.color, "Occluder color"))


@dataclass(frozen=True)
class SyntheticSpec:
    """A description of a synthetic tube.

    Instances are painted in list order, so later instances occlude earlier ones, and the optional
    occluder is painted last. Gaussian noise with standard deviation `noise_sigma` (in units of the
    full 8-bit channel range) is added before quantization to 8 bits.
    """

    instances: tuple[InstanceSpec, ...]
    height: int = 64
    width: int = 64
    n_frames: int = 5
    background: Color = (30, 30, 30)
    noise_sigma: float = 0.0
    occluder: OccluderSpec | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        """Validate the frame geometry and all instances."""
        object.__setattr__(self, "instances", tuple(self.instances))
        object.__setattr__(self, "background", _color(self.background, "Background color"))
        if not self.instances:
            msg = "A synthetic tube needs at least one instance."
            raise ValidationError(msg)
        if self.height < 1 or self.width < 1 or self.n_frames < 1:
            msg = f"Invalid tube size: {self.n_frames} frames of {self.height}x{self.width} pixels."
            raise ValidationError(msg)
        if not np.isfinite(self.noise_sigma) or self.noise_sigma < 0:
            msg = f"noise_sigma must be non-negative, got {self.noise_sigma}."
            raise ValidationError(msg)
        for i, instance in enumerate(self.instances):
            x_min, y_min, x_max, y_max = instance.extent()
            if x_min < 0 or y_min < 0 or x_max > self.width or y_max > self.height:
                msg = f"Instance {i} does not fit within the {self.height}x{self.width} frame at t=0."
                raise ValidationError(msg)

    @property
    def n_instances(self) -> int:
        """The number of instances."""
        return len(self.instances)

    @property
    def shape_kinds(self) -> tuple[ShapeKind, ...]:
        """The shape kind of every instance."""
        return tuple(instance.kind for instance in self.instances)

    @classmethod
    def from_dict(cls, data: Any) -> SyntheticSpec:  # noqa: ANN401
        """Parse a synthetic specification from a JSON object.

        Args:
            data (Any): The decoded JSON object.

        Returns:
            SyntheticSpec: The parsed specification.
        """
        if not isinstance(data, dict):
            msg = "Configuration section 'synthetic' must be a JSON object."
            raise ValidationError(msg)
        raw_instances = data.get("instances", [])
        if not isinstance(raw_instances, list):
            msg = "'synthetic.instances' must be a list."
            raise ValidationError(msg)
        instances = tuple(
            from_mapping(InstanceSpec, raw, f"synthetic.instances[{i}]") for i, raw in enumerate(raw_instances)
        )
        raw_occluder = data.get("occluder")
        occluder = None if raw_occluder is None else from_mapping(OccluderSpec, raw_occluder, "synthetic.occluder")
        rest = {k: v for k, v in data.items() if k not in {"instances", "occluder"}}
        return from_mapping(cls, rest, "synthetic", instances=instances, occluder=occluder)

    def to_dict(self) -> dict[str, Any]:
        """Convert the specification into a JSON object."""
        return to_mapping(self)


def generate_synthetic_tube(spec: SyntheticSpec) -> Tube:
    """Render a synthetic tube with its ground-truth masks and boxes.

    The ground-truth masks are the visible parts of every instance after painter's-order occlusion,
    the boxes are their tight hulls. The output depends only on `spec`, including its seed.

    Args:
        spec (SyntheticSpec): The tube description.

    Returns:
        Tube: The generated tube.

    Raises:
        ValidationError: If an instance is invisible in some frame, because it left the frame or is fully occluded.
    """
    rng = np.random.default_rng(spec.seed)
    height, width = spec.height, spec.width
    occluder_mask = fill_box(spec.occluder.box if spec.occluder is not None else None, height, width)
    masks = np.zeros((spec.n_instances, spec.n_frames, height, width), dtype=bool)
    frames = []
    for t in range(spec.n_frames):
        image = np.empty((height, width, 3), dtype=np.float64)
        image[...] = spec.background
        shapes = [instance.rasterize(t, height, width) for instance in spec.instances]
        for instance, shape in zip(spec.instances, shapes):
            image[shape] = instance.color
        if spec.occluder is not None:
            image[occluder_mask] = spec.occluder.color

        covered = occluder_mask.copy()
        for i in reversed(range(spec.n_instances)):
            masks[i, t] = shapes[i] & ~covered
            covered |= shapes[i]
            if not masks[i, t].any():
                msg = f"Instance {i} is not visible in frame {t}."
                raise ValidationError(msg)

        if spec.noise_sigma > 0:
            image += rng.normal(0.0, spec.noise_sigma * 255.0, size=image.shape)
        frames.append(rgb_to_lab(np.clip(np.rint(image), 0, 255).astype(np.uint8)))

    boxes = np.array([[tight_box(masks[i, t]) for t in range(spec.n_frames)] for i in range(spec.n_instances)])
    logger.debug("Generated %d frames with %d instances", spec.n_frames, spec.n_instances)
    return Tube(frames=tuple(frames), gt_boxes=boxes, gt_masks=masks, spec=spec.to_dict())
