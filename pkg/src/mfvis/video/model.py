# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Frames, annotated tubes and per-instance mask fields."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np
import numpy.typing as npt

from ..errors import DimensionMismatchError, ValidationError

Box = tuple[int, int, int, int]
"""A half-open pixel box `(x_min, y_min, x_max, y_max)`."""


def _readonly(array: npt.NDArray[Any]) -> npt.NDArray[Any]:
    array.flags.writeable = False
    return array


def tight_box(mask: npt.NDArray[np.bool_]) -> Box | None:
    """Compute the smallest half-open box containing all set pixels of a binary mask.

    Args:
        mask (npt.NDArray[np.bool_]): A binary mask of shape (H, W).

    Returns:
        Box | None: The tight box, or None if no pixel is set.
    """
    ys, xs = np.nonzero(mask)
    if ys.size == 0:
        return None
    return int(xs.min()), int(ys.min()), int(xs.max()) + 1, int(ys.max()) + 1


def fill_box(box: Box | None, height: int, width: int) -> npt.NDArray[np.bool_]:
    """Rasterize a half-open box into a binary mask.

    Args:
        box (Box | None): The box to fill. None yields an empty mask.
        height (int): The mask height.
        width (int): The mask width.

    Returns:
        npt.NDArray[np.bool_]: The filled mask of shape (H, W).
    """
    mask = np.zeros((height, width), dtype=bool)
    if box is not None:
        x_min, y_min, x_max, y_max = box
        mask[y_min:y_max, x_min:x_max] = True
    return mask


@dataclass(frozen=True, eq=False)
class Frame:
    """A single video frame in RGB and normalized CIE-Lab.

    Lab channels are rescaled to [0, 1]: `L / 100`, `(a + 128) / 255` and `(b + 128) / 255`.
    """

    rgb: npt.NDArray[np.uint8]
    lab: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        """Validate and freeze the pixel arrays."""
        rgb = np.asarray(self.rgb)
        lab = np.asarray(self.lab, dtype=np.float64)
        if rgb.dtype != np.uint8 or rgb.ndim != 3 or rgb.shape[2] != 3:
            msg = f"Frame RGB data must be a uint8 array of shape (H, W, 3), got {rgb.dtype} {rgb.shape}."
            raise ValidationError(msg)
        if lab.shape != rgb.shape:
            msg = f"Frame Lab data has shape {lab.shape}, expected {rgb.shape}."
            raise DimensionMismatchError(msg)
        if rgb.shape[0] == 0 or rgb.shape[1] == 0:
            msg = "Frames must contain at least one pixel."
            raise ValidationError(msg)
        if not np.all(np.isfinite(lab)) or lab.min() < 0.0 or lab.max() > 1.0:
            msg = "Frame Lab channels must be finite and lie in [0, 1]."
            raise ValidationError(msg)
        object.__setattr__(self, "rgb", _readonly(rgb.copy()))
        object.__setattr__(self, "lab", _readonly(lab.copy()))

    @property
    def height(self) -> int:
        """The frame height in pixels."""
        return int(self.rgb.shape[0])

    @property
    def width(self) -> int:
        """The frame width in pixels."""
        return int(self.rgb.shape[1])


@dataclass(frozen=True, eq=False)
class Tube:
    """A short video clip with optional per-instance box and mask annotations.

    Boxes have shape (n_instances, T, 4), masks have shape (n_instances, T, H, W).
    """

    frames: tuple[Frame, ...]
    gt_boxes: npt.NDArray[np.int64] | None = None
    gt_masks: npt.NDArray[np.bool_] | None = None
    spec: dict[str, Any] | None = field(default=None)

    def __post_init__(self) -> None:
        """Validate the frame sizes and annotations."""
        frames = tuple(self.frames)
        if not frames:
            msg = "A tube must contain at least one frame."
            raise ValidationError(msg)
        height, width = frames[0].height, frames[0].width
        for t, frame in enumerate(frames):
            if (frame.height, frame.width) != (height, width):
                msg = f"Frame {t} has size {frame.height}x{frame.width}, expected {height}x{width}."
                raise DimensionMismatchError(msg)
        object.__setattr__(self, "frames", frames)

        if self.gt_boxes is not None:
            boxes = np.asarray(self.gt_boxes, dtype=np.int64)
            if boxes.ndim != 3 or boxes.shape[1:] != (len(frames), 4):
                msg = f"Ground-truth boxes must have shape (n_instances, {len(frames)}, 4), got {boxes.shape}."
                raise DimensionMismatchError(msg)
            x_min, y_min, x_max, y_max = (boxes[..., k] for k in range(4))
            if np.any(x_min < 0) or np.any(y_min < 0) or np.any(x_max > width) or np.any(y_max > height):
                msg = "Ground-truth boxes must lie within the frame."
                raise ValidationError(msg)
            if np.any(x_min >= x_max) or np.any(y_min >= y_max):
                msg = "Ground-truth boxes must have positive area."
                raise ValidationError(msg)
            object.__setattr__(self, "gt_boxes", _readonly(boxes.copy()))

        if self.gt_masks is not None:
            masks = np.asarray(self.gt_masks, dtype=bool)
            expected = (len(frames), height, width)
            if masks.ndim != 4 or masks.shape[1:] != expected:
                dims = ", ".join(map(str, expected))
                msg = f"Ground-truth masks must have shape (n_instances, {dims}), got {masks.shape}."
                raise DimensionMismatchError(msg)
            if self.gt_boxes is not None and masks.shape[0] != self.gt_boxes.shape[0]:
                msg = f"Tube has {self.gt_boxes.shape[0]} annotated boxes but {masks.shape[0]} masks per frame."
                raise DimensionMismatchError(msg)
            object.__setattr__(self, "gt_masks", _readonly(masks.copy()))

    @property
    def n_frames(self) -> int:
        """The tube length T."""
        return len(self.frames)

    @property
    def height(self) -> int:
        """The frame height in pixels."""
        return self.frames[0].height

    @property
    def width(self) -> int:
        """The frame width in pixels."""
        return self.frames[0].width

    @property
    def n_instances(self) -> int:
        """The number of annotated instances, 0 if the tube carries no annotations."""
        if self.gt_boxes is not None:
            return int(self.gt_boxes.shape[0])
        if self.gt_masks is not None:
            return int(self.gt_masks.shape[0])
        return 0

    @cached_property
    def lab(self) -> npt.NDArray[np.float64]:
        """All frames in normalized Lab, stacked to shape (T, H, W, 3)."""
        return _readonly(np.stack([frame.lab for frame in self.frames]))

    def instance_label_maps(self) -> npt.NDArray[np.int32]:
        """Build per-frame instance label maps from the ground-truth masks.

        Label 0 marks background, label `i + 1` marks instance `i`.

        Returns:
            npt.NDArray[np.int32]: The label maps of shape (T, H, W).

        Raises:
            ValidationError: If the tube carries no ground-truth masks.
        """
        if self.gt_masks is None:
            msg = "The tube has no ground-truth masks."
            raise ValidationError(msg)
        labels = np.zeros((self.n_frames, self.height, self.width), dtype=np.int32)
        for i, masks in enumerate(self.gt_masks):
            labels[masks] = i + 1
        return labels

    def box_masks(self) -> npt.NDArray[np.bool_]:
        """Rasterize the ground-truth boxes.

        Returns:
            npt.NDArray[np.bool_]: The filled boxes of shape (n_instances, T, H, W).

        Raises:
            ValidationError: If the tube carries no ground-truth boxes.
        """
        if self.gt_boxes is None:
            msg = "The tube has no ground-truth boxes."
            raise ValidationError(msg)
        masks = np.zeros((self.n_instances, self.n_frames, self.height, self.width), dtype=bool)
        for i, t in np.ndindex(self.n_instances, self.n_frames):
            x_min, y_min, x_max, y_max = self.gt_boxes[i, t]
            masks[i, t, y_min:y_max, x_min:x_max] = True
        return masks

    def truncated(self, n_frames: int) -> Tube:
        """Get the tube consisting of the first `n_frames` frames.

        Args:
            n_frames (int): The number of frames to keep, between 1 and T.

        Returns:
            Tube: The shortened tube.
        """
        if not 1 <= n_frames <= self.n_frames:
            msg = f"Cannot truncate a tube of length {self.n_frames} to {n_frames} frames."
            raise ValidationError(msg)
        return Tube(
            frames=self.frames[:n_frames],
            gt_boxes=None if self.gt_boxes is None else self.gt_boxes[:, :n_frames],
            gt_masks=None if self.gt_masks is None else self.gt_masks[:, :n_frames],
            spec=self.spec,
        )


@dataclass(frozen=True, eq=False)
class MaskField:
    """Soft per-instance masks over a tube, with values in [0, 1] and shape (n_instances, T, H, W).

    Values are held at single precision, the precision of the mask-field file format, so a stored
    field reloads bit for bit. They are exposed as float64 for the loss computations.
    """

    values: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        """Validate, round and freeze the mask values."""
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 4:
            msg = f"Mask fields must have shape (n_instances, T, H, W), got {values.shape}."
            raise ValidationError(msg)
        if values.size and (not np.all(np.isfinite(values)) or values.min() < 0.0 or values.max() > 1.0):
            msg = "Mask values must be finite and lie in [0, 1]."
            raise ValidationError(msg)
        object.__setattr__(self, "values", _readonly(values.astype(np.float32).astype(np.float64)))

    @classmethod
    def constant(cls, tube: Tube, value: float, n_instances: int | None = None) -> MaskField:
        """Create a mask field with the same value everywhere.

        Args:
            tube (Tube): The tube providing T, H and W.
            value (float): The mask value.
            n_instances (int | None, optional): The number of instances. Defaults to the tube's instance count.

        Returns:
            MaskField: The created mask field.
        """
        count = tube.n_instances if n_instances is None else n_instances
        return cls(np.full((count, tube.n_frames, tube.height, tube.width), value, dtype=np.float64))

    @property
    def shape(self) -> tuple[int, int, int, int]:
        """The field shape (n_instances, T, H, W)."""
        n, t, h, w = self.values.shape
        return int(n), int(t), int(h), int(w)

    @property
    def n_instances(self) -> int:
        """The number of instances."""
        return self.shape[0]

    @property
    def n_frames(self) -> int:
        """The number of frames."""
        return self.shape[1]

    def check_matches(self, tube: Tube, *, require_instances: bool = False) -> None:
        """Ensure that the field covers the frames of a tube.

        Args:
            tube (Tube): The tube the field is used with.
            require_instances (bool, optional): Also require the instance count to match the annotations.

        Raises:
            DimensionMismatchError: If T, H, W or the instance count disagree.
        """
        _, t, h, w = self.shape
        if (t, h, w) != (tube.n_frames, tube.height, tube.width):
            msg = (
                f"Mask field covers {t} frames of {h}x{w} pixels, "
                f"but the tube has {tube.n_frames} frames of {tube.height}x{tube.width} pixels."
            )
            raise DimensionMismatchError(msg)
        if require_instances and self.n_instances != tube.n_instances:
            msg = f"Mask field has {self.n_instances} instances, but the tube has {tube.n_instances}."
            raise DimensionMismatchError(msg)
