# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Reading and writing tube directories and mask-field files.

A tube directory holds `frame_0000.png`, `frame_0001.png`, ... (8-bit RGB), a `tube.json` with the
dimensions, per-frame boxes and the generating specification, and optionally `masks.bin` with the
ground-truth masks. Mask fields are stored as a 16-byte magic, four little-endian u32 values
`n_instances, T, H, W` and the row-major little-endian f32 values.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from PIL import Image, UnidentifiedImageError

from ..errors import DimensionMismatchError, FormatError, TruncatedPayloadError, ValidationError
from .color import rgb_to_lab
from .model import MaskField, Tube

logger = logging.getLogger(__name__)

MASK_MAGIC = b"MFVISMSK".ljust(16, b"\0")
MASK_HEADER_SIZE = len(MASK_MAGIC) + 4 * 4
TUBE_FILE = "tube.json"
MASKS_FILE = "masks.bin"
FORMAT_VERSION = 1


def frame_file_name(t: int) -> str:
    """The file name of frame `t` inside a tube directory."""
    return f"frame_{t:04d}.png"


def save_field_values(values: npt.ArrayLike, path: Path | str) -> None:
    """Write an arbitrary (n_instances, T, H, W) array in mask-field format.

    Used for mask fields and for gradient dumps, whose values are not restricted to [0, 1].

    Args:
        values (npt.ArrayLike): The values to store.
        path (Path | str): The output file.
    """
    array = np.asarray(values, dtype=np.float64)
    if array.ndim != 4:
        msg = f"Field values must have shape (n_instances, T, H, W), got {array.shape}."
        raise ValidationError(msg)
    header = MASK_MAGIC + np.array(array.shape, dtype="<u4").tobytes()
    Path(path).write_bytes(header + np.ascontiguousarray(array, dtype="<f4").tobytes())


def load_field_values(path: Path | str) -> npt.NDArray[np.float64]:
    """Read an array stored in mask-field format.

    Args:
        path (Path | str): The file to read.

    Returns:
        npt.NDArray[np.float64]: The stored values of shape (n_instances, T, H, W).

    Raises:
        FormatError: If the file is missing, has a wrong magic or trailing bytes.
        TruncatedPayloadError: If the file ends before all values were read.
    """
    path = Path(path)
    if not path.is_file():
        msg = f"Mask field file '{path}' does not exist."
        raise FormatError(msg)
    data = path.read_bytes()
    if len(data) < MASK_HEADER_SIZE or data[: len(MASK_MAGIC)] != MASK_MAGIC:
        msg = f"'{path}' is not a mask field file."
        raise FormatError(msg)
    shape = tuple(int(v) for v in np.frombuffer(data, dtype="<u4", count=4, offset=len(MASK_MAGIC)))
    expected = int(np.prod(shape, dtype=np.int64)) * 4
    payload = len(data) - MASK_HEADER_SIZE
    if payload < expected:
        msg = f"'{path}' declares {expected} payload bytes but contains only {payload}."
        raise TruncatedPayloadError(msg)
    if payload > expected:
        msg = f"'{path}' has {payload - expected} unexpected trailing bytes."
        raise FormatError(msg)
    values = np.frombuffer(data, dtype="<f4", offset=MASK_HEADER_SIZE).astype(np.float64)
    return values.reshape(shape)


def save_maskfield(field: MaskField, path: Path | str) -> None:
    """Write a mask field to a file."""
    save_field_values(field.values, path)


def load_maskfield(path: Path | str, tube: Tube | None = None) -> MaskField:
    """Read a mask field from a file.

    Args:
        path (Path | str): The file to read.
        tube (Tube | None, optional): If given, the field must cover this tube's frames.

    Returns:
        MaskField: The loaded mask field.

    Raises:
        FormatError: If the file is malformed or holds values outside [0, 1].
        DimensionMismatchError: If the stored dimensions disagree with `tube`.
    """
    values = load_field_values(path)
    try:
        field = MaskField(values)
    except ValidationError as e:
        msg = f"'{path}' does not hold a valid mask field: {e}"
        raise FormatError(msg) from e
    if tube is not None:
        field.check_matches(tube)
    return field


def save_tube(tube: Tube, directory: Path | str) -> None:
    """Write a tube into a directory, creating it if necessary.

    Args:
        tube (Tube): The tube to store.
        directory (Path | str): The target directory.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for t, frame in enumerate(tube.frames):
        Image.fromarray(frame.rgb).save(directory / frame_file_name(t), format="PNG")
    boxes = (
        [[[int(v) for v in tube.gt_boxes[i, t]] for i in range(tube.n_instances)] for t in range(tube.n_frames)]
        if tube.gt_boxes is not None
        else None
    )
    metadata: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "T": tube.n_frames,
        "H": tube.height,
        "W": tube.width,
        "n_instances": tube.n_instances,
        "boxes": boxes,
        "has_masks": tube.gt_masks is not None,
        "spec": tube.spec,
    }
    (directory / TUBE_FILE).write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if tube.gt_masks is not None:
        save_field_values(tube.gt_masks, directory / MASKS_FILE)
    logger.info("Saved tube with %d frames to %s", tube.n_frames, directory)


def _read_frame(path: Path, height: int, width: int) -> npt.NDArray[np.uint8]:
    if not path.is_file():
        msg = f"Missing frame file '{path}'."
        raise FormatError(msg)
    try:
        with Image.open(path) as image:
            if image.mode != "RGB":
                msg = f"Frame '{path}' must be an 8-bit RGB image, found mode {image.mode}."
                raise FormatError(msg)
            rgb = np.asarray(image, dtype=np.uint8)
    except (UnidentifiedImageError, OSError) as e:
        msg = f"Cannot read frame '{path}': {e}"
        raise FormatError(msg) from e
    if rgb.shape != (height, width, 3):
        msg = f"Frame '{path}' has size {rgb.shape[0]}x{rgb.shape[1]}, expected {height}x{width}."
        raise DimensionMismatchError(msg)
    return rgb


def load_tube(directory: Path | str) -> Tube:
    """Read a tube directory.

    Args:
        directory (Path | str): The tube directory.

    Returns:
        Tube: The loaded tube, with Lab channels recomputed from the stored RGB frames.

    Raises:
        FormatError: If a file is missing or malformed.
        DimensionMismatchError: If frame sizes, box counts or stored masks disagree with `tube.json`.
    """
    directory = Path(directory)
    meta_path = directory / TUBE_FILE
    if not meta_path.is_file():
        msg = f"'{directory}' is not a tube directory: '{TUBE_FILE}' is missing."
        raise FormatError(msg)
    try:
        metadata = json.loads(meta_path.read_text(encoding="utf-8"))
        n_frames, height, width = int(metadata["T"]), int(metadata["H"]), int(metadata["W"])
        n_instances = int(metadata["n_instances"])
        raw_boxes = metadata.get("boxes")
        has_masks = bool(metadata.get("has_masks", False))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        msg = f"Malformed '{meta_path}': {e}"
        raise FormatError(msg) from e

    frames = tuple(rgb_to_lab(_read_frame(directory / frame_file_name(t), height, width)) for t in range(n_frames))

    boxes = None
    if raw_boxes is not None and n_instances > 0:
        per_frame = np.asarray(raw_boxes, dtype=np.int64)
        if per_frame.shape != (n_frames, n_instances, 4):
            msg = f"'{meta_path}' stores boxes of shape {per_frame.shape}, expected ({n_frames}, {n_instances}, 4)."
            raise DimensionMismatchError(msg)
        boxes = per_frame.transpose(1, 0, 2)

    masks = None
    if has_masks:
        values = load_field_values(directory / MASKS_FILE)
        expected = (n_instances, n_frames, height, width)
        if values.shape != expected:
            msg = f"'{directory / MASKS_FILE}' has shape {values.shape}, expected {expected}."
            raise DimensionMismatchError(msg)
        masks = values > 0.5

    try:
        return Tube(frames=frames, gt_boxes=boxes, gt_masks=masks, spec=metadata.get("spec"))
    except ValidationError as e:
        msg = f"Invalid annotations in '{directory}': {e}"
        raise FormatError(msg) from e
