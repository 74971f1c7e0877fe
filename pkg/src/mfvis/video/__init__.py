# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Video frames, annotated tubes, soft mask fields and their on-disk formats."""

from __future__ import annotations

from .color import rgb_to_lab
from .model import Box, Frame, MaskField, Tube, fill_box, tight_box
from .storage import (
    load_field_values,
    load_maskfield,
    load_tube,
    save_field_values,
    save_maskfield,
    save_tube,
)
from .synthetic import InstanceSpec, OccluderSpec, ShapeKind, SyntheticSpec, generate_synthetic_tube

__all__ = [
    "Box",
    "Frame",
    "InstanceSpec",
    "MaskField",
    "OccluderSpec",
    "ShapeKind",
    "SyntheticSpec",
    "Tube",
    "fill_box",
    "generate_synthetic_tube",
    "load_field_values",
    "load_maskfield",
    "load_tube",
    "rgb_to_lab",
    "save_field_values",
    "save_maskfield",
    "save_tube",
    "tight_box",
]
