# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Mask-free video instance segmentation: box-supervised and temporal KNN-patch losses."""

from __future__ import annotations

from . import correspondence, losses, set_matching, training, video
from .errors import (
    DimensionMismatchError,
    DivergenceError,
    FormatError,
    MfvisError,
    TruncatedPayloadError,
    ValidationError,
)

try:
    from ._version import version as __version__
except ImportError:  # pragma: no cover
    from importlib.metadata import PackageNotFoundError, version

    try:
        __version__ = version("mfvis")
    except PackageNotFoundError:
        __version__ = "0.0.0"

__all__ = [
    "DimensionMismatchError",
    "DivergenceError",
    "FormatError",
    "MfvisError",
    "TruncatedPayloadError",
    "ValidationError",
    "__version__",
    "correspondence",
    "losses",
    "set_matching",
    "training",
    "video",
]
