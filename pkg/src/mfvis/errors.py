# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Exception types raised by the mfvis library."""

from __future__ import annotations


class MfvisError(Exception):
    """Base class of all errors raised by mfvis."""


class ValidationError(MfvisError, ValueError):
    """Raised when a parameter, configuration or input violates its contract."""


class FormatError(MfvisError, ValueError):
    """Raised when a file does not follow the expected on-disk format."""


class DimensionMismatchError(FormatError):
    """Raised when stored dimensions disagree with the data they belong to."""


class TruncatedPayloadError(FormatError):
    """Raised when a binary payload ends before all declared values were read."""


class DivergenceError(MfvisError, RuntimeError):
    """Raised when an optimization produces a non-finite loss."""
