# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Command-line interface for generation, matching, loss evaluation, training, ablation and assignment."""

from __future__ import annotations

from .config import CliConfig
from .main import EXIT_DIVERGENCE, EXIT_OK, EXIT_USAGE, build_parser, main

__all__ = ["EXIT_DIVERGENCE", "EXIT_OK", "EXIT_USAGE", "CliConfig", "build_parser", "main"]
