# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Allows to run the command-line interface as a module."""

from __future__ import annotations

from .main import main

if __name__ == "__main__":
    raise SystemExit(main())
