# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Represents the 'gen' subcommand."""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import TYPE_CHECKING

from ...errors import FormatError, ValidationError
from ...video import SyntheticSpec, generate_synthetic_tube, save_tube
from ..config import CliConfig
from .command import Command

if TYPE_CHECKING:
    import argparse


class GenCommand(Command):
    """Generates a synthetic tube."""

    command_name = "gen"
    help = "Generate a synthetic tube from a specification file."

    spec: SyntheticSpec

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Add the arguments of the 'gen' subcommand."""
        parser.add_argument(
            "spec",
            type=Path,
            help="A synthetic specification, or a configuration file with a 'synthetic' section.",
        )
        parser.add_argument("--out", type=Path, required=True, help="The tube directory to create.")

    def validate(self) -> None:
        """Read the synthetic specification."""
        path: Path = self.args.spec
        if not path.is_file():
            msg = f"Specification file '{path}' does not exist."
            raise FormatError(msg)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            msg = f"Specification file '{path}' is not valid JSON: {e}"
            raise FormatError(msg) from e
        if isinstance(data, dict) and "synthetic" in data:
            spec = CliConfig.from_dict(data).synthetic
            if spec is None:
                msg = f"'{path}' has an empty 'synthetic' section."
                raise ValidationError(msg)
        else:
            spec = SyntheticSpec.from_dict(data)
        if self.args.seed is not None:
            spec = dataclasses.replace(spec, seed=self.args.seed)
        self.spec = spec

    def run(self) -> int:
        """Generate and store the tube."""
        tube = generate_synthetic_tube(self.spec)
        save_tube(tube, self.args.out)
        print(  # noqa: T201
            f"Generated tube with {tube.n_frames} frames of {tube.height}x{tube.width} pixels "
            f"and {tube.n_instances} instance(s) in {self.args.out}"
        )
        return 0
