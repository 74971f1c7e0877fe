# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Represents the 'loss' subcommand."""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

from ...losses import total_loss
from ...video import load_maskfield, load_tube
from .command import Command, write_json

if TYPE_CHECKING:
    import argparse


class LossCommand(Command):
    """Evaluates the overall loss of a mask field."""

    command_name = "loss"
    help = "Evaluate all loss components of a mask field on a tube."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Add the arguments of the 'loss' subcommand."""
        parser.add_argument("tube", type=Path, help="The tube directory.")
        parser.add_argument("masks", type=Path, help="The mask field file.")
        parser.add_argument("--out", type=Path, default=None, help="The JSON report file (default: standard output).")
        parser.add_argument("--grad-dump", type=Path, default=None, help="Store the gradient in mask-field format.")

    def run(self) -> int:
        """Evaluate the loss and write the report."""
        tube = load_tube(self.args.tube)
        mask_field = load_maskfield(self.args.masks, tube)
        config = self.config.train
        report = total_loss(
            mask_field,
            tube,
            config.patch_config,
            config.weights,
            config.scheme,
            temporal=not config.disable_temp,
            pairwise=not config.disable_pair,
        )
        if self.args.out is not None:
            report.save(self.args.out, self.args.grad_dump)
        else:
            if self.args.grad_dump is not None:
                report.save_gradient(self.args.grad_dump)
            write_json(report.to_dict(self.args.grad_dump), None)
        return 0
