# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Represents the 'assign' subcommand."""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

from ...errors import ValidationError
from ...set_matching import DEFAULT_POINTS, MatchingStrategy, build_cost_matrix, hungarian_assign
from ...video import load_maskfield, load_tube
from .command import Command, write_json

if TYPE_CHECKING:
    import argparse


class AssignCommand(Command):
    """Assigns predicted instance sequences to ground-truth box sequences."""

    command_name = "assign"
    help = "Match predicted mask sequences to the tube's ground-truth boxes."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Add the arguments of the 'assign' subcommand."""
        parser.add_argument("tube", type=Path, help="The tube directory.")
        parser.add_argument("masks", type=Path, help="The predicted mask field file.")
        parser.add_argument(
            "--strategy",
            choices=[s.value for s in MatchingStrategy],
            default=MatchingStrategy.SPATIO_TEMPORAL.value,
            help="The sequence matching cost.",
        )
        parser.add_argument("--n-points", type=int, default=DEFAULT_POINTS, help="Sampled points per frame.")
        parser.add_argument("--exhaustive", action="store_true", help="Use every pixel instead of sampling.")
        parser.add_argument("--inside-boxes", action="store_true", help="Sample inside the boxes only.")
        parser.add_argument("--out", type=Path, default=None, help="The JSON output file (default: standard output).")

    def validate(self) -> None:
        """Check the sampling parameters."""
        if self.args.n_points < 1:
            msg = f"--n-points must be positive, got {self.args.n_points}."
            raise ValidationError(msg)

    def run(self) -> int:
        """Compute the cost matrix and the optimal assignment."""
        tube = load_tube(self.args.tube)
        if tube.gt_boxes is None:
            msg = "The tube has no ground-truth boxes."
            raise ValidationError(msg)
        mask_field = load_maskfield(self.args.masks, tube)
        seed = self.args.seed if self.args.seed is not None else 0
        costs = build_cost_matrix(
            mask_field.values,
            tube.gt_boxes,
            self.args.strategy,
            self.args.n_points,
            seed,
            exhaustive=self.args.exhaustive,
            inside_boxes=self.args.inside_boxes,
        )
        assignment = hungarian_assign(costs)
        write_json(
            {"strategy": self.args.strategy, "cost_matrix": costs.to_list(), "assignment": assignment.to_dict()},
            self.args.out,
        )
        return 0
