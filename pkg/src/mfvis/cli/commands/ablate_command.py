# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Represents the 'ablate' subcommand."""

from __future__ import annotations

import csv
import logging
import time
from pathlib import Path
from typing import TYPE_CHECKING, Any

from ...correspondence import build_tube_connections, matchset_nbytes
from ...errors import ValidationError
from ...training import evaluate_iou, train
from ...video import load_tube
from .command import Command

if TYPE_CHECKING:
    import argparse

    from ...video import Tube
    from ..config import CliConfig

logger = logging.getLogger(__name__)

AXES: dict[str, tuple[str, str, type]] = {
    "K": ("patch", "max_matches", int),
    "R": ("patch", "radius", int),
    "N": ("patch", "patch_size", int),
    "metric": ("patch", "metric", str),
    "scheme": ("train", "scheme", str),
    "tube_length": ("tube", "n_frames", int),
}
COLUMNS = (
    "axis",
    "value",
    "connections",
    "mean_iou",
    "l_temp",
    "l_proj",
    "l_pair",
    "l_seg",
    "wall_time_s",
    "match_bytes",
)


class AblateCommand(Command):
    """Sweeps one parameter and trains once per value."""

    command_name = "ablate"
    help = "Train once per value of a parameter axis and tabulate the results as CSV."

    values: list[Any]

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Add the arguments of the 'ablate' subcommand."""
        parser.add_argument("tube", type=Path, help="The tube directory.")
        parser.add_argument("--axis", required=True, choices=sorted(AXES), help="The parameter to sweep.")
        parser.add_argument("--values", required=True, help="Comma-separated values of the parameter.")
        parser.add_argument("--out", type=Path, required=True, help="The CSV file to write.")

    def validate(self) -> None:
        """Parse the axis values."""
        _, _, kind = AXES[self.args.axis]
        raw = [v.strip() for v in self.args.values.split(",") if v.strip()]
        if not raw:
            msg = "At least one axis value is required."
            raise ValidationError(msg)
        try:
            self.values = [kind(v) for v in raw]
        except ValueError as e:
            msg = f"Invalid value for axis '{self.args.axis}': {e}"
            raise ValidationError(msg) from e

    def _configure(self, tube: Tube, value: Any) -> tuple[Tube, CliConfig]:  # noqa: ANN401
        section, name, _ = AXES[self.args.axis]
        if section == "tube":
            return tube.truncated(value), self.config
        return tube, self.config.with_overrides(**{section: {name: value}})

    def run(self) -> int:
        """Run the sweep and write the table."""
        tube = load_tube(self.args.tube)
        rows = []
        for value in self.values:
            run_tube, config = self._configure(tube, value)
            train_config = config.train
            if run_tube.n_frames < 2:
                train_config = train_config.replace(disable_temp=True)
            connections = (
                0 if train_config.disable_temp else len(build_tube_connections(run_tube.n_frames, train_config.scheme))
            )
            logger.info("Training with %s=%s", self.args.axis, value)
            start = time.perf_counter()
            result = train(run_tube, train_config)
            wall_time = time.perf_counter() - start
            iou = (
                evaluate_iou(result.masks, run_tube.gt_masks, train_config.bin_threshold).mean
                if run_tube.gt_masks is not None
                else None
            )
            final = result.log[-1]
            rows.append({
                "axis": self.args.axis,
                "value": value,
                "connections": connections,
                "mean_iou": "" if iou is None else f"{iou:.6f}",
                "l_temp": f"{final.l_temp:.8g}",
                "l_proj": f"{final.l_proj:.8g}",
                "l_pair": f"{final.l_pair:.8g}",
                "l_seg": f"{final.l_seg:.8g}",
                "wall_time_s": f"{wall_time:.3f}",
                "match_bytes": sum(matchset_nbytes(m) for m in result.match_sets),
            })
            print(", ".join(f"{k}={rows[-1][k]}" for k in COLUMNS[1:]))  # noqa: T201

        out: Path = self.args.out
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=COLUMNS, lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        return 0
