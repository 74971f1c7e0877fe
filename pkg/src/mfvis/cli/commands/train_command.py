# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Represents the 'train' subcommand."""

from __future__ import annotations

import json
from pathlib import Path
from typing import TYPE_CHECKING

from ...training import evaluate_iou, render_mask_overlay, train
from ...video import load_tube, save_maskfield
from .command import Command, write_json

if TYPE_CHECKING:
    import argparse


class TrainCommand(Command):
    """Optimizes the masks of a tube from its boxes."""

    command_name = "train"
    help = "Optimize per-pixel masks of a tube from its box annotations."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Add the arguments of the 'train' subcommand."""
        parser.add_argument("tube", type=Path, help="The tube directory.")
        parser.add_argument("--out", type=Path, required=True, help="The directory for masks, log and report.")
        parser.add_argument("--overlay", action="store_true", help="Write the final masks blended onto every frame.")

    def run(self) -> int:
        """Train, evaluate and store the results."""
        tube = load_tube(self.args.tube)
        out: Path = self.args.out
        out.mkdir(parents=True, exist_ok=True)
        result = train(tube, self.config.train)

        save_maskfield(result.masks, out / "masks.bin")
        with (out / "train_log.jsonl").open("w", encoding="utf-8") as f:
            for record in result.log:
                f.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")
        iou = None
        if tube.gt_masks is not None:
            iou = evaluate_iou(result.masks, tube.gt_masks, self.config.train.bin_threshold)
        write_json(
            {
                "initial_l_seg": result.initial_loss,
                "final_l_seg": result.final_loss,
                "iou": None if iou is None else iou.to_dict(),
                "config": self.config.to_dict(),
            },
            out / "summary.json",
        )
        if self.args.overlay:
            for t, frame in enumerate(tube.frames):
                render_mask_overlay(frame, result.masks.values[:, t]).save(out / f"overlay_{t:04d}.png", format="PNG")

        print(f"l_seg: {result.initial_loss:.6f} -> {result.final_loss:.6f}")  # noqa: T201
        if iou is not None:
            print(f"mean IoU: {iou.mean:.4f}")  # noqa: T201
        return 0
