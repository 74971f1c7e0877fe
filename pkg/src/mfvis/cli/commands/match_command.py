# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Represents the 'match' subcommand."""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, Any

from ...correspondence import (
    compute_match_sets,
    correspondence_accuracy,
    pair_accuracy,
    render_correspondence_overlay,
    save_matchset,
)
from ...video import load_tube
from .command import Command, write_json

if TYPE_CHECKING:
    import argparse

    from ...correspondence import MatchSet


def match_file_name(match_set: MatchSet) -> str:
    """The file name of a stored match set."""
    return f"match_{match_set.source_frame:02d}_{match_set.target_frame:02d}.bin"


class MatchCommand(Command):
    """Computes the patch matches of a tube."""

    command_name = "match"
    help = "Match patches between the connected frames of a tube."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Add the arguments of the 'match' subcommand."""
        parser.add_argument("tube", type=Path, help="The tube directory.")
        parser.add_argument("--out", type=Path, required=True, help="The directory for match files and reports.")
        parser.add_argument("--overlay", action="store_true", help="Draw 100 sampled correspondences per frame pair.")

    def run(self) -> int:
        """Match all connected frame pairs and report their accuracy."""
        tube = load_tube(self.args.tube)
        out: Path = self.args.out
        out.mkdir(parents=True, exist_ok=True)
        match_sets = compute_match_sets(tube, self.config.patch, self.config.train.scheme)
        labels = tube.instance_label_maps() if tube.gt_masks is not None else None

        pairs: list[dict[str, Any]] = []
        for match_set in match_sets:
            t, t_hat = match_set.source_frame, match_set.target_frame
            save_matchset(match_set, out / match_file_name(match_set))
            accuracy = pair_accuracy(match_set, labels[t], labels[t_hat]) if labels is not None else None
            pairs.append({"source": t, "target": t_hat, "matches": match_set.total_matches, "accuracy": accuracy})
            if self.args.overlay:
                overlay = render_correspondence_overlay(
                    match_set, tube.frames[t], tube.frames[t_hat], seed=self.config.train.seed
                )
                overlay.save(out / f"overlay_{t:02d}_{t_hat:02d}.png", format="PNG")
            print(f"({t} -> {t_hat}): {match_set.total_matches} matches, accuracy {_format(accuracy)}")  # noqa: T201

        mean_accuracy = correspondence_accuracy(match_sets, labels) if labels is not None else None
        write_json(
            {
                "scheme": self.config.train.scheme.value,
                "patch": self.config.patch.to_dict(),
                "pairs": pairs,
                "mean_accuracy": mean_accuracy,
            },
            out / "matches.json",
        )
        print(f"mean accuracy: {_format(mean_accuracy)}")  # noqa: T201
        return 0


def _format(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.4f}"
