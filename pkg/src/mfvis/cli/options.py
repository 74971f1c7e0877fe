# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Options shared by all subcommands."""

from __future__ import annotations

import argparse
from pathlib import Path

from .config import CliConfig

PATCH_FLAGS = {
    "patch_size": "patch_size",
    "radius": "radius",
    "k": "max_matches",
    "threshold": "distance_threshold",
    "dilation": "dilation",
    "metric": "metric",
}
WEIGHT_FLAGS = {"lambda_pair": "lambda_pair", "lambda_temp": "lambda_temp"}
TRAIN_FLAGS = {
    "steps": "steps",
    "lr": "learning_rate",
    "scheme": "scheme",
    "disable_pair": "disable_pair",
    "disable_temp": "disable_temp",
}


def common_parser() -> argparse.ArgumentParser:
    """Create the parent parser holding the options of every subcommand."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", type=Path, default=None, help="A JSON configuration file.")
    parser.add_argument("--seed", type=int, default=None, help="Override every seed of the configuration.")
    parser.add_argument("--verbose", "-v", action="count", default=0, help="Log progress (repeat for debug output).")

    patch = parser.add_argument_group("patch matching")
    patch.add_argument("--patch-size", type=int, default=None, help="The odd patch side length N.")
    patch.add_argument("--radius", type=int, default=None, help="The search radius R in grid steps.")
    patch.add_argument("--k", type=int, default=None, help="The maximal number of matches K per pixel.")
    patch.add_argument("--threshold", type=float, default=None, help="The patch distance threshold D.")
    patch.add_argument("--dilation", type=int, default=None, help="The pixel spacing of search grid steps.")
    patch.add_argument("--metric", default=None, help="The patch distance: l2, l1 or ncc.")
    patch.add_argument("--scheme", default=None, help="The frame connection scheme: dense, sequential or cyclic.")

    losses = parser.add_argument_group("losses and training")
    losses.add_argument("--lambda-pair", type=float, default=None, help="The pairwise loss weight.")
    losses.add_argument("--lambda-temp", type=float, default=None, help="The temporal loss weight.")
    losses.add_argument("--steps", type=int, default=None, help="The number of optimization steps.")
    losses.add_argument("--lr", type=float, default=None, help="The learning rate per pixel.")
    losses.add_argument("--disable-pair", action="store_true", default=None, help="Drop the pairwise loss.")
    losses.add_argument("--disable-temp", action="store_true", default=None, help="Drop the temporal loss.")
    return parser


def _collect(args: argparse.Namespace, flags: dict[str, str]) -> dict[str, object]:
    return {field: getattr(args, flag) for flag, field in flags.items() if getattr(args, flag, None) is not None}


def config_from_args(args: argparse.Namespace) -> CliConfig:
    """Load the configuration file, if any, and apply all flag overrides.

    Args:
        args (argparse.Namespace): The parsed arguments.

    Returns:
        CliConfig: The effective configuration.
    """
    config = CliConfig.load(args.config) if args.config is not None else CliConfig()
    return config.with_overrides(
        patch=_collect(args, PATCH_FLAGS),
        weights=_collect(args, WEIGHT_FLAGS),
        train=_collect(args, TRAIN_FLAGS),
        seed=args.seed,
    )
