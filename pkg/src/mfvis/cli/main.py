# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Entry point of the `mfvis` command-line interface."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import TYPE_CHECKING

from .. import __version__
from ..errors import DivergenceError, MfvisError
from .commands import AblateCommand, AssignCommand, Command, GenCommand, LossCommand, MatchCommand, TrainCommand
from .options import common_parser

if TYPE_CHECKING:
    from collections.abc import Sequence

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DIVERGENCE = 3

supported_commands: list[type[Command]] = [
    GenCommand,
    MatchCommand,
    LossCommand,
    TrainCommand,
    AblateCommand,
    AssignCommand,
]


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with one subparser per supported command."""
    parser = argparse.ArgumentParser(prog="mfvis", description="Mask-free video instance segmentation toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, help="The subcommand to run.")
    common = common_parser()
    for command_type in supported_commands:
        sub = subparsers.add_parser(command_type.command_name, parents=[common], help=command_type.help)
        command_type.add_arguments(sub)
    return parser


def handle_command(args: argparse.Namespace) -> int:
    """Run the subcommand selected by the parsed arguments.

    Args:
        args (argparse.Namespace): The parsed arguments.

    Raises:
        ValueError: If the command is not supported.

    Returns:
        int: The exit code of the subcommand.
    """
    for command_type in supported_commands:
        if command_type.command_name == args.command:
            return command_type(args).run()
    msg = f"Unsupported command: {args.command}"
    raise ValueError(msg)


def configure_logging(verbosity: int) -> None:
    """Send log records to standard error; INFO with one `-v`, DEBUG with more."""
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    """The main function.

    Args:
        argv (Sequence[str] | None, optional): The arguments. Defaults to the process arguments.

    Returns:
        int: 0 on success, 2 on invalid input and 3 if an optimization diverged.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return handle_command(args)
    except DivergenceError as e:
        print(f"mfvis {args.command}: diverged: {e}", file=sys.stderr)  # noqa: T201
        return EXIT_DIVERGENCE
    except MfvisError as e:
        print(f"mfvis {args.command}: error: {e}", file=sys.stderr)  # noqa: T201
        return EXIT_USAGE
