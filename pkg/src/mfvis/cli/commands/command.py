# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Represents a subcommand of the command-line interface."""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from pathlib import Path
from typing import TYPE_CHECKING, Any

from ..options import config_from_args

if TYPE_CHECKING:
    import argparse

    from ..config import CliConfig


class Command(ABC):
    """Represents a generic subcommand."""

    command_name: str = "None"
    help: str = ""

    args: argparse.Namespace
    config: CliConfig

    def __init__(self, args: argparse.Namespace) -> None:
        """Creates a new Command.

        Args:
            args (argparse.Namespace): The parsed command-line arguments.
        """
        super().__init__()
        self.args = args
        self.config = config_from_args(args)
        self.validate()

    @classmethod
    @abstractmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Add the arguments specific to this subcommand.

        Args:
            parser (argparse.ArgumentParser): The subcommand's parser.
        """
        ...

    def validate(self) -> None:
        """Validate the arguments after creation.

        Raises an exception if the arguments are invalid.
        """

    @abstractmethod
    def run(self) -> int:
        """Performs the action of the subcommand.

        Returns:
            int: The exit code.
        """
        ...


def write_json(data: dict[str, Any], path: Path | str | None) -> None:
    """Write a JSON object to a file, or print it if no file is given."""
    text = json.dumps(data, indent=2, sort_keys=True)
    if path is None:
        print(text)  # noqa: T201
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text + "\n", encoding="utf-8")
