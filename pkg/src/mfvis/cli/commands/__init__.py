# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Subcommands of the command-line interface."""

from __future__ import annotations

from .ablate_command import AblateCommand
from .assign_command import AssignCommand
from .command import Command
from .gen_command import GenCommand
from .loss_command import LossCommand
from .match_command import MatchCommand
from .train_command import TrainCommand

__all__ = [
    "AblateCommand",
    "AssignCommand",
    "Command",
    "GenCommand",
    "LossCommand",
    "MatchCommand",
    "TrainCommand",
]
