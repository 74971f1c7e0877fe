# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Configuration files of the command-line interface."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..correspondence import PatchConfig
from ..errors import FormatError, ValidationError
from ..losses import LossWeights
from ..training import TrainConfig
from ..video import SyntheticSpec

SECTIONS = ("patch", "weights", "train", "synthetic")


@dataclass(frozen=True)
class CliConfig:
    """All parameters of a command-line run.

    A configuration file is a JSON object with the optional sections `patch`, `weights`, `train`
    and `synthetic`. Unknown sections and keys are rejected.
    """

    patch: PatchConfig = field(default_factory=PatchConfig)
    weights: LossWeights = field(default_factory=LossWeights)
    train: TrainConfig = field(default_factory=TrainConfig)
    synthetic: SyntheticSpec | None = None

    def __post_init__(self) -> None:
        """Share the patch parameters and loss weights with the training parameters."""
        object.__setattr__(
            self, "train", dataclasses.replace(self.train, weights=self.weights, patch_config=self.patch)
        )

    @classmethod
    def from_dict(cls, data: Any) -> CliConfig:  # noqa: ANN401
        """Parse a configuration object.

        Args:
            data (Any): The decoded JSON object.

        Returns:
            CliConfig: The parsed configuration.

        Raises:
            ValidationError: If a section or key is unknown or a value is invalid.
        """
        if not isinstance(data, dict):
            msg = "A configuration file must contain a JSON object."
            raise ValidationError(msg)
        unknown = sorted(set(data) - set(SECTIONS))
        if unknown:
            msg = f"Unknown configuration section(s): {', '.join(unknown)}."
            raise ValidationError(msg)
        patch = PatchConfig.from_dict(data.get("patch", {}))
        weights = LossWeights.from_dict(data.get("weights", {}))
        train = TrainConfig.from_dict(data.get("train", {}), weights=weights, patch_config=patch)
        synthetic = SyntheticSpec.from_dict(data["synthetic"]) if data.get("synthetic") is not None else None
        return cls(patch=patch, weights=weights, train=train, synthetic=synthetic)

    @classmethod
    def load(cls, path: Path | str) -> CliConfig:
        """Read a configuration file.

        Args:
            path (Path | str): The JSON file.

        Returns:
            CliConfig: The parsed configuration.

        Raises:
            FormatError: If the file is missing or not valid JSON.
            ValidationError: If the contents are invalid.
        """
        path = Path(path)
        if not path.is_file():
            msg = f"Configuration file '{path}' does not exist."
            raise FormatError(msg)
        try:
            with path.open("r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            msg = f"Configuration file '{path}' is not valid JSON: {e}"
            raise FormatError(msg) from e
        return cls.from_dict(data)

    def to_dict(self) -> dict[str, Any]:
        """Convert the configuration into a JSON object."""
        return {
            "patch": self.patch.to_dict(),
            "weights": self.weights.to_dict(),
            "train": self.train.to_dict(),
            "synthetic": None if self.synthetic is None else self.synthetic.to_dict(),
        }

    def with_overrides(
        self,
        patch: dict[str, Any] | None = None,
        weights: dict[str, Any] | None = None,
        train: dict[str, Any] | None = None,
        seed: int | None = None,
    ) -> CliConfig:
        """Create a copy with some parameters replaced.

        Args:
            patch (dict[str, Any] | None, optional): Replacements of patch parameters.
            weights (dict[str, Any] | None, optional): Replacements of loss weights.
            train (dict[str, Any] | None, optional): Replacements of training parameters.
            seed (int | None, optional): A seed replacing the training and synthetic seeds.

        Returns:
            CliConfig: The updated configuration.
        """
        new_patch = self.patch.replace(**(patch or {}))
        new_weights = self.weights.replace(**(weights or {}))
        train_changes = dict(train or {})
        synthetic = self.synthetic
        if seed is not None:
            train_changes["seed"] = seed
            if synthetic is not None:
                synthetic = dataclasses.replace(synthetic, seed=seed)
        return CliConfig(
            patch=new_patch, weights=new_weights, train=self.train.replace(**train_changes), synthetic=synthetic
        )
