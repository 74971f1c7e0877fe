# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Direct gradient-descent optimization of per-pixel mask logits."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy.special import expit

from ..errors import DivergenceError, ValidationError
from ..losses import LossReport, prepare_loss_inputs, total_loss
from ..video import MaskField
from .config import TrainConfig
from .logits import LogitField, init_logits

if TYPE_CHECKING:
    from ..correspondence import MatchSet
    from ..video import Tube

logger = logging.getLogger(__name__)

LOG_INTERVAL = 100


@dataclass(frozen=True)
class StepRecord:
    """The loss values before a gradient step; the last record holds the final values."""

    step: int
    l_temp: float
    l_proj: float
    l_pair: float
    l_seg: float

    @classmethod
    def from_report(cls, step: int, report: LossReport) -> StepRecord:
        """Create a record from a loss report."""
        return cls(step, report.l_temp, report.l_proj, report.l_pair, report.l_seg)

    def to_dict(self) -> dict[str, Any]:
        """Convert the record into a JSON object."""
        return {
            "step": self.step,
            "l_temp": self.l_temp,
            "l_proj": self.l_proj,
            "l_pair": self.l_pair,
            "l_seg": self.l_seg,
        }


@dataclass(frozen=True, eq=False)
class TrainingResult:
    """The outcome of an optimization.

    Attributes:
        initial (LogitField): The initial logits.
        final (LogitField): The logits after the last step.
        masks (MaskField): The final mask probabilities.
        log (tuple[StepRecord, ...]): One record per step and a final record with index `steps`.
        match_sets (tuple[MatchSet, ...]): The matches used by the temporal loss, empty if it was disabled.
    """

    initial: LogitField
    final: LogitField
    masks: MaskField
    log: tuple[StepRecord, ...]
    match_sets: tuple[MatchSet, ...]

    @property
    def initial_loss(self) -> float:
        """The overall loss before the first step."""
        return self.log[0].l_seg

    @property
    def final_loss(self) -> float:
        """The overall loss after the last step."""
        return self.log[-1].l_seg


def train(tube: Tube, config: TrainConfig | None = None) -> TrainingResult:
    """Optimize per-pixel mask logits of every annotated instance of a tube.

    Each step evaluates the overall loss on the logistic function of the logits and updates
    `z <- clip(z - learning_rate * H * W * dL/dM * M (1 - M), -logit_bound, logit_bound)`.
    Matches and color edges are computed once from the frames.

    Args:
        tube (Tube): The tube with ground-truth boxes.
        config (TrainConfig | None, optional): The optimization parameters. Defaults to :class:`TrainConfig`.

    Returns:
        TrainingResult: The final masks, the logits and the loss log.

    Raises:
        ValidationError: If the tube has no ground-truth boxes.
        DivergenceError: If a loss becomes non-finite.
    """
    config = config or TrainConfig()
    if tube.gt_boxes is None:
        msg = "Training needs ground-truth boxes."
        raise ValidationError(msg)
    temporal, pairwise = not config.disable_temp, not config.disable_pair
    match_sets, edge_sets = prepare_loss_inputs(
        tube, config.patch_config, config.weights, config.scheme, temporal=temporal, pairwise=pairwise
    )
    initial = init_logits(tube, tube.n_instances, config.seed)
    step_scale = config.learning_rate * tube.height * tube.width

    def evaluate(probabilities: np.ndarray, step: int) -> LossReport:
        report = total_loss(
            MaskField(probabilities),
            tube,
            config.patch_config,
            config.weights,
            config.scheme,
            temporal=temporal,
            pairwise=pairwise,
            match_sets=match_sets,
            edge_sets=edge_sets,
        )
        if not report.is_finite:
            msg = f"Non-finite loss at step {step}: {report.scalars()}."
            raise DivergenceError(msg)
        return report

    logits = initial.values.copy()
    log = []
    for step in range(config.steps):
        probabilities = expit(logits)
        report = evaluate(probabilities, step)
        log.append(StepRecord.from_report(step, report))
        if step % LOG_INTERVAL == 0:
            logger.info("step %d: l_seg=%.6f", step, report.l_seg)
        with np.errstate(over="ignore", invalid="ignore"):
            logits = np.clip(
                logits - step_scale * report.grad * probabilities * (1.0 - probabilities),
                -config.logit_bound,
                config.logit_bound,
            )
        if not np.all(np.isfinite(logits)):
            msg = f"Non-finite logits after step {step}."
            raise DivergenceError(msg)

    final = LogitField(logits)
    masks = final.mask_field()
    log.append(StepRecord.from_report(config.steps, evaluate(masks.values, config.steps)))
    logger.info("Final l_seg=%.6f (initial %.6f)", log[-1].l_seg, log[0].l_seg)
    return TrainingResult(
        initial=initial, final=final, masks=masks, log=tuple(log), match_sets=tuple(match_sets or ())
    )
