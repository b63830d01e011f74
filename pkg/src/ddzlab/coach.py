"""Deal-quality gating: win-probability model, acceptance band, ramp schedule."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import CoachNet, coach_predict, deal_tokens
from .nn.losses import loss_bce

ACCEPTANCE_ALARM_RATE = 0.05  # below this the coach is considered degenerate


@dataclass(frozen=True)
class BetaSchedule:
    """Linear ramp of the band half-width from 0 to beta_max."""

    beta_max: float = 0.3
    ramp_frames: int = 1

    def __post_init__(self):
        if not 0.0 <= self.beta_max <= 0.5:
            raise ValueError("beta_max must be in [0, 0.5]")
        if self.ramp_frames < 1:
            raise ValueError("ramp_frames must be positive")


def beta_at(schedule: BetaSchedule, frames: int) -> float:
    if frames < 0:
        raise ValueError("frames must be non-negative")
    return schedule.beta_max * min(1.0, frames / schedule.ramp_frames)


def accept_deal(p_win: float, beta: float) -> bool:
    """Keep deals whose predicted Landlord win probability is inside
    the symmetric band [beta, 1 - beta]."""
    if not 0.0 <= beta <= 0.5:
        raise ValueError("beta must be in [0, 0.5]")
    return beta <= p_win <= 1.0 - beta


def coach_train_step(net: CoachNet, optimizer, deals, outcomes) -> float:
    """One binary-cross-entropy step on (deal, landlord-won) pairs."""
    toks = np.stack([deal_tokens(d) for d in deals])
    labels = np.asarray(outcomes, dtype=float)
    p, cache = net.forward(toks)
    loss, dp = loss_bce(p, labels)
    grads = net.backward(cache, dp)
    optimizer.step(net.params(), grads)
    return loss


__all__ = [
    "ACCEPTANCE_ALARM_RATE",
    "BetaSchedule",
    "beta_at",
    "accept_deal",
    "coach_train_step",
    "CoachNet",
    "coach_predict",
]
