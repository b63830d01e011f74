"""Opponent-model training and inference over next-player hand counts."""

from __future__ import annotations

import numpy as np

from .features import HEAD_OFFSETS, HEAD_SIZES, expected_counts
from .models import PredictionNet, head_masks, masked_head_probs, predict_hand
from .nn.losses import loss_masked_cross_entropy


class MaskViolation(RuntimeError):
    """A training label lies outside its legal-label mask (engine bug)."""


def masked_ce_and_grad(logits, true_hands, legal_labels):
    """Summed-over-heads masked cross entropy and dlogits.

    true_hands/legal_labels: (B, 15) count vectors.
    """
    B = logits.shape[0]
    dlogits = np.zeros_like(logits)
    total = 0.0
    for rank, (off, size) in enumerate(zip(HEAD_OFFSETS, HEAD_SIZES)):
        bound = np.minimum(legal_labels[:, rank], size - 1)
        mask = np.arange(size)[None, :] <= bound[:, None]
        labels = true_hands[:, rank]
        loss, d = loss_masked_cross_entropy(logits[:, off : off + size], labels, mask)
        total += loss
        dlogits[:, off : off + size] = d
    return total, dlogits


def prediction_train_step(net: PredictionNet, optimizer, states, hists, legal_labels, true_hands):
    """One optimizer step; returns (loss, n_rejected).

    Samples whose true hand violates the legal-label bound are dropped and
    counted — they indicate an engine bug upstream.
    """
    ok = (true_hands <= legal_labels).all(axis=1)
    rejected = int((~ok).sum())
    if not ok.any():
        raise MaskViolation("every sample in the batch violates its mask")
    states, hists = states[ok], hists[ok]
    legal_labels, true_hands = legal_labels[ok], true_hands[ok]
    logits, cache = net.forward(states, hists)
    loss, dlogits = masked_ce_and_grad(logits, true_hands, legal_labels)
    grads = net.backward(cache, dlogits)
    optimizer.step(net.params(), grads)
    return loss, rejected


def evaluate_masked_ce(net: PredictionNet, states, hists, legal_labels, true_hands, batch=256):
    """Mean per-head masked cross entropy on held-out data."""
    total, n = 0.0, 0
    for i in range(0, states.shape[0], batch):
        sl = slice(i, i + batch)
        logits, _ = net.forward(states[sl], hists[sl])
        loss, _ = masked_ce_and_grad(logits, true_hands[sl], legal_labels[sl])
        total += loss / len(HEAD_SIZES) * (logits.shape[0])
        n += logits.shape[0]
    return total / n


def masked_uniform_ce(legal_labels) -> float:
    """Mean per-head cross entropy of the masked-uniform baseline."""
    bounds = np.asarray(legal_labels)
    sizes = np.array(HEAD_SIZES)
    allowed = np.minimum(bounds, sizes[None, :] - 1) + 1
    return float(np.log(allowed).mean())


def expected_hand(prediction: np.ndarray) -> np.ndarray:
    """Per-rank expected count under a 69-value head prediction."""
    return expected_counts(prediction)


__all__ = [
    "MaskViolation",
    "PredictionNet",
    "predict_hand",
    "head_masks",
    "masked_head_probs",
    "masked_ce_and_grad",
    "prediction_train_step",
    "evaluate_masked_ce",
    "masked_uniform_ce",
    "expected_hand",
]
