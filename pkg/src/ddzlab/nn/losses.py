"""Scalar losses returning (value, gradient-w.r.t.-prediction)."""

from __future__ import annotations

import numpy as np

PROB_EPS = 1e-7


def loss_mse(pred, target):
    """Mean squared error over all elements."""
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch {pred.shape} vs {target.shape}")
    diff = pred - target
    n = diff.size
    return float((diff * diff).sum() / n), 2.0 * diff / n


def masked_log_softmax(logits, mask):
    """Log-softmax restricted to allowed classes (mask=False -> -inf)."""
    neg = np.where(mask, logits, -np.inf)
    m = neg.max(axis=-1, keepdims=True)
    shifted = neg - m
    ex = np.where(mask, np.exp(shifted), 0.0)
    z = ex.sum(axis=-1, keepdims=True)
    logp = np.where(mask, shifted - np.log(z), -np.inf)
    return logp, ex / z


def loss_masked_cross_entropy(logits, labels, mask):
    """Cross entropy with disallowed classes excluded from the softmax.

    logits: (B, K); labels: (B,) int; mask: (B, K) bool, labels must be
    allowed. Returns (mean loss, dlogits).
    """
    logits = np.asarray(logits, dtype=float)
    labels = np.asarray(labels, dtype=int)
    mask = np.asarray(mask, dtype=bool)
    B = logits.shape[0]
    if not mask[np.arange(B), labels].all():
        raise ValueError("label outside its allowed-class mask")
    if not mask.any(axis=-1).all():
        raise ValueError("empty allowed-class mask")
    logp, p = masked_log_softmax(logits, mask)
    loss = -logp[np.arange(B), labels].mean()
    dlogits = p.copy()
    dlogits[np.arange(B), labels] -= 1.0
    dlogits /= B
    dlogits[~mask] = 0.0
    return float(loss), dlogits


def loss_bce(p, label):
    """Binary cross entropy on probabilities, clamped away from {0,1}."""
    p = np.asarray(p, dtype=float)
    label = np.asarray(label, dtype=float)
    pc = np.clip(p, PROB_EPS, 1.0 - PROB_EPS)
    loss = -(label * np.log(pc) + (1.0 - label) * np.log(1.0 - pc)).mean()
    dp = np.where(
        (p > PROB_EPS) & (p < 1.0 - PROB_EPS),
        (pc - label) / (pc * (1.0 - pc)),
        0.0,
    ) / p.size
    return float(loss), dp
