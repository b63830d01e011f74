"""Parameter-update rules: plain SGD and an RMSProp-style adaptive rule."""

from __future__ import annotations

import numpy as np


class NonFiniteGradient(Warning):
    pass


class _OptimizerBase:
    def __init__(self, lr):
        self.lr = lr
        self.update_counter = 0
        self.skipped = 0

    def step(self, params: dict, grads: dict) -> bool:
        """Apply one update in place. Returns False (and skips) when any
        gradient is non-finite."""
        for name in params:
            if name not in grads:
                raise KeyError(f"missing gradient for {name}")
            if params[name].shape != grads[name].shape:
                raise ValueError(f"gradient shape mismatch for {name}")
        if any(not np.isfinite(g).all() for g in grads.values()):
            self.skipped += 1
            return False
        self._apply(params, grads)
        self.update_counter += 1
        return True

    def state(self) -> dict:
        return {"update_counter": self.update_counter, "skipped": self.skipped}

    def load_state(self, state: dict):
        self.update_counter = int(state["update_counter"])
        self.skipped = int(state.get("skipped", 0))


class SGD(_OptimizerBase):
    def _apply(self, params, grads):
        for name, p in params.items():
            p -= self.lr * grads[name]


class RMSProp(_OptimizerBase):
    def __init__(self, lr=1e-4, decay=0.99, eps=1e-5):
        super().__init__(lr)
        self.decay = decay
        self.eps = eps
        self.sq = {}

    def _apply(self, params, grads):
        for name, p in params.items():
            g = grads[name]
            sq = self.sq.get(name)
            if sq is None:
                sq = np.zeros_like(p)
                self.sq[name] = sq
            sq *= self.decay
            sq += (1.0 - self.decay) * g * g
            p -= self.lr * g / (np.sqrt(sq) + self.eps)

    def state(self):
        s = super().state()
        s["sq"] = {k: v.copy() for k, v in self.sq.items()}
        return s

    def load_state(self, state):
        super().load_state(state)
        self.sq = {k: np.array(v) for k, v in state.get("sq", {}).items()}


def make_optimizer(kind: str, lr: float):
    if kind == "sgd":
        return SGD(lr)
    if kind == "rmsprop":
        return RMSProp(lr)
    raise ValueError(f"unknown optimizer {kind!r}")
