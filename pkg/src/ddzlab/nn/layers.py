"""Minimal numpy layers with analytic gradients.

Every layer exposes:
  forward(x) -> (y, cache)
  backward(cache, dy) -> (dx, grads)
where grads maps parameter names (prefixed by the layer name) to arrays
with the same shapes as the parameters.
"""

from __future__ import annotations

import numpy as np


def fan_in_uniform(rng, shape, fan_in):
    limit = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-limit, limit, size=shape)


class Dense:
    """Affine layer with optional relu/sigmoid/tanh activation."""

    def __init__(self, n_in, n_out, activation="linear", name="dense", rng=None):
        if activation not in ("linear", "relu", "sigmoid", "tanh"):
            raise ValueError(f"unknown activation {activation!r}")
        rng = rng or np.random.default_rng(0)
        self.name = name
        self.n_in, self.n_out = n_in, n_out
        self.activation = activation
        self.W = fan_in_uniform(rng, (n_in, n_out), n_in)
        self.b = np.zeros(n_out)

    def params(self):
        return {f"{self.name}.W": self.W, f"{self.name}.b": self.b}

    def spec(self):
        return {"type": "dense", "in": self.n_in, "out": self.n_out, "act": self.activation}

    def forward(self, x):
        z = x @ self.W + self.b
        if self.activation == "relu":
            y = np.maximum(z, 0.0)
        elif self.activation == "sigmoid":
            y = 1.0 / (1.0 + np.exp(-z))
        elif self.activation == "tanh":
            y = np.tanh(z)
        else:
            y = z
        return y, (x, z, y)

    def backward(self, cache, dy):
        x, z, y = cache
        if self.activation == "relu":
            dz = dy * (z > 0)
        elif self.activation == "sigmoid":
            dz = dy * y * (1.0 - y)
        elif self.activation == "tanh":
            dz = dy * (1.0 - y * y)
        else:
            dz = dy
        grads = {
            f"{self.name}.W": x.T @ dz,
            f"{self.name}.b": dz.sum(axis=0),
        }
        return dz @ self.W.T, grads


class Embedding:
    """Token-index lookup table."""

    def __init__(self, vocab, dim, name="emb", rng=None):
        rng = rng or np.random.default_rng(0)
        self.name = name
        self.vocab, self.dim = vocab, dim
        self.table = fan_in_uniform(rng, (vocab, dim), dim)

    def params(self):
        return {f"{self.name}.table": self.table}

    def spec(self):
        return {"type": "embedding", "vocab": self.vocab, "dim": self.dim}

    def forward(self, idx):
        return self.table[idx], idx

    def backward(self, cache, dy):
        idx = cache
        grad = np.zeros_like(self.table)
        np.add.at(grad, idx.reshape(-1), dy.reshape(-1, self.dim))
        return None, {f"{self.name}.table": grad}


class LSTM:
    """Single-layer LSTM; returns the final hidden state as the summary."""

    def __init__(self, n_in, n_hidden, name="lstm", rng=None):
        rng = rng or np.random.default_rng(0)
        self.name = name
        self.n_in, self.n_hidden = n_in, n_hidden
        self.W = fan_in_uniform(rng, (n_in + n_hidden, 4 * n_hidden), n_in + n_hidden)
        self.b = np.zeros(4 * n_hidden)

    def params(self):
        return {f"{self.name}.W": self.W, f"{self.name}.b": self.b}

    def spec(self):
        return {"type": "lstm", "in": self.n_in, "hidden": self.n_hidden}

    def forward(self, x):
        # x: (B, T, n_in) -> (B, n_hidden)
        B, T, _ = x.shape
        H = self.n_hidden
        h = np.zeros((B, H))
        c = np.zeros((B, H))
        steps = []
        for t in range(T):
            xh = np.concatenate([x[:, t, :], h], axis=1)
            gates = xh @ self.W + self.b
            i = _sigmoid(gates[:, :H])
            f = _sigmoid(gates[:, H : 2 * H])
            g = np.tanh(gates[:, 2 * H : 3 * H])
            o = _sigmoid(gates[:, 3 * H :])
            c_prev = c
            c = f * c_prev + i * g
            tc = np.tanh(c)
            h = o * tc
            steps.append((xh, i, f, g, o, c_prev, c, tc))
        return h, (x.shape, steps)

    def backward(self, cache, dh_last):
        shape, steps = cache
        B, T, n_in = shape
        H = self.n_hidden
        dW = np.zeros_like(self.W)
        db = np.zeros_like(self.b)
        dx = np.zeros((B, T, n_in))
        dh = dh_last.copy()
        dc = np.zeros((B, H))
        for t in range(T - 1, -1, -1):
            xh, i, f, g, o, c_prev, c, tc = steps[t]
            do = dh * tc
            dc = dc + dh * o * (1.0 - tc * tc)
            di = dc * g
            df = dc * c_prev
            dg = dc * i
            dgates = np.concatenate(
                [
                    di * i * (1.0 - i),
                    df * f * (1.0 - f),
                    dg * (1.0 - g * g),
                    do * o * (1.0 - o),
                ],
                axis=1,
            )
            dW += xh.T @ dgates
            db += dgates.sum(axis=0)
            dxh = dgates @ self.W.T
            dx[:, t, :] = dxh[:, :n_in]
            dh = dxh[:, n_in:]
            dc = dc * f
        return dx, {f"{self.name}.W": dW, f"{self.name}.b": db}


class MultiHead:
    """Parallel linear heads over a shared input, concatenated logits."""

    def __init__(self, n_in, head_sizes, name="heads", rng=None):
        rng = rng or np.random.default_rng(0)
        self.name = name
        self.n_in = n_in
        self.head_sizes = tuple(head_sizes)
        n_out = sum(head_sizes)
        self.W = fan_in_uniform(rng, (n_in, n_out), n_in)
        self.b = np.zeros(n_out)

    def params(self):
        return {f"{self.name}.W": self.W, f"{self.name}.b": self.b}

    def spec(self):
        return {"type": "multi_head", "in": self.n_in, "heads": list(self.head_sizes)}

    def forward(self, x):
        return x @ self.W + self.b, x

    def backward(self, cache, dy):
        x = cache
        grads = {f"{self.name}.W": x.T @ dy, f"{self.name}.b": dy.sum(axis=0)}
        return dy @ self.W.T, grads


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))
