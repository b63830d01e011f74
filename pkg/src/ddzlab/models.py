"""Network assemblies: decision (Q), hand-prediction, and coach models."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .cards import NUM_RANKS
from .features import (
    ACTION_DIM,
    AUGMENTED_STATE_DIM,
    CARD_MATRIX_DIM,
    HEAD_OFFSETS,
    HEAD_SIZES,
    STATE_DIM,
    layout_hash,
)
from .nn.layers import Dense, Embedding, LSTM, MultiHead
from .nn.losses import masked_log_softmax
from .nn.checkpoint import save_checkpoint, load_checkpoint


@dataclass
class NetSizes:
    """Architecture scale; defaults follow the published system scale."""

    lstm_hidden: int = 128
    mlp_width: int = 512
    decision_layers: int = 6
    prediction_shared_layers: int = 5
    coach_embed_dim: int = 64
    coach_width: int = 512
    coach_layers: int = 3


def _spec_hash(spec) -> str:
    return hashlib.sha256(json.dumps(spec, sort_keys=True).encode()).hexdigest()[:16]


class _ModelBase:
    def params(self) -> dict:
        out = {}
        for layer in self.layers():
            out.update(layer.params())
        return out

    def spec(self):
        return [layer.spec() for layer in self.layers()]

    def spec_hash(self) -> str:
        return _spec_hash(self.spec())

    def snapshot(self) -> dict:
        return {k: v.copy() for k, v in self.params().items()}

    def load_params(self, params: dict):
        own = self.params()
        if set(own) != set(params):
            raise ValueError("parameter name mismatch")
        for k, v in own.items():
            v[...] = params[k]

    def save(self, path, update_counter=0):
        save_checkpoint(path, self.params(), self.spec_hash(), layout_hash(), update_counter)

    def load(self, path) -> dict:
        params, header = load_checkpoint(
            path, expect_spec_hash=self.spec_hash(), expect_layout_hash=layout_hash()
        )
        self.load_params(params)
        return header


class DecisionNet(_ModelBase):
    """History LSTM + state/action MLP tower producing a scalar Q."""

    def __init__(self, state_dim=AUGMENTED_STATE_DIM, sizes=None, seed=0):
        sizes = sizes or NetSizes()
        rng = np.random.default_rng(seed)
        self.state_dim = state_dim
        self.lstm = LSTM(CARD_MATRIX_DIM, sizes.lstm_hidden, name="lstm", rng=rng)
        n_in = sizes.lstm_hidden + state_dim + ACTION_DIM
        self.mlp = []
        for i in range(sizes.decision_layers):
            self.mlp.append(Dense(n_in, sizes.mlp_width, "relu", name=f"mlp{i}", rng=rng))
            n_in = sizes.mlp_width
        self.head = Dense(n_in, 1, "linear", name="q", rng=rng)

    def layers(self):
        return [self.lstm, *self.mlp, self.head]

    def forward(self, state, hist, action):
        """state (B,S), hist (B,T,60), action (B,60) -> q (B,), cache."""
        h, lstm_cache = self.lstm.forward(hist)
        x = np.concatenate([h, state, action], axis=1)
        caches = []
        for layer in self.mlp:
            x, c = layer.forward(x)
            caches.append(c)
        q, head_cache = self.head.forward(x)
        return q[:, 0], (lstm_cache, caches, head_cache)

    def backward(self, cache, dq):
        lstm_cache, caches, head_cache = cache
        grads = {}
        dx, g = self.head.backward(head_cache, dq[:, None])
        grads.update(g)
        for layer, c in zip(reversed(self.mlp), reversed(caches)):
            dx, g = layer.backward(c, dx)
            grads.update(g)
        H = self.lstm.n_hidden
        dh = dx[:, :H]
        _, g = self.lstm.backward(lstm_cache, dh)
        grads.update(g)
        return grads

    def q_for_actions(self, state_vec, hist, actions):
        """Q for one state across many candidate actions; LSTM runs once."""
        A = actions.shape[0]
        h, _ = self.lstm.forward(hist[None, :, :])
        x = np.concatenate(
            [np.repeat(h, A, axis=0), np.repeat(state_vec[None, :], A, axis=0), actions],
            axis=1,
        )
        for layer in self.mlp:
            x, _ = layer.forward(x)
        q, _ = self.head.forward(x)
        return q[:, 0]


class PredictionNet(_ModelBase):
    """Multi-head classifier over the next player's per-rank card counts."""

    def __init__(self, state_dim=STATE_DIM, sizes=None, seed=0):
        sizes = sizes or NetSizes()
        rng = np.random.default_rng(seed)
        self.state_dim = state_dim
        self.lstm = LSTM(CARD_MATRIX_DIM, sizes.lstm_hidden, name="lstm", rng=rng)
        n_in = sizes.lstm_hidden + state_dim
        self.shared = []
        for i in range(sizes.prediction_shared_layers):
            self.shared.append(Dense(n_in, sizes.mlp_width, "relu", name=f"shared{i}", rng=rng))
            n_in = sizes.mlp_width
        self.heads = MultiHead(n_in, HEAD_SIZES, name="heads", rng=rng)

    def layers(self):
        return [self.lstm, *self.shared, self.heads]

    def forward(self, state, hist):
        """-> logits (B, 69), cache."""
        h, lstm_cache = self.lstm.forward(hist)
        x = np.concatenate([h, state], axis=1)
        caches = []
        for layer in self.shared:
            x, c = layer.forward(x)
            caches.append(c)
        logits, head_cache = self.heads.forward(x)
        return logits, (lstm_cache, caches, head_cache)

    def backward(self, cache, dlogits):
        lstm_cache, caches, head_cache = cache
        grads = {}
        dx, g = self.heads.backward(head_cache, dlogits)
        grads.update(g)
        for layer, c in zip(reversed(self.shared), reversed(caches)):
            dx, g = layer.backward(c, dx)
            grads.update(g)
        H = self.lstm.n_hidden
        _, g = self.lstm.backward(lstm_cache, dx[:, :H])
        grads.update(g)
        return grads


def head_masks(legal_labels) -> np.ndarray:
    """(B, 69) bool mask allowing count classes 0..bound per head."""
    labels = np.asarray(legal_labels)
    if labels.ndim == 1:
        labels = labels[None, :]
    B = labels.shape[0]
    mask = np.zeros((B, sum(HEAD_SIZES)), dtype=bool)
    for rank in range(NUM_RANKS):
        off, size = HEAD_OFFSETS[rank], HEAD_SIZES[rank]
        for c in range(size):
            mask[:, off + c] = c <= labels[:, rank]
    return mask


def masked_head_probs(logits, legal_labels) -> np.ndarray:
    """Per-head masked softmax; disallowed classes get exactly 0."""
    logits = np.atleast_2d(logits)
    mask = head_masks(legal_labels)
    out = np.zeros_like(logits)
    for off, size in zip(HEAD_OFFSETS, HEAD_SIZES):
        _, p = masked_log_softmax(logits[:, off : off + size], mask[:, off : off + size])
        out[:, off : off + size] = p
    return out


def predict_hand(net: PredictionNet, state_vec, hist, legal_label) -> np.ndarray:
    """69-value masked hand prediction for a single observation."""
    logits, _ = net.forward(state_vec[None, :], hist[None, :, :])
    return masked_head_probs(logits, legal_label)[0]


class CoachNet(_ModelBase):
    """Deal -> Landlord win probability."""

    def __init__(self, sizes=None, seed=0):
        sizes = sizes or NetSizes()
        rng = np.random.default_rng(seed)
        self.embed = Embedding(NUM_RANKS, sizes.coach_embed_dim, name="emb", rng=rng)
        n_in = 54 * sizes.coach_embed_dim
        self.mlp = []
        for i in range(sizes.coach_layers):
            self.mlp.append(Dense(n_in, sizes.coach_width, "relu", name=f"mlp{i}", rng=rng))
            n_in = sizes.coach_width
        self.head = Dense(n_in, 1, "sigmoid", name="p", rng=rng)

    def layers(self):
        return [self.embed, *self.mlp, self.head]

    def forward(self, deal_tokens):
        """deal_tokens (B, 54) int -> p_win (B,), cache."""
        e, emb_cache = self.embed.forward(deal_tokens)
        x = e.reshape(e.shape[0], -1)
        caches = []
        for layer in self.mlp:
            x, c = layer.forward(x)
            caches.append(c)
        p, head_cache = self.head.forward(x)
        return p[:, 0], (emb_cache, caches, head_cache)

    def backward(self, cache, dp):
        emb_cache, caches, head_cache = cache
        grads = {}
        dx, g = self.head.backward(head_cache, dp[:, None])
        grads.update(g)
        for layer, c in zip(reversed(self.mlp), reversed(caches)):
            dx, g = layer.backward(c, dx)
            grads.update(g)
        B = dx.shape[0]
        _, g = self.embed.backward(emb_cache, dx.reshape(B, 54, -1))
        grads.update(g)
        return grads


def deal_tokens(deal) -> np.ndarray:
    """54 rank tokens: landlord(20) | down(17) | up(17), each sorted ascending."""
    toks = []
    for hand in deal.hands():
        toks.extend(hand.ranks())
    return np.array(toks, dtype=np.int64)


def coach_predict(net: CoachNet, deal) -> float:
    p, _ = net.forward(deal_tokens(deal)[None, :])
    return float(p[0])
