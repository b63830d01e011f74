"""Observation, action, and history encodings shared by trainer, models, and service.

The card matrix is the flattened 4x15 one-hot count encoding: entry
row*15 + rank is set iff the multiset holds at least row+1 copies of the
rank, so each rank column is a prefix pattern.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .cards import CardSet, NUM_RANKS, RANK_MAX
from .engine import GameState, Position

CARD_MATRIX_DIM = 60
HISTORY_LEN = 15
COUNT_SLOTS = 21  # one-hot remaining-card count, 0..20
BOMB_SLOTS = 15  # bombs played, 0..14 (13 bombs + rocket)
PREDICTION_DIM = 69  # 13 ranks x 5 count classes + 2 jokers x 2

STATE_FIELDS = (
    ("own_hand", CARD_MATRIX_DIM),
    ("others_union", CARD_MATRIX_DIM),
    ("played_by_next", CARD_MATRIX_DIM),
    ("played_by_after_next", CARD_MATRIX_DIM),
    ("last_move", CARD_MATRIX_DIM),
    ("count_next", COUNT_SLOTS),
    ("count_after_next", COUNT_SLOTS),
    ("bombs", BOMB_SLOTS),
)
STATE_DIM = sum(n for _, n in STATE_FIELDS)  # 357
AUGMENTED_STATE_DIM = STATE_DIM + PREDICTION_DIM  # 426
ACTION_DIM = CARD_MATRIX_DIM

# per-head class counts of the hand-prediction output
HEAD_SIZES = (5,) * 13 + (2, 2)
HEAD_OFFSETS = tuple(np.cumsum((0,) + HEAD_SIZES[:-1]).tolist())


def layout_descriptor() -> dict:
    """Versioned name/offset/length map, serialized with checkpoints."""
    fields = []
    off = 0
    for name, n in STATE_FIELDS:
        fields.append({"name": name, "offset": off, "length": n})
        off += n
    return {
        "version": 1,
        "state_dim": STATE_DIM,
        "augmented_state_dim": AUGMENTED_STATE_DIM,
        "action_dim": ACTION_DIM,
        "history_len": HISTORY_LEN,
        "prediction_dim": PREDICTION_DIM,
        "head_sizes": list(HEAD_SIZES),
        "fields": fields,
    }


def layout_hash() -> str:
    blob = json.dumps(layout_descriptor(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def encode_cardset(cards: CardSet) -> np.ndarray:
    out = np.zeros(CARD_MATRIX_DIM, dtype=np.float32)
    for rank, c in enumerate(cards.counts):
        for row in range(c):
            out[row * NUM_RANKS + rank] = 1.0
    return out


def decode_cardmatrix(matrix: np.ndarray) -> CardSet:
    counts = matrix.reshape(4, NUM_RANKS).sum(axis=0).astype(int)
    return CardSet.from_counts(counts)


def _onehot(n, i):
    v = np.zeros(n, dtype=np.float32)
    v[min(i, n - 1)] = 1.0
    return v


def encode_state(state: GameState, viewer: Position):
    """Viewer-observable features: (state vector, history matrix).

    The two hidden hands appear only through their union and sizes, so the
    encoding cannot leak the split between them.
    """
    nxt = viewer.next()
    after = nxt.next()
    union = state.hands[nxt].add(state.hands[after])
    last = (
        CardSet.empty()
        if state.trick_incumbent is None
        else state.trick_incumbent[1].cards
    )
    parts = [
        encode_cardset(state.hands[viewer]),
        encode_cardset(union),
        encode_cardset(state.played[nxt]),
        encode_cardset(state.played[after]),
        encode_cardset(last),
        _onehot(COUNT_SLOTS, state.hands[nxt].total()),
        _onehot(COUNT_SLOTS, state.hands[after].total()),
        _onehot(BOMB_SLOTS, state.bombs_played),
    ]
    return np.concatenate(parts), encode_history(state)


def encode_history(state: GameState) -> np.ndarray:
    """Last HISTORY_LEN moves as card matrices, oldest first, front-padded.

    Pass is the all-zero matrix, indistinguishable from padding by design.
    """
    out = np.zeros((HISTORY_LEN, CARD_MATRIX_DIM), dtype=np.float32)
    recent = state.history[-HISTORY_LEN:]
    start = HISTORY_LEN - len(recent)
    for i, (_, move) in enumerate(recent):
        if not move.is_pass():
            out[start + i] = encode_cardset(move.cards)
    return out


def legal_label(state: GameState, viewer: Position) -> np.ndarray:
    """Per-rank upper bound on the next player's holding."""
    own = state.hands[viewer]
    played = state.played[0].add(state.played[1]).add(state.played[2])
    bound = np.array(RANK_MAX, dtype=np.int64) - own.as_array() - played.as_array()
    return bound


def augment(state_vec: np.ndarray, prediction: np.ndarray) -> np.ndarray:
    """Append the 69 hand-prediction probabilities to the state vector."""
    if state_vec.shape != (STATE_DIM,):
        raise ValueError(f"state vector must have {STATE_DIM} entries")
    if prediction.shape != (PREDICTION_DIM,):
        raise ValueError(f"prediction must have {PREDICTION_DIM} entries")
    for off, size in zip(HEAD_OFFSETS, HEAD_SIZES):
        s = prediction[off : off + size].sum()
        if abs(s - 1.0) > 1e-4:
            raise ValueError(f"prediction block at {off} sums to {s}, not 1")
    return np.concatenate([state_vec, prediction.astype(np.float32)])


def uniform_prediction() -> np.ndarray:
    """Per-head uniform distributions (the no-information prior)."""
    out = np.zeros(PREDICTION_DIM, dtype=np.float32)
    for off, size in zip(HEAD_OFFSETS, HEAD_SIZES):
        out[off : off + size] = 1.0 / size
    return out


def hand_onehot_prediction(hand: CardSet) -> np.ndarray:
    """Degenerate one-hot distributions encoding an exactly-known hand."""
    out = np.zeros(PREDICTION_DIM, dtype=np.float32)
    for rank, (off, size) in enumerate(zip(HEAD_OFFSETS, HEAD_SIZES)):
        out[off + min(hand.count(rank), size - 1)] = 1.0
    return out


def expected_counts(prediction: np.ndarray) -> np.ndarray:
    """Expected per-rank count under the 15 head distributions."""
    out = np.zeros(NUM_RANKS)
    for rank, (off, size) in enumerate(zip(HEAD_OFFSETS, HEAD_SIZES)):
        out[rank] = (prediction[off : off + size] * np.arange(size)).sum()
    return out
