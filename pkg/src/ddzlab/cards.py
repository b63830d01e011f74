"""Rank arithmetic, card multisets, and deal generation.

Cards are suitless: a hand is a multiset of the 15 ranks
3 4 5 6 7 8 9 T J Q K A 2 B R (B/R = black/red joker).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RANK_CHARS = "3456789TJQKA2BR"
NUM_RANKS = 15
BLACK_JOKER = 13
RED_JOKER = 14

# max multiplicity per rank in the deck
RANK_MAX = (4,) * 13 + (1, 1)

DECK_SIZE = 54

_CHAR_TO_RANK = {c: i for i, c in enumerate(RANK_CHARS)}


class CardError(ValueError):
    """Invalid card text or multiplicity."""


@dataclass(frozen=True)
class CardSet:
    """Immutable multiset of ranks, stored as a 15-slot count tuple."""

    counts: tuple

    def __post_init__(self):
        if len(self.counts) != NUM_RANKS:
            raise CardError(f"expected {NUM_RANKS} count slots, got {len(self.counts)}")
        for i, c in enumerate(self.counts):
            if not 0 <= c <= RANK_MAX[i]:
                raise CardError(
                    f"rank {RANK_CHARS[i]} has count {c}, allowed 0..{RANK_MAX[i]}"
                )

    @staticmethod
    def empty() -> "CardSet":
        return _EMPTY

    @staticmethod
    def from_counts(counts) -> "CardSet":
        return CardSet(tuple(int(c) for c in counts))

    @staticmethod
    def full_deck() -> "CardSet":
        return _FULL_DECK

    def total(self) -> int:
        return sum(self.counts)

    def count(self, rank: int) -> int:
        return self.counts[rank]

    def add(self, other: "CardSet") -> "CardSet":
        return CardSet.from_counts(a + b for a, b in zip(self.counts, other.counts))

    def sub(self, other: "CardSet") -> "CardSet":
        return CardSet.from_counts(a - b for a, b in zip(self.counts, other.counts))

    def contains(self, other: "CardSet") -> bool:
        return all(a >= b for a, b in zip(self.counts, other.counts))

    def ranks(self):
        """Ranks present, ascending, one entry per copy."""
        for r, c in enumerate(self.counts):
            for _ in range(c):
                yield r

    def as_array(self) -> np.ndarray:
        return np.array(self.counts, dtype=np.int64)

    def __str__(self) -> str:
        return format_cards(self)

    def __repr__(self) -> str:
        return f"CardSet({format_cards(self)!r})"


_EMPTY = CardSet((0,) * NUM_RANKS)
_FULL_DECK = CardSet(RANK_MAX)


def parse_cards(text: str) -> CardSet:
    """Parse a rank string like "334TT2R" into a CardSet.

    Raises CardError on unknown characters or multiplicity overflow.
    """
    counts = [0] * NUM_RANKS
    for ch in text:
        r = _CHAR_TO_RANK.get(ch)
        if r is None:
            raise CardError(f"invalid card character {ch!r}")
        counts[r] += 1
        if counts[r] > RANK_MAX[r]:
            raise CardError(f"more than {RANK_MAX[r]} copies of rank {ch}")
    return CardSet(tuple(counts))


def format_cards(cards: CardSet) -> str:
    """Canonical ascending rank string; inverse of parse_cards."""
    return "".join(RANK_CHARS[r] * c for r, c in enumerate(cards.counts))


@dataclass(frozen=True)
class Deal:
    """The three initial hands: 20 for the Landlord, 17 each for the Peasants."""

    landlord: CardSet
    down: CardSet
    up: CardSet

    def __post_init__(self):
        if self.landlord.total() != 20 or self.down.total() != 17 or self.up.total() != 17:
            raise CardError("deal must split 20/17/17")
        if self.landlord.add(self.down).add(self.up) != CardSet.full_deck():
            raise CardError("deal does not partition the full deck")

    def hands(self):
        return (self.landlord, self.down, self.up)


def deal_cards(seed: int) -> Deal:
    """Uniform random 20/17/17 partition of the deck, deterministic per seed.

    Uses PCG64 with a Fisher-Yates shuffle over the 54 card slots.
    """
    slots = []
    for r in range(NUM_RANKS):
        slots.extend([r] * RANK_MAX[r])
    slots = np.array(slots, dtype=np.int64)
    rng = np.random.Generator(np.random.PCG64(seed))
    rng.shuffle(slots)
    counts = [[0] * NUM_RANKS for _ in range(3)]
    for i, r in enumerate(slots):
        who = 0 if i < 20 else (1 if i < 37 else 2)
        counts[who][int(r)] += 1
    return Deal(
        CardSet.from_counts(counts[0]),
        CardSet.from_counts(counts[1]),
        CardSet.from_counts(counts[2]),
    )


def parse_deal(line: str) -> Deal:
    """Parse one "landlord|down|up" deck-file line."""
    parts = line.strip().split("|")
    if len(parts) != 3:
        raise CardError("deal line must have three |-separated hands")
    return Deal(*(parse_cards(p) for p in parts))


def format_deal(deal: Deal) -> str:
    return "|".join(format_cards(h) for h in deal.hands())
