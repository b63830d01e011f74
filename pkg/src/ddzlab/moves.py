"""Move taxonomy, comparison rules, classification, and legal-move generation.

Generation work is delegated to a kernel: the compiled extension
ddzlab._movegen when it is importable, otherwise the pure-Python twin
ddzlab._movegen_py. Both return moves as plain tuples which are wrapped
into Move values here.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Optional

from .cards import CardSet, RANK_CHARS, NUM_RANKS

try:  # compiled kernel is optional
    from . import _movegen as _kernel

    KERNEL_IMPLEMENTATION = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    from . import _movegen_py as _kernel

    KERNEL_IMPLEMENTATION = "pure"

from . import _movegen_py as _pure_kernel


class MoveCategory(IntEnum):
    Pass = 0
    Solo = 1
    Pair = 2
    Trio = 3
    TrioSolo = 4
    TrioPair = 5
    ChainSolo = 6
    ChainPair = 7
    ChainTrio = 8
    PlaneSolo = 9
    PlanePair = 10
    QuadTwoSolo = 11
    QuadTwoPair = 12
    Bomb = 13
    Rocket = 14


CHAIN_TOP = 11  # chains run over 3..A

NO_RANK = -1


class InvalidMoveError(ValueError):
    """Card set does not form a single legal move."""


@dataclass(frozen=True)
class Move:
    category: MoveCategory
    main_rank: int  # NO_RANK for Pass/Rocket
    chain_len: int
    cards: CardSet

    def is_pass(self) -> bool:
        return self.category == MoveCategory.Pass

    def is_bomb_like(self) -> bool:
        return self.category in (MoveCategory.Bomb, MoveCategory.Rocket)

    def sort_key(self):
        return (int(self.category), self.chain_len, self.main_rank, self.cards.counts)

    def __str__(self) -> str:
        if self.is_pass():
            return "pass"
        return str(self.cards)

    def __repr__(self) -> str:
        return f"Move({self.category.name}, {self})"


PASS = Move(MoveCategory.Pass, NO_RANK, 0, CardSet.empty())


def _wrap(raw) -> Move:
    cat, main, clen, counts = raw
    return Move(MoveCategory(cat), main, clen, CardSet(counts))


def beats(candidate: Move, incumbent: Optional[Move]) -> bool:
    """True iff candidate legally beats incumbent (None/Pass = open lead)."""
    if candidate.is_pass():
        raise InvalidMoveError("Pass cannot beat anything")
    if incumbent is None or incumbent.is_pass():
        return True
    if candidate.category == MoveCategory.Rocket:
        return incumbent.category != MoveCategory.Rocket
    if incumbent.category == MoveCategory.Rocket:
        return False
    if candidate.category == MoveCategory.Bomb:
        if incumbent.category == MoveCategory.Bomb:
            return candidate.main_rank > incumbent.main_rank
        return True
    if incumbent.category == MoveCategory.Bomb:
        return False
    return (
        candidate.category == incumbent.category
        and candidate.chain_len == incumbent.chain_len
        and candidate.main_rank > incumbent.main_rank
    )


def generate_legal_moves(
    hand: CardSet, incumbent: Optional[Move] = None, use_kernel=None
) -> list:
    """All distinct moves playable from hand against incumbent.

    With no incumbent (or Pass) every leading move is returned and Pass is
    excluded; otherwise only beating moves plus exactly one Pass.
    Output is canonically ordered (category, chain length, main rank, cards).
    """
    kern = _kernel if use_kernel is None else use_kernel
    if incumbent is None or incumbent.is_pass():
        raw = kern.gen_moves(hand.counts, int(MoveCategory.Pass), 0, 0)
        moves = [_wrap(m) for m in raw]
    else:
        raw = kern.gen_moves(
            hand.counts,
            int(incumbent.category),
            incumbent.main_rank,
            incumbent.chain_len,
        )
        moves = [PASS] + [_wrap(m) for m in raw]
    moves.sort(key=Move.sort_key)
    return moves


def generate_legal_moves_pure(hand: CardSet, incumbent: Optional[Move] = None) -> list:
    """Force the pure-Python kernel (benchmark / cross-check)."""
    return generate_legal_moves(hand, incumbent, use_kernel=_pure_kernel)


def classify(cards: CardSet) -> Move:
    """Classify an exact card multiset as the unique move it forms.

    Raises InvalidMoveError when the set is not a single legal move.
    """
    counts = cards.counts
    total = sum(counts)
    present = [r for r in range(NUM_RANKS) if counts[r] > 0]

    if total == 0:
        return PASS
    if total == 1:
        return Move(MoveCategory.Solo, present[0], 0, cards)
    if total == 2:
        if counts[13] == 1 and counts[14] == 1:
            return Move(MoveCategory.Rocket, NO_RANK, 0, cards)
        if len(present) == 1 and counts[present[0]] == 2:
            return Move(MoveCategory.Pair, present[0], 0, cards)
        raise InvalidMoveError(f"{cards} is not a pair or rocket")
    if total == 3 and len(present) == 1:
        return Move(MoveCategory.Trio, present[0], 0, cards)
    if total == 4:
        if len(present) == 1:
            return Move(MoveCategory.Bomb, present[0], 0, cards)
        if len(present) == 2:
            trio = [r for r in present if counts[r] == 3]
            solo = [r for r in present if counts[r] == 1]
            if len(trio) == 1 and len(solo) == 1:
                return Move(MoveCategory.TrioSolo, trio[0], 0, cards)
    if total == 5 and len(present) == 2:
        trio = [r for r in present if counts[r] == 3]
        pair = [r for r in present if counts[r] == 2 and r < 13]
        if len(trio) == 1 and len(pair) == 1:
            return Move(MoveCategory.TrioPair, trio[0], 0, cards)
    if total == 6 and len(present) == 3:
        quad = [r for r in present if counts[r] == 4]
        solos = [r for r in present if counts[r] == 1]
        if len(quad) == 1 and len(solos) == 2:
            return Move(MoveCategory.QuadTwoSolo, quad[0], 0, cards)
    if total == 8 and len(present) == 3:
        quad = [r for r in present if counts[r] == 4]
        pairs = [r for r in present if counts[r] == 2 and r < 13]
        if len(quad) == 1 and len(pairs) == 2:
            return Move(MoveCategory.QuadTwoPair, quad[0], 0, cards)

    chain = _match_chain(counts, present, total)
    if chain is not None:
        return Move(chain[0], chain[1], chain[2], cards)
    plane = _match_plane(counts, total)
    if plane is not None:
        return Move(plane[0], plane[1], plane[2], cards)
    raise InvalidMoveError(f"{cards} is not a legal move")


def _match_chain(counts, present, total):
    if present and present[-1] > CHAIN_TOP:
        return None
    lo, hi = present[0], present[-1]
    length = hi - lo + 1
    if length != len(present):
        return None  # gap
    mult = counts[lo]
    if any(counts[r] != mult for r in present):
        return None
    if mult == 1 and length >= 5:
        return (MoveCategory.ChainSolo, hi, length)
    if mult == 2 and length >= 3:
        return (MoveCategory.ChainPair, hi, length)
    if mult == 3 and length >= 2:
        return (MoveCategory.ChainTrio, hi, length)
    return None


def _match_plane(counts, total):
    for kicker_mult, cat in ((1, MoveCategory.PlaneSolo), (2, MoveCategory.PlanePair)):
        per = 3 + kicker_mult
        if total % per != 0:
            continue
        length = total // per
        if length < 2:
            continue
        for start in range(0, CHAIN_TOP - length + 2):
            run = range(start, start + length)
            if any(counts[r] != 3 for r in run):
                continue
            kickers = [r for r in range(NUM_RANKS) if r not in run and counts[r] > 0]
            if len(kickers) != length:
                continue
            if any(counts[r] != kicker_mult for r in kickers):
                continue
            if kicker_mult == 2 and any(r >= 13 for r in kickers):
                continue
            return (cat, start + length - 1, length)
    return None


def enumerate_universe() -> list:
    """Every distinct non-Pass move playable from the full 54-card deck."""
    moves = generate_legal_moves(CardSet.full_deck(), None)
    return moves
