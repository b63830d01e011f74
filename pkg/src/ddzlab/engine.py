"""Three-player game state machine: turn flow, tricks, terminal payoffs."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Optional

from .cards import CardSet, Deal, parse_cards, format_cards, parse_deal, format_deal
from .moves import Move, MoveCategory, PASS, beats, classify, generate_legal_moves


class Position(IntEnum):
    Landlord = 0
    LandlordDown = 1
    LandlordUp = 2

    def next(self) -> "Position":
        return Position((self + 1) % 3)


class IllegalMoveError(ValueError):
    """Move rejected; the message names the violated rule."""


class TerminalStateError(ValueError):
    """Operation requires a non-terminal (or terminal) state."""


@dataclass(frozen=True)
class Payoff:
    scores: tuple  # indexed by Position
    metric: str  # "WP" or "ADP"


@dataclass(frozen=True)
class GameState:
    """Immutable full game state; step() returns a new value."""

    deal: Deal
    hands: tuple  # per-Position CardSet
    played: tuple  # per-Position CardSet, cards shed so far
    history: tuple  # ordered (Position, Move) pairs
    current_player: Position
    trick_incumbent: Optional[tuple]  # (Position, Move) or None when leading
    bombs_played: int

    def hand(self, pos: Position) -> CardSet:
        return self.hands[pos]

    def is_terminal(self) -> bool:
        return any(h.total() == 0 for h in self.hands)

    def winner_side(self) -> str:
        """"landlord" or "peasants"; terminal states only."""
        if not self.is_terminal():
            raise TerminalStateError("game is not over")
        return "landlord" if self.hands[Position.Landlord].total() == 0 else "peasants"


def new_game(deal: Deal) -> GameState:
    return GameState(
        deal=deal,
        hands=(deal.landlord, deal.down, deal.up),
        played=(CardSet.empty(),) * 3,
        history=(),
        current_player=Position.Landlord,
        trick_incumbent=None,
        bombs_played=0,
    )


def legal_actions(state: GameState) -> list:
    if state.is_terminal():
        raise TerminalStateError("no legal actions in a terminal state")
    hand = state.hands[state.current_player]
    if state.trick_incumbent is None:
        return generate_legal_moves(hand, None)
    owner, incumbent = state.trick_incumbent
    if owner == state.current_player:
        # both others passed; lead a fresh trick
        return generate_legal_moves(hand, None)
    return generate_legal_moves(hand, incumbent)


def step(state: GameState, move: Move) -> GameState:
    """Apply a move, validating it against the trick rules."""
    if state.is_terminal():
        raise TerminalStateError("cannot step a terminal state")
    pos = state.current_player
    hand = state.hands[pos]

    leading = state.trick_incumbent is None or state.trick_incumbent[0] == pos
    if move.is_pass():
        if leading:
            raise IllegalMoveError("leader cannot pass")
    else:
        if not hand.contains(move.cards):
            raise IllegalMoveError("cards not in hand")
        checked = classify(move.cards)
        if (checked.category, checked.main_rank, checked.chain_len) != (
            move.category,
            move.main_rank,
            move.chain_len,
        ):
            raise IllegalMoveError("move fields inconsistent with its cards")
        if not leading and not beats(move, state.trick_incumbent[1]):
            incumbent_move = state.trick_incumbent[1]
            if move.category != incumbent_move.category and not move.is_bomb_like():
                raise IllegalMoveError("category mismatch")
            if move.chain_len != incumbent_move.chain_len and not move.is_bomb_like():
                raise IllegalMoveError("chain length mismatch")
            raise IllegalMoveError("rank does not beat the incumbent move")

    hands = list(state.hands)
    played = list(state.played)
    if move.is_pass():
        incumbent = state.trick_incumbent
    else:
        hands[pos] = hand.sub(move.cards)
        played[pos] = state.played[pos].add(move.cards)
        incumbent = (pos, move)

    nxt = pos.next()
    # a trick closes when play returns to the incumbent's owner
    return GameState(
        deal=state.deal,
        hands=tuple(hands),
        played=tuple(played),
        history=state.history + ((pos, move),),
        current_player=nxt,
        trick_incumbent=None if (incumbent is not None and incumbent[0] == nxt) else incumbent,
        bombs_played=state.bombs_played + (1 if move.is_bomb_like() else 0),
    )


def payoff(state: GameState, metric: str = "WP") -> Payoff:
    """Terminal scores; WP = +/-1, ADP = +/-2^bombs, Landlord vs Peasants."""
    if metric not in ("WP", "ADP"):
        raise ValueError(f"unknown metric {metric!r}")
    side = state.winner_side()  # raises on non-terminal
    magnitude = 1 if metric == "WP" else 2 ** state.bombs_played
    landlord = magnitude if side == "landlord" else -magnitude
    return Payoff(scores=(landlord, -landlord, -landlord), metric=metric)


def replay(deal: Deal, moves) -> GameState:
    """Rebuild a state by stepping a move sequence from a deal."""
    state = new_game(deal)
    for move in moves:
        state = step(state, move)
    return state


# --- game-log format: deal line, then one "position:cards" line per move ---

_POS_NAMES = {p.name: p for p in Position}


def write_game_log(state: GameState) -> str:
    lines = [format_deal(state.deal)]
    for pos, move in state.history:
        lines.append(f"{Position(pos).name}:{'pass' if move.is_pass() else format_cards(move.cards)}")
    return "\n".join(lines) + "\n"


def read_game_log(text: str) -> GameState:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    deal = parse_deal(lines[0])
    state = new_game(deal)
    for ln in lines[1:]:
        name, cards = ln.split(":", 1)
        pos = _POS_NAMES[name]
        if pos != state.current_player:
            raise IllegalMoveError(f"log out of turn at {ln!r}")
        move = PASS if cards == "pass" else classify(parse_cards(cards))
        state = step(state, move)
    return state
