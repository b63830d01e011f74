"""DouDizhu self-play training and evaluation laboratory."""

__version__ = "0.1.0"

from .cards import CardSet, Deal, parse_cards, format_cards, deal_cards
from .moves import Move, MoveCategory, PASS, beats, classify, generate_legal_moves
from .engine import GameState, Position, new_game, step, legal_actions, payoff

__all__ = [
    "CardSet",
    "Deal",
    "parse_cards",
    "format_cards",
    "deal_cards",
    "Move",
    "MoveCategory",
    "PASS",
    "beats",
    "classify",
    "generate_legal_moves",
    "GameState",
    "Position",
    "new_game",
    "step",
    "legal_actions",
    "payoff",
]
