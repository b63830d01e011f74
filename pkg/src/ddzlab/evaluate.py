"""Paired-deck tournaments between two agents with side switching."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cards import Deal, deal_cards, format_deal, parse_deal
from .engine import Position, legal_actions, new_game, payoff, step
from .features import augment, encode_cardset, encode_state, legal_label, uniform_prediction
from .models import predict_hand


class Agent:
    """Base policy: must return one of the offered legal moves."""

    name = "agent"

    def act(self, state, legal, rng):
        raise NotImplementedError


class RandomAgent(Agent):
    name = "random"

    def act(self, state, legal, rng):
        return legal[int(rng.integers(0, len(legal)))]


class GreedyRuleAgent(Agent):
    """Deterministic baseline: shed as many cards as possible, lowest rank
    first, bombs and rocket only when nothing else beats."""

    name = "greedy-rule"

    def act(self, state, legal, rng):
        playable = [m for m in legal if not m.is_pass()]
        if not playable:
            return legal[0]
        return min(
            playable,
            key=lambda m: (
                1 if m.is_bomb_like() else 0,
                -m.cards.total(),
                m.main_rank,
                m.sort_key(),
            ),
        )


class CheckpointAgent(Agent):
    """Greedy argmax-Q policy over per-position decision networks."""

    def __init__(self, decision_nets, prediction_nets=None, name="checkpoint", epsilon=0.0):
        self.decision_nets = decision_nets  # dict Position -> DecisionNet
        self.prediction_nets = prediction_nets  # dict Position -> PredictionNet or None
        self.name = name
        self.epsilon = epsilon

    def act(self, state, legal, rng):
        if self.epsilon > 0.0 and rng.random() < self.epsilon:
            return legal[int(rng.integers(0, len(legal)))]
        pos = state.current_player
        net = self.decision_nets[pos]
        state_vec, hist = encode_state(state, pos)
        if net.state_dim > state_vec.shape[0]:
            if self.prediction_nets is not None:
                pred = predict_hand(
                    self.prediction_nets[pos], state_vec, hist, legal_label(state, pos)
                )
            else:
                pred = uniform_prediction()
            state_vec = augment(state_vec, pred)
        actions = np.stack([encode_cardset(m.cards) for m in legal])
        q = net.q_for_actions(state_vec, hist, actions)
        return legal[int(np.argmax(q))]


@dataclass
class GameResult:
    winner_side: str  # "landlord" or "peasants"
    bombs: int
    landlord_points: float  # ADP-style signed points for the Landlord


@dataclass
class TournamentReport:
    agent_a: str
    agent_b: str
    games_played: int
    wins_a: int
    wp_a: float
    adp_a: float
    seed: int
    pair_outcomes: list = field(default_factory=list)

    @property
    def wp_b(self):
        return 1.0 - self.wp_a

    @property
    def adp_b(self):
        return -self.adp_a

    def to_json(self) -> str:
        return json.dumps(
            {
                "agent_a": self.agent_a,
                "agent_b": self.agent_b,
                "games_played": self.games_played,
                "wins_a": self.wins_a,
                "wp_a": self.wp_a,
                "adp_a": self.adp_a,
                "wp_b": self.wp_b,
                "adp_b": self.adp_b,
                "seed": self.seed,
            },
            indent=2,
        )

    def to_text(self) -> str:
        lines = ["deck\tgame\tlandlord_agent\twinner_side\tbombs\tpoints_a"]
        for row in self.pair_outcomes:
            lines.append("\t".join(str(x) for x in row))
        lines.append(
            f"# games={self.games_played} wp_a={self.wp_a:.4f} adp_a={self.adp_a:.4f}"
        )
        return "\n".join(lines) + "\n"


def play_game(deal: Deal, agents: dict, rng) -> GameResult:
    """agents maps Position -> Agent; returns the terminal result."""
    state = new_game(deal)
    while not state.is_terminal():
        legal = legal_actions(state)
        move = agents[state.current_player].act(state, legal, rng)
        state = step(state, move)
    adp = payoff(state, "ADP")
    return GameResult(
        winner_side=state.winner_side(),
        bombs=state.bombs_played,
        landlord_points=float(adp.scores[Position.Landlord]),
    )


def paired_play(deal: Deal, agent_a: Agent, agent_b: Agent, rng):
    """Both agents play the same deck from both sides (A lands first)."""
    g1 = play_game(
        deal,
        {Position.Landlord: agent_a, Position.LandlordDown: agent_b, Position.LandlordUp: agent_b},
        rng,
    )
    g2 = play_game(
        deal,
        {Position.Landlord: agent_b, Position.LandlordDown: agent_a, Position.LandlordUp: agent_a},
        rng,
    )
    return g1, g2


def run_tournament(agent_a: Agent, agent_b: Agent, decks, seed=0) -> TournamentReport:
    """Aggregate paired_play over all decks; deterministic given seed."""
    decks = list(decks)
    if not decks:
        raise ValueError("need at least one deck")
    wins_a = 0
    points_a = 0.0
    outcomes = []
    for i, deal in enumerate(decks):
        rng = np.random.Generator(np.random.PCG64([seed, i]))
        g1, g2 = paired_play(deal, agent_a, agent_b, rng)
        # game 1: A is Landlord
        a_won_1 = g1.winner_side == "landlord"
        pts_1 = g1.landlord_points
        # game 2: A is both Peasants
        a_won_2 = g2.winner_side == "peasants"
        pts_2 = -g2.landlord_points
        wins_a += int(a_won_1) + int(a_won_2)
        points_a += pts_1 + pts_2
        outcomes.append((i, 1, agent_a.name, g1.winner_side, g1.bombs, pts_1))
        outcomes.append((i, 2, agent_b.name, g2.winner_side, g2.bombs, pts_2))
    games = 2 * len(decks)
    return TournamentReport(
        agent_a=agent_a.name,
        agent_b=agent_b.name,
        games_played=games,
        wins_a=wins_a,
        wp_a=wins_a / games,
        adp_a=points_a / games,
        seed=seed,
        pair_outcomes=outcomes,
    )


def write_decks(path, n, seed):
    """Deck file: one "landlord|down|up" deal per line."""
    with open(path, "w") as f:
        for i in range(n):
            f.write(format_deal(deal_cards_from(seed, i)) + "\n")


def deal_cards_from(seed, index) -> Deal:
    """Stable per-index deal stream for deck files and evaluation."""
    mixed = (seed * 0x9E3779B97F4A7C15 + index) % (2**63)
    return deal_cards(mixed)


def read_decks(path):
    return [parse_deal(line) for line in Path(path).read_text().splitlines() if line.strip()]
