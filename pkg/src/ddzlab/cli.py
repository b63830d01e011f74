"""Operator command line: train, eval, gen-decks, inspect, play, serve.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 checkpoint
mismatch.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .cards import CardError, deal_cards, format_cards, parse_cards
from .config import ConfigError, load_config
from .engine import IllegalMoveError, Position, legal_actions, new_game, payoff, step
from .evaluate import (
    CheckpointAgent,
    GreedyRuleAgent,
    RandomAgent,
    deal_cards_from,
    read_decks,
    run_tournament,
    write_decks,
)
from .moves import PASS, InvalidMoveError, classify
from .nn.checkpoint import CheckpointMismatch, read_header
from .runs import SHORT_POS, load_run
from .trainer import train as run_training

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_CHECKPOINT = 4

_POS_BY_NAME = {v: k for k, v in SHORT_POS.items()}


def guarded(fn):
    """Map domain errors onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except CheckpointMismatch as exc:
            click.echo(f"checkpoint mismatch: {exc}", err=True)
            sys.exit(EXIT_CHECKPOINT)
        except (FileNotFoundError, PermissionError, IsADirectoryError) as exc:
            click.echo(f"i/o error: {exc}", err=True)
            sys.exit(EXIT_IO)

    return wrapper


@click.group()
@click.version_option(__version__)
def main():
    """DouDizhu training and evaluation laboratory."""


@main.command("train")
@click.argument("config_file", type=click.Path())
@click.option("--run-dir", required=True, type=click.Path(), help="Run artifact directory.")
@click.option("--set", "-o", "overrides", multiple=True, metavar="KEY=VALUE", help="Config override.")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--coach", type=click.Choice(["on", "off"]), default=None, help="Force coach gating on or off.")
@click.option("--resume", is_flag=True, help="Continue from the run directory's saved state.")
@guarded
def cmd_train(config_file, run_dir, overrides, seed, coach, resume):
    """Train networks per CONFIG_FILE into --run-dir."""
    extra = list(overrides)
    if seed is not None:
        extra.append(f"seed={seed}")
    if coach is not None:
        extra.append(f"coach_enabled={'true' if coach == 'on' else 'false'}")
    config = load_config(config_file, extra)
    out = run_training(config, run_dir, resume=resume)
    click.echo(f"run complete: {out}")


def load_agent(spec: str):
    if spec == "random":
        return RandomAgent()
    if spec == "greedy":
        return GreedyRuleAgent()
    artifacts = load_run(spec)
    return CheckpointAgent(
        artifacts.decision_nets, artifacts.prediction_nets, name=Path(spec).name
    )


@main.command("eval")
@click.option("--agent-a", required=True, help="random, greedy, or a run directory.")
@click.option("--agent-b", required=True, help="random, greedy, or a run directory.")
@click.option("--decks", "decks_file", type=click.Path(), default=None, help="Deck file to replay.")
@click.option("--num-decks", type=int, default=100, show_default=True, help="Decks to generate when no file is given.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--metric", type=click.Choice(["WP", "ADP"]), default="WP", show_default=True)
@click.option("--out", type=click.Path(), default=None, help="Write the JSON report here.")
@guarded
def cmd_eval(agent_a, agent_b, decks_file, num_decks, seed, metric, out):
    """Paired-deck tournament between two agents."""
    a = load_agent(agent_a)
    b = load_agent(agent_b)
    if decks_file is not None:
        decks = read_decks(decks_file)
    else:
        decks = [deal_cards_from(seed, i) for i in range(num_decks)]
    report = run_tournament(a, b, decks, seed=seed)
    headline = report.wp_a if metric == "WP" else report.adp_a
    click.echo(report.to_json())
    click.echo(f"{metric}(A) = {headline:.4f}")
    if out is not None:
        Path(out).write_text(report.to_json() + "\n")


@main.command("gen-decks")
@click.argument("n", type=int)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path())
@guarded
def cmd_gen_decks(n, seed, out):
    """Write N reproducible deals to --out."""
    if n < 1:
        raise ConfigError("n must be at least 1")
    write_decks(out, n, seed)
    click.echo(f"wrote {n} decks to {out}")


@main.command("inspect")
@click.argument("checkpoint", type=click.Path())
@guarded
def cmd_inspect(checkpoint):
    """Print a checkpoint's header and tensor manifest."""
    header = read_header(checkpoint)
    click.echo(json.dumps(header, indent=2))


@main.command("play")
@click.option("--run-dir", required=True, type=click.Path(), help="Trained run to play against.")
@click.option("--position", type=click.Choice(sorted(_POS_BY_NAME)), default="landlord", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Deal seed.")
@guarded
def cmd_play(run_dir, position, seed):
    """Play one interactive terminal game against the trained bots."""
    artifacts = load_run(run_dir)
    bot = CheckpointAgent(artifacts.decision_nets, artifacts.prediction_nets, name="bot")
    human = _POS_BY_NAME[position]
    rng = np.random.Generator(np.random.PCG64(seed))
    state = new_game(deal_cards(seed))
    click.echo(f"you are {position}; your hand: {format_cards(state.hands[human])}")
    while not state.is_terminal():
        pos = state.current_player
        legal = legal_actions(state)
        if pos == human:
            move = _prompt_move(state, human, legal)
        else:
            move = bot.act(state, legal, rng)
            shown = format_cards(move.cards) if not move.is_pass() else "pass"
            click.echo(f"{SHORT_POS[pos]} plays {shown}")
        state = step(state, move)
    scores = payoff(state, "ADP").scores
    click.echo(f"{state.winner_side()} win; your points: {scores[human]:+g}")


def _prompt_move(state, human, legal):
    while True:
        text = click.prompt("your move (cards, 'pass', or 'moves')").strip()
        if text == "moves":
            for m in legal:
                click.echo(format_cards(m.cards) if not m.is_pass() else "pass")
            continue
        try:
            move = PASS if text.lower() == "pass" else classify(parse_cards(text))
        except (CardError, InvalidMoveError) as exc:
            click.echo(f"invalid: {exc}")
            continue
        if move not in legal:
            click.echo("that move is not legal here")
            continue
        return move


@main.command("serve")
@click.option("--run-dir", required=True, type=click.Path(), help="Trained run to serve.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@guarded
def cmd_serve(run_dir, host, port):
    """Launch the HTTP play service."""
    import uvicorn

    from .service import create_app

    app = create_app(load_run(run_dir))
    click.echo(f"serving on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
