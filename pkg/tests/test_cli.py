import json

import pytest
from click.testing import CliRunner

import ddzlab.cli as cli_mod
from ddzlab.cards import format_cards, parse_deal
from ddzlab.cli import main
from ddzlab.engine import Position, legal_actions, new_game
from ddzlab.evaluate import deal_cards_from

from conftest import TINY_NET

TINY_CFG = "\n".join(f"{k}={v}" for k, v in TINY_NET.items()) + "\n"


@pytest.fixture
def runner():
    return CliRunner()


def test_help_lists_commands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for cmd in ("train", "eval", "gen-decks", "inspect", "play", "serve"):
        assert cmd in result.output


def test_unknown_flag_fails_loudly(runner):
    result = runner.invoke(main, ["gen-decks", "1", "--out", "x", "--frobnicate"])
    assert result.exit_code == 2


def test_gen_decks(runner, tmp_path):
    out = tmp_path / "decks.txt"
    result = runner.invoke(main, ["gen-decks", "3", "--seed", "9", "--out", str(out)])
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    for i, line in enumerate(lines):
        assert parse_deal(line) == deal_cards_from(9, i)
    # same seed reproduces the file byte for byte
    out2 = tmp_path / "decks2.txt"
    runner.invoke(main, ["gen-decks", "3", "--seed", "9", "--out", str(out2)])
    assert out.read_text() == out2.read_text()


def test_gen_decks_rejects_zero(runner, tmp_path):
    result = runner.invoke(main, ["gen-decks", "0", "--out", str(tmp_path / "d.txt")])
    assert result.exit_code == 2


def test_eval_self_play_is_even(runner, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(
        main,
        ["eval", "--agent-a", "greedy", "--agent-b", "greedy", "--num-decks", "6", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    assert report["wp_a"] == 0.5
    assert report["adp_a"] == 0.0


def test_eval_reproducible(runner):
    args = ["eval", "--agent-a", "greedy", "--agent-b", "random", "--num-decks", "4", "--seed", "3"]
    r1 = runner.invoke(main, args)
    r2 = runner.invoke(main, args)
    assert r1.exit_code == 0
    assert r1.output == r2.output


def test_eval_missing_deck_file(runner, tmp_path):
    result = runner.invoke(
        main,
        ["eval", "--agent-a", "random", "--agent-b", "random", "--decks", str(tmp_path / "nope.txt")],
    )
    assert result.exit_code == 3


def test_eval_checkpoint_agent(runner, tiny_run, tmp_path):
    out = tmp_path / "r.json"
    result = runner.invoke(
        main,
        ["eval", "--agent-a", str(tiny_run), "--agent-b", "random", "--num-decks", "2", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    assert json.loads(out.read_text())["games_played"] == 4


def test_train_and_resume(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(TINY_CFG + "total_frames=60\nbatch_size=32\nlog_interval_episodes=1\n")
    run_dir = tmp_path / "run"
    result = runner.invoke(main, ["train", str(cfg), "--run-dir", str(run_dir), "--seed", "4"])
    assert result.exit_code == 0, result.output
    meta1 = json.loads((run_dir / "trainer_meta.json").read_text())
    assert meta1["frames"] >= 60
    result = runner.invoke(
        main,
        ["train", str(cfg), "--run-dir", str(run_dir), "--seed", "4", "--resume", "-o", "total_frames=120"],
    )
    assert result.exit_code == 0, result.output
    meta2 = json.loads((run_dir / "trainer_meta.json").read_text())
    assert meta2["frames"] >= 120 > meta1["frames"]


def test_train_bad_config_key(runner, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("sedd=1\n")
    result = runner.invoke(main, ["train", str(cfg), "--run-dir", str(tmp_path / "r")])
    assert result.exit_code == 2
    assert "sedd" in result.output


def test_train_coach_off_flag(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(TINY_CFG + "total_frames=0\ncoach_enabled=true\n")
    run_dir = tmp_path / "r"
    result = runner.invoke(main, ["train", str(cfg), "--run-dir", str(run_dir), "--coach", "off"])
    assert result.exit_code == 0, result.output
    assert "coach_enabled=False" in (run_dir / "config.txt").read_text()


def test_inspect(runner, tiny_run):
    result = runner.invoke(main, ["inspect", str(tiny_run / "decision_landlord.ckpt")])
    assert result.exit_code == 0, result.output
    header = json.loads(result.output)
    assert "spec_hash" in header and "layout_hash" in header
    assert "tensors" in header or "manifest" in header


def test_inspect_non_checkpoint(runner, tmp_path):
    bad = tmp_path / "bad.ckpt"
    bad.write_bytes(b"not a checkpoint at all")
    result = runner.invoke(main, ["inspect", str(bad)])
    assert result.exit_code == 4


def test_inspect_missing_file(runner, tmp_path):
    result = runner.invoke(main, ["inspect", str(tmp_path / "nope.ckpt")])
    assert result.exit_code == 3


def test_eval_layout_mismatch_exit_code(runner, tmp_path, tiny_run, monkeypatch):
    # a run dir whose checkpoints no longer match the running code
    from ddzlab.nn.checkpoint import CheckpointMismatch

    def boom(path):
        raise CheckpointMismatch("layout hash mismatch")

    monkeypatch.setattr(cli_mod, "load_run", boom)
    result = runner.invoke(
        main, ["eval", "--agent-a", str(tiny_run), "--agent-b", "random", "--num-decks", "1"]
    )
    assert result.exit_code == 4


def test_prompt_move_reprompts(monkeypatch, tiny_run):
    deal = deal_cards_from(1, 0)
    state = new_game(deal)
    legal = legal_actions(state)
    good = format_cards(legal[0].cards)
    # a real bomb the landlord cannot hold here: four of a rank they lack
    from ddzlab.cards import RANK_CHARS

    short_rank = next(c for i, c in enumerate(RANK_CHARS[:13]) if deal.landlord.counts[i] < 4)
    answers = iter(["zz", "34", short_rank * 4, "moves", good])
    monkeypatch.setattr(cli_mod.click, "prompt", lambda *a, **k: next(answers))
    echoed = []
    monkeypatch.setattr(cli_mod.click, "echo", lambda msg="", **k: echoed.append(str(msg)))
    move = cli_mod._prompt_move(state, Position.Landlord, legal)
    assert move == legal[0]
    assert any("invalid" in line for line in echoed)
    assert any("not legal" in line for line in echoed)


def test_play_full_game_scripted(runner, tiny_run, monkeypatch):
    # the human always plays the first legal move the prompt suggests
    def auto_prompt(state, human, legal):
        playable = [m for m in legal if not m.is_pass()]
        return playable[0] if playable else legal[0]

    monkeypatch.setattr(cli_mod, "_prompt_move", auto_prompt)
    result = runner.invoke(main, ["play", "--run-dir", str(tiny_run), "--position", "down", "--seed", "2"])
    assert result.exit_code == 0, result.output
    assert "win; your points:" in result.output
