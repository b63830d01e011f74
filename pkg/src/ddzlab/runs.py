"""Loading trained artifacts back out of a run directory."""

from __future__ import annotations

from pathlib import Path

from .config import TrainerConfig, load_config
from .engine import Position
from .features import AUGMENTED_STATE_DIM, STATE_DIM
from .models import CoachNet, DecisionNet, NetSizes, PredictionNet

SHORT_POS = {
    Position.Landlord: "landlord",
    Position.LandlordDown: "down",
    Position.LandlordUp: "up",
}


class RunArtifacts:
    """Config plus the networks reconstructed from a run's checkpoints."""

    def __init__(self, config: TrainerConfig, decision_nets, prediction_nets, coach_net):
        self.config = config
        self.decision_nets = decision_nets
        self.prediction_nets = prediction_nets  # None when the opponent model was off
        self.coach_net = coach_net  # None when no coach checkpoint exists


def net_sizes(config: TrainerConfig) -> NetSizes:
    return NetSizes(
        lstm_hidden=config.lstm_hidden,
        mlp_width=config.mlp_width,
        decision_layers=config.decision_layers,
        prediction_shared_layers=config.prediction_shared_layers,
        coach_embed_dim=config.coach_embed_dim,
        coach_width=config.coach_width,
        coach_layers=config.coach_layers,
    )


def load_run(run_dir) -> RunArtifacts:
    """Rebuild every network whose checkpoint the run directory holds."""
    run_dir = Path(run_dir)
    config_path = run_dir / "config.txt"
    if not config_path.exists():
        raise FileNotFoundError(f"no config.txt in {run_dir}")
    config = load_config(config_path)
    sizes = net_sizes(config)
    state_dim = AUGMENTED_STATE_DIM if config.opponent_model_enabled else STATE_DIM
    decision = {}
    for pos, short in SHORT_POS.items():
        net = DecisionNet(state_dim, sizes, seed=0)
        net.load(run_dir / f"decision_{short}.ckpt")
        decision[pos] = net
    prediction = None
    if config.opponent_model_enabled:
        prediction = {}
        for pos, short in SHORT_POS.items():
            net = PredictionNet(STATE_DIM, sizes, seed=0)
            net.load(run_dir / f"prediction_{short}.ckpt")
            prediction[pos] = net
    coach = None
    coach_path = run_dir / "coach.ckpt"
    if coach_path.exists():
        coach = CoachNet(sizes, seed=0)
        coach.load(coach_path)
    return RunArtifacts(config, decision, prediction, coach)
