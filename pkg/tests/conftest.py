import pytest

from ddzlab.config import TrainerConfig
from ddzlab.trainer import train

TINY_NET = dict(
    lstm_hidden=8,
    mlp_width=16,
    decision_layers=2,
    prediction_shared_layers=2,
    coach_embed_dim=4,
    coach_width=16,
    coach_layers=1,
)


@pytest.fixture(scope="session")
def tiny_run(tmp_path_factory):
    """A complete run directory with untrained but loadable checkpoints."""
    cfg = TrainerConfig(
        seed=0,
        total_frames=0,
        opponent_model_enabled=True,
        coach_enabled=True,
        **TINY_NET,
    ).validate()
    return train(cfg, tmp_path_factory.mktemp("runs") / "tiny")
