"""Flat key=value run configuration with typed validation."""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path


class ConfigError(ValueError):
    pass


@dataclass
class TrainerConfig:
    seed: int = 0
    objective: str = "ADP"  # training reward: WP or ADP
    epsilon: float = 0.01
    total_frames: int = 100000
    batch_size: int = 256  # samples per learner batch
    unroll_length: int = 100  # samples per actor buffer push
    sync_interval: int = 100  # learner steps between actor weight refreshes
    buffer_capacity: int = 50000  # per position
    num_actors: int = 1
    coach_enabled: bool = False
    opponent_model_enabled: bool = False
    beta_max: float = 0.3
    ramp_frames: int = 0  # 0 -> total_frames // 10
    coach_batch_size: int = 64
    lr: float = 1e-4
    coach_lr: float = 1e-3
    optimizer: str = "rmsprop"
    lstm_hidden: int = 128
    mlp_width: int = 512
    decision_layers: int = 6
    prediction_shared_layers: int = 5
    coach_embed_dim: int = 64
    coach_width: int = 512
    coach_layers: int = 3
    log_interval_episodes: int = 10
    checkpoint_interval_frames: int = 0  # 0 -> final/initial checkpoints only
    eval_interval_frames: int = 0  # 0 -> no periodic evaluation
    eval_decks: int = 100
    eval_seed: int = 900000

    def validate(self):
        if self.objective not in ("WP", "ADP"):
            raise ConfigError(f"objective must be WP or ADP, got {self.objective!r}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError("epsilon must be in [0, 1]")
        if not 0.0 <= self.beta_max <= 0.5:
            raise ConfigError("beta_max must be in [0, 0.5]")
        if self.optimizer not in ("rmsprop", "sgd"):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")
        for name in (
            "batch_size",
            "unroll_length",
            "sync_interval",
            "buffer_capacity",
            "num_actors",
            "coach_batch_size",
            "log_interval_episodes",
        ):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.total_frames < 0:
            raise ConfigError("total_frames must be non-negative")
        return self

    @property
    def effective_ramp_frames(self) -> int:
        return self.ramp_frames if self.ramp_frames > 0 else max(1, self.total_frames // 10)


_FIELDS = {f.name: f.type for f in fields(TrainerConfig)}


def _parse_value(name, text):
    kind = _FIELDS[name]
    if kind == "bool":
        if text.lower() in ("1", "true", "on", "yes"):
            return True
        if text.lower() in ("0", "false", "off", "no"):
            return False
        raise ConfigError(f"{name}: cannot parse boolean from {text!r}")
    if kind == "int":
        return int(text)
    if kind == "float":
        return float(text)
    return text


def parse_config(text: str, overrides=()) -> TrainerConfig:
    """key=value lines; '#' starts a comment. Unknown keys fail loudly."""
    cfg = TrainerConfig()
    items = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        items.append((key, value))
    for key, value in list(items) + [tuple(o.split("=", 1)) for o in overrides]:
        if key not in _FIELDS:
            raise ConfigError(f"unknown config key {key!r}")
        setattr(cfg, key, _parse_value(key, value))
    return cfg.validate()


def load_config(path, overrides=()) -> TrainerConfig:
    return parse_config(Path(path).read_text(), overrides)


def dump_config(cfg: TrainerConfig) -> str:
    lines = [f"{f.name}={getattr(cfg, f.name)}" for f in fields(TrainerConfig)]
    return "\n".join(lines) + "\n"
