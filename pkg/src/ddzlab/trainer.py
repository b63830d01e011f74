"""Deep Monte Carlo self-play trainer.

Actors generate epsilon-greedy episodes whose undiscounted terminal payoff
becomes the regression target for every visited (state, action) pair; a
single learner updates the three position networks from three bounded
buffers. Hand-prediction networks co-train on the same sample stream and a
single coach network gates the deals actors are allowed to play.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cards import deal_cards
from .coach import ACCEPTANCE_ALARM_RATE, BetaSchedule, accept_deal, beta_at
from .config import TrainerConfig, dump_config
from .engine import Position, legal_actions, new_game, payoff, step
from .features import (
    STATE_DIM,
    AUGMENTED_STATE_DIM,
    HISTORY_LEN,
    CARD_MATRIX_DIM,
    augment,
    encode_cardset,
    encode_state,
    legal_label,
)
from .models import (
    CoachNet,
    DecisionNet,
    NetSizes,
    PredictionNet,
    coach_predict,
    deal_tokens,
    predict_hand,
)
from .nn.losses import loss_bce, loss_mse
from .nn.optim import make_optimizer
from .oppmodel import masked_ce_and_grad

log = logging.getLogger(__name__)

METRICS_COLUMNS = (
    "episodes",
    "frames",
    "learner_steps",
    "loss_landlord",
    "loss_down",
    "loss_up",
    "pred_loss_landlord",
    "pred_loss_down",
    "pred_loss_up",
    "coach_loss",
    "beta",
    "acceptance_rate",
    "eval_wp",
)


@dataclass
class Sample:
    """One (state, action, episodic-return) training record."""

    position: int
    state: np.ndarray  # (S,) float32, augmented when the opponent model is on
    hist: np.ndarray  # (15, 60) float32
    action: np.ndarray  # (60,) float32
    target: float
    legal_label: np.ndarray  # (15,) int8
    true_hand: np.ndarray  # (15,) int8


class ReplayBuffer:
    """Bounded FIFO sample queue; blocking put gives actor backpressure."""

    def __init__(self, capacity):
        self.capacity = capacity
        self._items = []
        self._cond = threading.Condition()
        self.produced = 0
        self.consumed = 0
        self.closed = False

    def __len__(self):
        with self._cond:
            return len(self._items)

    def put(self, samples, block=True):
        with self._cond:
            while block and len(self._items) + len(samples) > self.capacity and not self.closed:
                self._cond.wait(timeout=0.1)
            if self.closed:
                return
            if not block:
                room = self.capacity - len(self._items)
                samples = samples[:room]
            self._items.extend(samples)
            self.produced += len(samples)
            self._cond.notify_all()

    def get_batch(self, n, block=True, timeout=None):
        deadline = None if timeout is None else time.monotonic() + timeout
        with self._cond:
            while len(self._items) < n and block and not self.closed:
                remaining = None if deadline is None else deadline - time.monotonic()
                if remaining is not None and remaining <= 0:
                    return None
                self._cond.wait(timeout=0.1 if remaining is None else min(0.1, remaining))
            if len(self._items) < n:
                return None
            batch = self._items[:n]
            del self._items[:n]
            self.consumed += n
            self._cond.notify_all()
            return batch

    def close(self):
        with self._cond:
            self.closed = True
            self._cond.notify_all()

    def snapshot_items(self):
        with self._cond:
            return list(self._items)

    def restore_items(self, items, produced, consumed):
        with self._cond:
            self._items = list(items)
            self.produced = produced
            self.consumed = consumed


@dataclass
class EpisodeResult:
    samples: dict  # Position -> list of Sample
    deal_toks: np.ndarray
    landlord_won: bool
    deals_drawn: int  # including coach rejections
    steps: int


def rollout(decision_nets, prediction_nets, coach_net, config: TrainerConfig, rng, beta=0.0):
    """Generate one self-play episode.

    Deals are redrawn until the coach accepts (when enabled). Every
    position picks argmax-Q with probability 1 - epsilon, a uniform legal
    move otherwise; targets are the mover's terminal payoff.
    """
    deals_drawn = 0
    while True:
        deal = deal_cards(int(rng.integers(0, 2**62)))
        deals_drawn += 1
        if not config.coach_enabled:
            break
        if accept_deal(coach_predict(coach_net, deal), beta):
            break
        if deals_drawn >= 1000:
            # degenerate coach: play the deal anyway rather than stall
            log.warning("coach rejected 1000 deals in a row; accepting one anyway")
            break

    state = new_game(deal)
    per_pos = {pos: [] for pos in Position}
    while not state.is_terminal():
        pos = state.current_player
        legal = legal_actions(state)
        state_vec, hist = encode_state(state, pos)
        label = legal_label(state, pos)
        if config.opponent_model_enabled:
            pred = predict_hand(prediction_nets[pos], state_vec, hist, label)
            state_vec = augment(state_vec, pred)
        if config.epsilon > 0.0 and rng.random() < config.epsilon:
            idx = int(rng.integers(0, len(legal)))
        else:
            actions = np.stack([encode_cardset(m.cards) for m in legal])
            q = decision_nets[pos].q_for_actions(state_vec, hist, actions)
            idx = int(np.argmax(q))
        move = legal[idx]
        per_pos[pos].append(
            Sample(
                position=int(pos),
                state=state_vec.astype(np.float32),
                hist=hist.astype(np.float32),
                action=encode_cardset(move.cards).astype(np.float32),
                target=0.0,
                legal_label=label.astype(np.int8),
                true_hand=state.hands[pos.next()].as_array().astype(np.int8),
            )
        )
        state = step(state, move)

    final = payoff(state, config.objective)
    for pos in Position:
        for s in per_pos[pos]:
            s.target = float(final.scores[pos])
    return EpisodeResult(
        samples=per_pos,
        deal_toks=deal_tokens(deal),
        landlord_won=state.winner_side() == "landlord",
        deals_drawn=deals_drawn,
        steps=len(state.history),
    )


def stack_batch(batch):
    states = np.stack([s.state for s in batch]).astype(np.float64)
    hists = np.stack([s.hist for s in batch]).astype(np.float64)
    actions = np.stack([s.action for s in batch]).astype(np.float64)
    targets = np.array([s.target for s in batch], dtype=np.float64)
    labels = np.stack([s.legal_label for s in batch]).astype(np.int64)
    hands = np.stack([s.true_hand for s in batch]).astype(np.int64)
    return states, hists, actions, targets, labels, hands


def learner_step(buffers, decision_nets, prediction_nets, optimizers, pred_optimizers, config, lock=None):
    """One regression step per position network (and prediction network).

    Blocks until every buffer holds a full batch. Returns per-position
    losses or None when the buffers were closed while starving.
    """
    batches = {}
    for pos in Position:
        batch = buffers[pos].get_batch(config.batch_size)
        if batch is None:
            return None
        batches[pos] = batch
    report = {}
    for pos in Position:
        states, hists, actions, targets, labels, hands = stack_batch(batches[pos])
        net = decision_nets[pos]
        q, cache = net.forward(states, hists, actions)
        loss, dq = loss_mse(q, targets)
        grads = net.backward(cache, dq)
        if lock is not None:
            with lock:
                optimizers[pos].step(net.params(), grads)
        else:
            optimizers[pos].step(net.params(), grads)
        report[f"loss_{pos.name.lower()}"] = loss
        if config.opponent_model_enabled:
            pnet = prediction_nets[pos]
            # the prediction input is the plain state block (first 357)
            pstates = states[:, :STATE_DIM]
            logits, pcache = pnet.forward(pstates, hists)
            ploss, dlogits = masked_ce_and_grad(logits, hands, labels)
            pgrads = pnet.backward(pcache, dlogits)
            if lock is not None:
                with lock:
                    pred_optimizers[pos].step(pnet.params(), pgrads)
            else:
                pred_optimizers[pos].step(pnet.params(), pgrads)
            report[f"pred_loss_{pos.name.lower()}"] = ploss
    return report


def sync_actor_weights(global_nets, local_nets, lock):
    """Copy a consistent snapshot of every global net into the actor."""
    with lock:
        for key, net in global_nets.items():
            local_nets[key].load_params(net.params())


_SHORT_POS = {Position.Landlord: "landlord", Position.LandlordDown: "down", Position.LandlordUp: "up"}


class Trainer:
    """Owns networks, buffers, metrics, checkpoints, and the run loop."""

    def __init__(self, config: TrainerConfig, run_dir):
        config.validate()
        self.config = config
        self.run_dir = Path(run_dir)
        self.run_dir.mkdir(parents=True, exist_ok=True)
        sizes = NetSizes(
            lstm_hidden=config.lstm_hidden,
            mlp_width=config.mlp_width,
            decision_layers=config.decision_layers,
            prediction_shared_layers=config.prediction_shared_layers,
            coach_embed_dim=config.coach_embed_dim,
            coach_width=config.coach_width,
            coach_layers=config.coach_layers,
        )
        self.sizes = sizes
        state_dim = AUGMENTED_STATE_DIM if config.opponent_model_enabled else STATE_DIM
        self.state_dim = state_dim
        seed0 = config.seed
        self.decision_nets = {
            pos: DecisionNet(state_dim, sizes, seed=seed0 + 10 + pos) for pos in Position
        }
        self.prediction_nets = {
            pos: PredictionNet(STATE_DIM, sizes, seed=seed0 + 20 + pos) for pos in Position
        }
        self.coach_net = CoachNet(sizes, seed=seed0 + 30)
        self.optimizers = {
            pos: make_optimizer(config.optimizer, config.lr) for pos in Position
        }
        self.pred_optimizers = {
            pos: make_optimizer(config.optimizer, config.lr) for pos in Position
        }
        self.coach_optimizer = make_optimizer(config.optimizer, config.coach_lr)
        self.buffers = {pos: ReplayBuffer(config.buffer_capacity) for pos in Position}
        self.coach_stream = []  # (deal_tokens, outcome) pairs awaiting training
        self.lock = threading.Lock()
        self.schedule = BetaSchedule(config.beta_max, config.effective_ramp_frames)
        self.rng = np.random.Generator(np.random.PCG64(config.seed))
        self.frames = 0
        self.episodes = 0
        self.learner_steps = 0
        self.deals_drawn = 0
        self.deals_accepted = 0
        self.last_losses = {}
        self.last_coach_loss = float("nan")
        self.eval_history = []  # (frames, wp)
        self._alarm_fired = False

    # ---- metrics ----

    @property
    def metrics_path(self):
        return self.run_dir / "metrics.tsv"

    def _write_metrics_header(self):
        if not self.metrics_path.exists():
            self.metrics_path.write_text("\t".join(METRICS_COLUMNS) + "\n")

    def _log_metrics(self, eval_wp=float("nan")):
        beta = self.current_beta()
        rate = self.deals_accepted / self.deals_drawn if self.deals_drawn else 1.0
        row = {
            "episodes": self.episodes,
            "frames": self.frames,
            "learner_steps": self.learner_steps,
            "loss_landlord": self.last_losses.get("loss_landlord", float("nan")),
            "loss_down": self.last_losses.get("loss_landlorddown", float("nan")),
            "loss_up": self.last_losses.get("loss_landlordup", float("nan")),
            "pred_loss_landlord": self.last_losses.get("pred_loss_landlord", float("nan")),
            "pred_loss_down": self.last_losses.get("pred_loss_landlorddown", float("nan")),
            "pred_loss_up": self.last_losses.get("pred_loss_landlordup", float("nan")),
            "coach_loss": self.last_coach_loss,
            "beta": beta,
            "acceptance_rate": rate,
            "eval_wp": eval_wp,
        }
        with open(self.metrics_path, "a") as f:
            f.write("\t".join(_fmt(row[c]) for c in METRICS_COLUMNS) + "\n")

    def current_beta(self):
        if not self.config.coach_enabled:
            return 0.0
        return beta_at(self.schedule, self.frames)

    # ---- checkpoints ----

    def _ckpt_path(self, name):
        return self.run_dir / f"{name}.ckpt"

    def save_checkpoints(self):
        """Atomic per-file replace keeps the last good checkpoint on failure."""
        with self.lock:
            for pos in Position:
                self._atomic_save(self.decision_nets[pos], f"decision_{_SHORT_POS[pos]}", self.optimizers[pos].update_counter)
                self._atomic_save(self.prediction_nets[pos], f"prediction_{_SHORT_POS[pos]}", self.pred_optimizers[pos].update_counter)
            self._atomic_save(self.coach_net, "coach", self.coach_optimizer.update_counter)
            self._save_trainer_state()

    def _atomic_save(self, net, name, counter):
        final = self._ckpt_path(name)
        tmp = final.with_suffix(".ckpt.tmp")
        net.save(tmp, update_counter=counter)
        os.replace(tmp, final)

    def _save_trainer_state(self):
        arrays = {}
        for pos in Position:
            items = self.buffers[pos].snapshot_items()
            arrays[f"buf{int(pos)}_state"] = np.stack([s.state for s in items]) if items else np.zeros((0, self.state_dim), np.float32)
            arrays[f"buf{int(pos)}_hist"] = np.stack([s.hist for s in items]) if items else np.zeros((0, HISTORY_LEN, CARD_MATRIX_DIM), np.float32)
            arrays[f"buf{int(pos)}_action"] = np.stack([s.action for s in items]) if items else np.zeros((0, CARD_MATRIX_DIM), np.float32)
            arrays[f"buf{int(pos)}_target"] = np.array([s.target for s in items], np.float64)
            arrays[f"buf{int(pos)}_label"] = np.stack([s.legal_label for s in items]) if items else np.zeros((0, 15), np.int8)
            arrays[f"buf{int(pos)}_hand"] = np.stack([s.true_hand for s in items]) if items else np.zeros((0, 15), np.int8)
        if self.coach_stream:
            arrays["coach_toks"] = np.stack([t for t, _ in self.coach_stream])
            arrays["coach_labels"] = np.array([o for _, o in self.coach_stream], np.float64)
        else:
            arrays["coach_toks"] = np.zeros((0, 54), np.int64)
            arrays["coach_labels"] = np.zeros(0, np.float64)
        for pos in Position:
            opt_state = self.optimizers[pos].state()
            for k, v in opt_state.get("sq", {}).items():
                arrays[f"opt{int(pos)}_sq_{k}"] = v
            popt_state = self.pred_optimizers[pos].state()
            for k, v in popt_state.get("sq", {}).items():
                arrays[f"popt{int(pos)}_sq_{k}"] = v
        for k, v in self.coach_optimizer.state().get("sq", {}).items():
            arrays[f"copt_sq_{k}"] = v
        meta = {
            "frames": self.frames,
            "episodes": self.episodes,
            "learner_steps": self.learner_steps,
            "deals_drawn": self.deals_drawn,
            "deals_accepted": self.deals_accepted,
            "rng_state": self.rng.bit_generator.state,
            "buffer_counters": {
                int(pos): [self.buffers[pos].produced, self.buffers[pos].consumed]
                for pos in Position
            },
            "optimizer_counters": {
                "decision": {int(pos): self.optimizers[pos].update_counter for pos in Position},
                "prediction": {int(pos): self.pred_optimizers[pos].update_counter for pos in Position},
                "coach": self.coach_optimizer.update_counter,
            },
            "eval_history": self.eval_history,
        }
        tmp = self.run_dir / "trainer_state.tmp.npz"
        np.savez_compressed(tmp, **arrays)
        os.replace(tmp, self.run_dir / "trainer_state.npz")
        tmp_meta = self.run_dir / "trainer_meta.json.tmp"
        tmp_meta.write_text(json.dumps(meta))
        os.replace(tmp_meta, self.run_dir / "trainer_meta.json")

    def resume(self):
        """Restore networks, optimizers, buffers, counters, and RNG."""
        for pos in Position:
            self.decision_nets[pos].load(self._ckpt_path(f"decision_{_SHORT_POS[pos]}"))
            self.prediction_nets[pos].load(self._ckpt_path(f"prediction_{_SHORT_POS[pos]}"))
        self.coach_net.load(self._ckpt_path("coach"))
        meta = json.loads((self.run_dir / "trainer_meta.json").read_text())
        data = np.load(self.run_dir / "trainer_state.npz")
        self.frames = meta["frames"]
        self.episodes = meta["episodes"]
        self.learner_steps = meta["learner_steps"]
        self.deals_drawn = meta["deals_drawn"]
        self.deals_accepted = meta["deals_accepted"]
        self.eval_history = [tuple(e) for e in meta.get("eval_history", [])]
        rng_state = meta["rng_state"]
        self.rng.bit_generator.state = rng_state
        for pos in Position:
            items = []
            n = data[f"buf{int(pos)}_target"].shape[0]
            for i in range(n):
                items.append(
                    Sample(
                        position=int(pos),
                        state=data[f"buf{int(pos)}_state"][i],
                        hist=data[f"buf{int(pos)}_hist"][i],
                        action=data[f"buf{int(pos)}_action"][i],
                        target=float(data[f"buf{int(pos)}_target"][i]),
                        legal_label=data[f"buf{int(pos)}_label"][i],
                        true_hand=data[f"buf{int(pos)}_hand"][i],
                    )
                )
            produced, consumed = meta["buffer_counters"][str(int(pos))]
            self.buffers[pos].restore_items(items, produced, consumed)
        self.coach_stream = [
            (data["coach_toks"][i], float(data["coach_labels"][i]))
            for i in range(data["coach_labels"].shape[0])
        ]
        counters = meta["optimizer_counters"]
        for pos in Position:
            self._restore_opt(self.optimizers[pos], counters["decision"][str(int(pos))], data, f"opt{int(pos)}_sq_")
            self._restore_opt(self.pred_optimizers[pos], counters["prediction"][str(int(pos))], data, f"popt{int(pos)}_sq_")
        self._restore_opt(self.coach_optimizer, counters["coach"], data, "copt_sq_")

    @staticmethod
    def _restore_opt(opt, counter, data, prefix):
        opt.update_counter = counter
        if hasattr(opt, "sq"):
            opt.sq = {
                k[len(prefix):]: np.array(data[k]) for k in data.files if k.startswith(prefix)
            }

    # ---- coach ----

    def _coach_consume(self):
        cb = self.config.coach_batch_size
        while len(self.coach_stream) >= cb:
            chunk = self.coach_stream[:cb]
            del self.coach_stream[:cb]
            toks = np.stack([t for t, _ in chunk])
            labels = np.array([o for _, o in chunk], dtype=np.float64)
            p, cache = self.coach_net.forward(toks)
            loss, dp = loss_bce(p, labels)
            grads = self.coach_net.backward(cache, dp)
            with self.lock:
                self.coach_optimizer.step(self.coach_net.params(), grads)
            self.last_coach_loss = loss

    def _check_acceptance_alarm(self):
        if (
            self.config.coach_enabled
            and not self._alarm_fired
            and self.deals_drawn >= 200
            and self.deals_accepted / self.deals_drawn < ACCEPTANCE_ALARM_RATE
        ):
            self._alarm_fired = True
            log.warning(
                "coach acceptance rate %.3f below %.2f: coach looks degenerate",
                self.deals_accepted / self.deals_drawn,
                ACCEPTANCE_ALARM_RATE,
            )

    # ---- evaluation hook ----

    def _periodic_eval(self):
        from .evaluate import CheckpointAgent, RandomAgent, deal_cards_from, run_tournament

        agent = CheckpointAgent(
            self.decision_nets,
            self.prediction_nets if self.config.opponent_model_enabled else None,
            name="trainee",
        )
        decks = [deal_cards_from(self.config.eval_seed, i) for i in range(self.config.eval_decks)]
        report = run_tournament(agent, RandomAgent(), decks, seed=self.config.eval_seed)
        self.eval_history.append((self.frames, report.wp_a))
        return report.wp_a

    # ---- run loops ----

    def train(self):
        """Run to total_frames; returns the run directory."""
        cfg = self.config
        (self.run_dir / "config.txt").write_text(dump_config(cfg))
        self._write_metrics_header()
        if cfg.total_frames == 0:
            self.save_checkpoints()
            return self.run_dir
        if cfg.num_actors == 1:
            self._train_sync()
        else:
            self._train_threaded()
        self.save_checkpoints()
        return self.run_dir

    def _ingest_episode(self, ep: EpisodeResult):
        for pos in Position:
            self.buffers[pos].put(ep.samples[pos], block=False)
        self.frames += ep.steps
        self.episodes += 1
        self.deals_drawn += ep.deals_drawn
        self.deals_accepted += 1
        self.coach_stream.append((ep.deal_toks, 1.0 if ep.landlord_won else 0.0))

    def _train_sync(self):
        cfg = self.config
        local = dict(self.decision_nets)
        local_pred = dict(self.prediction_nets)
        next_eval = cfg.eval_interval_frames
        next_ckpt = cfg.checkpoint_interval_frames
        while self.frames < cfg.total_frames:
            ep = rollout(local, local_pred, self.coach_net, cfg, self.rng, self.current_beta())
            self._ingest_episode(ep)
            self._check_acceptance_alarm()
            while all(len(self.buffers[p]) >= cfg.batch_size for p in Position):
                report = learner_step(
                    self.buffers,
                    self.decision_nets,
                    self.prediction_nets,
                    self.optimizers,
                    self.pred_optimizers,
                    cfg,
                )
                self.learner_steps += 1
                self.last_losses.update(report)
            self._coach_consume()
            eval_wp = float("nan")
            if cfg.eval_interval_frames and self.frames >= next_eval:
                eval_wp = self._periodic_eval()
                next_eval += cfg.eval_interval_frames
            if cfg.checkpoint_interval_frames and self.frames >= next_ckpt:
                self.save_checkpoints()
                next_ckpt += cfg.checkpoint_interval_frames
            if self.episodes % cfg.log_interval_episodes == 0 or not np.isnan(eval_wp):
                self._log_metrics(eval_wp)

    def _train_threaded(self):
        cfg = self.config
        stop = threading.Event()

        def actor_main(actor_id):
            rng = np.random.Generator(np.random.PCG64([cfg.seed, actor_id]))
            local = {
                pos: DecisionNet(self.state_dim, self.sizes, seed=0) for pos in Position
            }
            local_pred = {
                pos: PredictionNet(STATE_DIM, self.sizes, seed=0) for pos in Position
            }
            local_coach = CoachNet(self.sizes, seed=0)
            globals_map = {
                **{f"d{int(p)}": self.decision_nets[p] for p in Position},
                **{f"p{int(p)}": self.prediction_nets[p] for p in Position},
                "coach": self.coach_net,
            }
            locals_map = {
                **{f"d{int(p)}": local[p] for p in Position},
                **{f"p{int(p)}": local_pred[p] for p in Position},
                "coach": local_coach,
            }
            sync_actor_weights(globals_map, locals_map, self.lock)
            last_sync_step = 0
            while not stop.is_set():
                ep = rollout(local, local_pred, local_coach, cfg, rng, self.current_beta())
                with self._ingest_lock:
                    self.frames += ep.steps
                    self.episodes += 1
                    self.deals_drawn += ep.deals_drawn
                    self.deals_accepted += 1
                    self.coach_stream.append((ep.deal_toks, 1.0 if ep.landlord_won else 0.0))
                for pos in Position:
                    self.buffers[pos].put(ep.samples[pos])
                if self.learner_steps - last_sync_step >= cfg.sync_interval:
                    sync_actor_weights(globals_map, locals_map, self.lock)
                    last_sync_step = self.learner_steps

        self._ingest_lock = threading.Lock()
        actors = [
            threading.Thread(target=actor_main, args=(i,), daemon=True)
            for i in range(cfg.num_actors)
        ]
        for t in actors:
            t.start()
        try:
            while self.frames < cfg.total_frames:
                report = learner_step(
                    self.buffers,
                    self.decision_nets,
                    self.prediction_nets,
                    self.optimizers,
                    self.pred_optimizers,
                    cfg,
                    lock=self.lock,
                )
                if report is None:
                    break
                self.learner_steps += 1
                self.last_losses.update(report)
                with self._ingest_lock:
                    self._coach_consume()
                if self.learner_steps % 50 == 0:
                    self._log_metrics()
        finally:
            stop.set()
            for b in self.buffers.values():
                b.close()
            for t in actors:
                t.join(timeout=10)
        self._log_metrics()


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def train(config: TrainerConfig, run_dir, resume=False) -> Path:
    """Build a Trainer, optionally resume, run to total_frames."""
    trainer = Trainer(config, run_dir)
    if resume:
        trainer.resume()
    return trainer.train()
