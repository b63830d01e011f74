"""HTTP play service: sessions, observations, moves, bot replies, overlays.

The wire schema is documented in docs/protocol.md and versioned by
PROTOCOL_VERSION. Observations only ever contain data visible to the
requesting seat; hidden hands stay server-side.
"""

from __future__ import annotations

import secrets
import threading
import time

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import __version__
from .cards import CardError, deal_cards, format_cards, parse_cards, parse_deal
from .engine import (
    IllegalMoveError,
    Position,
    legal_actions,
    new_game,
    payoff,
    step,
)
from .evaluate import CheckpointAgent
from .features import encode_state, legal_label
from .models import coach_predict, predict_hand
from .moves import PASS, InvalidMoveError, classify
from .oppmodel import expected_hand
from .runs import SHORT_POS, RunArtifacts

PROTOCOL_VERSION = 1
DEFAULT_IDLE_TTL = 3600.0

_POS_BY_NAME = {v: k for k, v in SHORT_POS.items()}


class CreateSessionRequest(BaseModel):
    human_position: str = "landlord"
    seed: int | None = None
    deal: str | None = None


class MoveRequest(BaseModel):
    cards: str  # "" plays Pass


class Session:
    def __init__(self, session_id, state, human_position):
        self.id = session_id
        self.state = state
        self.human_position = human_position
        self.lock = threading.Lock()
        self.created = time.monotonic()
        self.updated = self.created


def _move_doc(move):
    return {"cards": format_cards(move.cards), "category": move.category.name}


def create_app(artifacts: RunArtifacts, idle_ttl=DEFAULT_IDLE_TTL, bot_agent=None) -> FastAPI:
    app = FastAPI(title="ddz play service", version=__version__)
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    bot = bot_agent or CheckpointAgent(
        artifacts.decision_nets, artifacts.prediction_nets, name="bot"
    )
    bot_rng = np.random.Generator(np.random.PCG64(0))

    def purge_idle():
        now = time.monotonic()
        with registry_lock:
            for sid in [s for s, sess in sessions.items() if now - sess.updated > idle_ttl]:
                del sessions[sid]

    def get_session(session_id) -> Session:
        purge_idle()
        with registry_lock:
            sess = sessions.get(session_id)
        if sess is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return sess

    def run_bots(sess: Session):
        """Advance bot seats until the human's turn or the game ends."""
        replies = []
        while (
            not sess.state.is_terminal()
            and sess.state.current_player != sess.human_position
        ):
            legal = legal_actions(sess.state)
            move = bot.act(sess.state, legal, bot_rng)
            if move not in legal:
                raise HTTPException(status_code=500, detail="bot chose an illegal move")
            replies.append(
                {"position": SHORT_POS[sess.state.current_player], **_move_doc(move)}
            )
            sess.state = step(sess.state, move)
        return replies

    def observation(sess: Session):
        state = sess.state
        viewer = sess.human_position
        doc = {
            "protocol_version": PROTOCOL_VERSION,
            "session_id": sess.id,
            "your_position": SHORT_POS[viewer],
            "current_player": SHORT_POS[state.current_player] if not state.is_terminal() else None,
            "your_hand": format_cards(state.hands[viewer]),
            "hand_counts": {
                SHORT_POS[pos]: state.hands[pos].total() for pos in Position
            },
            "history": [
                {"position": SHORT_POS[pos], **_move_doc(move)}
                for pos, move in state.history
            ],
            "last_move": None,
            "bombs_played": state.bombs_played,
            "terminal": state.is_terminal(),
            "winner_side": state.winner_side() if state.is_terminal() else None,
            "legal_moves": [],
            "overlays": {},
        }
        if state.trick_incumbent is not None:
            owner, move = state.trick_incumbent
            doc["last_move"] = {"position": SHORT_POS[owner], **_move_doc(move)}
        if state.is_terminal():
            adp = payoff(state, "ADP")
            doc["payoff"] = {SHORT_POS[pos]: float(adp.scores[pos]) for pos in Position}
        elif state.current_player == viewer:
            doc["legal_moves"] = [_move_doc(m) for m in legal_actions(state)]
        if artifacts.prediction_nets is not None and not state.is_terminal():
            state_vec, hist = encode_state(state, viewer)
            pred = predict_hand(
                artifacts.prediction_nets[viewer], state_vec, hist, legal_label(state, viewer)
            )
            doc["overlays"]["expected_hand"] = {
                "position": SHORT_POS[viewer.next()],
                "counts": [round(float(c), 4) for c in expected_hand(pred)],
            }
        return doc

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__, "protocol_version": PROTOCOL_VERSION}

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        if req.human_position not in _POS_BY_NAME:
            raise HTTPException(status_code=400, detail="human_position must be landlord, down, or up")
        if req.deal is not None:
            try:
                deal = parse_deal(req.deal)
            except (CardError, ValueError) as exc:
                raise HTTPException(status_code=400, detail=f"malformed deal: {exc}")
        else:
            seed = req.seed if req.seed is not None else secrets.randbits(48)
            deal = deal_cards(seed)
        sess = Session(secrets.token_hex(16), new_game(deal), _POS_BY_NAME[req.human_position])
        with registry_lock:
            sessions[sess.id] = sess
        with sess.lock:
            replies = run_bots(sess)
            sess.updated = time.monotonic()
            doc = {
                "session_id": sess.id,
                "human_position": req.human_position,
                "bot_replies": replies,
                "observation": observation(sess),
            }
            if artifacts.coach_net is not None:
                doc["overlays"] = {"coach_p_win": round(coach_predict(artifacts.coach_net, deal), 4)}
            return doc

    @app.get("/sessions/{session_id}/observation")
    def get_observation(session_id: str):
        sess = get_session(session_id)
        return observation(sess)

    @app.post("/sessions/{session_id}/moves")
    def submit_move(session_id: str, req: MoveRequest):
        sess = get_session(session_id)
        if not sess.lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="session busy: concurrent submit")
        try:
            if sess.state.is_terminal():
                raise HTTPException(status_code=400, detail="game is over")
            if sess.state.current_player != sess.human_position:
                raise HTTPException(status_code=400, detail="not your turn")
            try:
                if req.cards.strip() == "":
                    move = PASS
                else:
                    move = classify(parse_cards(req.cards.strip()))
                sess.state = step(sess.state, move)
            except (CardError, InvalidMoveError, IllegalMoveError) as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            replies = run_bots(sess)
            sess.updated = time.monotonic()
            return {"accepted": _move_doc(move), "bot_replies": replies, "observation": observation(sess)}
        finally:
            sess.lock.release()

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        get_session(session_id)
        with registry_lock:
            sessions.pop(session_id, None)

    return app
