import threading
import time

import pytest
from fastapi.testclient import TestClient

from ddzlab.cards import deal_cards, format_cards, format_deal
from ddzlab.engine import legal_actions, new_game
from ddzlab.evaluate import GreedyRuleAgent
from ddzlab.runs import load_run
from ddzlab.service import PROTOCOL_VERSION, create_app


@pytest.fixture(scope="module")
def client(tiny_run):
    return TestClient(create_app(load_run(tiny_run)))


def known_deal(seed=11):
    return deal_cards(seed)


def test_health(client):
    doc = client.get("/health").json()
    assert doc["status"] == "ok"
    assert doc["protocol_version"] == PROTOCOL_VERSION
    assert doc["version"]


def test_create_session_seed_deterministic(client):
    h1 = client.post("/sessions", json={"human_position": "landlord", "seed": 5}).json()
    h2 = client.post("/sessions", json={"human_position": "landlord", "seed": 5}).json()
    assert h1["observation"]["your_hand"] == h2["observation"]["your_hand"]
    assert h1["session_id"] != h2["session_id"]


def test_create_session_explicit_deal(client):
    deal = known_deal()
    resp = client.post("/sessions", json={"human_position": "landlord", "deal": format_deal(deal)})
    assert resp.status_code == 201
    doc = resp.json()
    assert doc["observation"]["your_hand"] == format_cards(deal.landlord)
    assert doc["observation"]["hand_counts"] == {"landlord": 20, "down": 17, "up": 17}
    assert "coach_p_win" in doc.get("overlays", {})
    assert 0.0 <= doc["overlays"]["coach_p_win"] <= 1.0


def test_create_session_bad_inputs(client):
    assert client.post("/sessions", json={"human_position": "dealer"}).status_code == 400
    resp = client.post("/sessions", json={"human_position": "landlord", "deal": "33|44|55"})
    assert resp.status_code == 400
    assert "malformed deal" in resp.json()["detail"]


def test_bots_advance_to_human_turn(client):
    doc = client.post("/sessions", json={"human_position": "down", "seed": 3}).json()
    assert len(doc["bot_replies"]) == 1
    assert doc["bot_replies"][0]["position"] == "landlord"
    assert doc["observation"]["current_player"] == "down"


def test_legal_moves_match_engine(client):
    deal = known_deal()
    doc = client.post(
        "/sessions", json={"human_position": "landlord", "deal": format_deal(deal)}
    ).json()
    served = [m["cards"] for m in doc["observation"]["legal_moves"]]
    engine = [format_cards(m.cards) for m in legal_actions(new_game(deal))]
    assert served == engine
    assert "" not in served  # the leader may not pass


def test_no_hidden_hand_leakage(client):
    deal = known_deal()
    resp = client.post("/sessions", json={"human_position": "landlord", "deal": format_deal(deal)})
    body = resp.text
    for hidden in (format_cards(deal.down), format_cards(deal.up)):
        assert hidden not in body
    obs = resp.json()["observation"]
    assert set(obs["hand_counts"]) == {"landlord", "down", "up"}
    assert "expected_hand" in obs["overlays"]
    counts = obs["overlays"]["expected_hand"]["counts"]
    assert len(counts) == 15 and all(0.0 <= c <= 4.0 for c in counts)


def test_full_game_via_wire(client):
    doc = client.post("/sessions", json={"human_position": "landlord", "seed": 21}).json()
    sid = doc["session_id"]
    obs = doc["observation"]
    for _ in range(200):
        if obs["terminal"]:
            break
        assert obs["current_player"] == "landlord"
        assert obs["legal_moves"], "it is our turn but no moves were offered"
        move = obs["legal_moves"][-1]  # biggest combination on offer
        resp = client.post(f"/sessions/{sid}/moves", json={"cards": move["cards"]})
        assert resp.status_code == 200, resp.text
        body = resp.json()
        assert body["accepted"]["cards"] == move["cards"]
        obs = body["observation"]
    assert obs["terminal"]
    assert obs["winner_side"] in ("landlord", "peasants")
    assert set(obs["payoff"]) == {"landlord", "down", "up"}
    total = sum(obs["payoff"].values())
    assert total == pytest.approx(obs["payoff"]["landlord"] + 2 * obs["payoff"]["down"])
    # game over: further moves are refused
    resp = client.post(f"/sessions/{sid}/moves", json={"cards": ""})
    assert resp.status_code == 400
    assert "game is over" in resp.json()["detail"]


def test_illegal_moves_rejected(client):
    deal = known_deal()
    sid = client.post(
        "/sessions", json={"human_position": "landlord", "deal": format_deal(deal)}
    ).json()["session_id"]
    # leading player may not pass
    resp = client.post(f"/sessions/{sid}/moves", json={"cards": ""})
    assert resp.status_code == 400
    # a hand nobody can have five copies of
    resp = client.post(f"/sessions/{sid}/moves", json={"cards": "33333"})
    assert resp.status_code == 400


def test_unknown_session_404(client):
    assert client.get("/sessions/deadbeef/observation").status_code == 404
    assert client.post("/sessions/deadbeef/moves", json={"cards": ""}).status_code == 404


def test_sessions_isolated(client):
    a = client.post("/sessions", json={"human_position": "landlord", "seed": 31}).json()
    b = client.post("/sessions", json={"human_position": "landlord", "seed": 32}).json()
    move = a["observation"]["legal_moves"][0]["cards"]
    client.post(f"/sessions/{a['session_id']}/moves", json={"cards": move})
    after_b = client.get(f"/sessions/{b['session_id']}/observation").json()
    assert after_b["history"] == b["observation"]["history"]


def test_delete_session(client):
    sid = client.post("/sessions", json={"seed": 1}).json()["session_id"]
    assert client.delete(f"/sessions/{sid}").status_code == 204
    assert client.get(f"/sessions/{sid}/observation").status_code == 404


def test_idle_sessions_expire(tiny_run):
    app = create_app(load_run(tiny_run), idle_ttl=0.01)
    with TestClient(app) as c:
        sid = c.post("/sessions", json={"seed": 2}).json()["session_id"]
        time.sleep(0.05)
        assert c.get(f"/sessions/{sid}/observation").status_code == 404


class SlowGreedy(GreedyRuleAgent):
    def act(self, state, legal, rng):
        time.sleep(0.4)
        return super().act(state, legal, rng)


def test_concurrent_submit_conflict(tiny_run):
    app = create_app(load_run(tiny_run), bot_agent=SlowGreedy())
    with TestClient(app) as c:
        doc = c.post("/sessions", json={"human_position": "up", "seed": 4}).json()
        sid = doc["session_id"]
        move = doc["observation"]["legal_moves"][0]["cards"]
        codes = []

        def submit():
            codes.append(c.post(f"/sessions/{sid}/moves", json={"cards": move}).status_code)

        t1 = threading.Thread(target=submit)
        t1.start()
        time.sleep(0.1)  # let the first submit grab the session lock
        t2 = threading.Thread(target=submit)
        t2.start()
        t1.join()
        t2.join()
        assert sorted(codes) == [200, 409]
