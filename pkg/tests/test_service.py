"""The HTTP game service."""
import pathlib

import pytest
from fastapi.testclient import TestClient

from bisimgame.service import SessionStore, create_app
from conftest import FIXTURES


@pytest.fixture()
def client():
    return TestClient(create_app())


@pytest.fixture()
def lts9_session(client):
    csv_text = (FIXTURES / "lts9.csv").read_text()
    r = client.post("/api/systems", json={"csv": csv_text})
    assert r.status_code == 200
    return r.json()


def test_create_system_payload(lts9_session):
    body = lts9_session
    assert body["states"] == [str(i) for i in range(1, 10)]
    assert ["6", "7", "8", "9"] in body["blocks"]
    verdicts = {(v["x0"], v["x1"]): v for v in body["verdicts"]}
    assert verdicts[("1", "2")]["bisimilar"] is False
    assert verdicts[("1", "2")]["separationRound"] == 2
    assert verdicts[("6", "7")]["bisimilar"] is True


def test_create_system_structured_json(client):
    r = client.post("/api/systems", json={
        "kind": "lts", "states": ["u", "v"], "alphabet": ["a"],
        "transitions": [{"src": "u", "label": "a", "dst": "u"},
                        {"src": "v", "label": "a", "dst": "v"}]})
    assert r.status_code == 200
    assert r.json()["blocks"] == [["u", "v"]]


def test_invalid_system_422(client):
    r = client.post("/api/systems", json={
        "csv": "kind,pts\nalphabet,a\nstate,x\ntrans,x,a,x,1/2\n"})
    assert r.status_code == 422
    assert "sums to 1/2" in r.json()["detail"]


def test_get_system_and_unknown_session(client, lts9_session):
    sid = lts9_session["sessionId"]
    assert client.get(f"/api/systems/{sid}").json() == lts9_session
    assert client.get("/api/systems/nope").status_code == 404


def test_formula_endpoint(client, lts9_session):
    sid = lts9_session["sessionId"]
    r = client.get(f"/api/systems/{sid}/formula", params={"x0": "1", "x1": "2"})
    assert r.status_code == 200
    assert r.json()["formula"].startswith("[^")
    r = client.get(f"/api/systems/{sid}/formula",
                   params={"x0": "1", "x1": "2", "recode": "box-dia"})
    assert "box" in r.json()["formula"]
    r = client.get(f"/api/systems/{sid}/formula", params={"x0": "6", "x1": "7"})
    assert r.status_code == 409
    r = client.get(f"/api/systems/{sid}/formula", params={"x0": "1", "x1": "zz"})
    assert r.status_code == 404


def test_example_play_human_duplicator(client, lts9_session):
    sid = lts9_session["sessionId"]
    r = client.post(f"/api/systems/{sid}/games",
                    json={"x0": "1", "x1": "2", "humanRole": "duplicator"})
    assert r.status_code == 200
    body = r.json()
    gid = body["gameId"]
    # engine spoiler has already opened with j=0, p0={4}
    assert body["engineMoves"] == [{"phase": "step1", "j": 0, "predicate": ["4"]}]
    assert body["state"]["phase"] == "step2"
    assert body["state"]["pendingPredicates"]["p0"] == ["4"]
    assert body["state"]["turn"] == "duplicator"

    r = client.post(f"/api/systems/{sid}/games/{gid}/moves",
                    json={"phase": "step2", "payload": {"predicate": ["5"]}})
    body = r.json()
    # engine picked at step 3; human answers step 4
    assert body["state"]["phase"] == "step4"
    assert body["engineMoves"][0]["phase"] == "step3"
    assert body["state"]["legalHints"] == ["4"]

    r = client.post(f"/api/systems/{sid}/games/{gid}/moves",
                    json={"phase": "step4", "payload": {"state": "4"}})
    body = r.json()
    # round 2 from (4,5): no legal duplicator answer exists
    assert body["state"]["position"] == ["4", "5"]
    assert body["winner"] == "spoiler"
    assert body["formula"] == \
        client.get(f"/api/systems/{sid}/formula",
                   params={"x0": "1", "x1": "2"}).json()["formula"]


def test_illegal_move_409_names_the_rule(client, lts9_session):
    sid = lts9_session["sessionId"]
    gid = client.post(f"/api/systems/{sid}/games",
                      json={"x0": "1", "x1": "2",
                            "humanRole": "duplicator"}).json()["gameId"]
    r = client.post(f"/api/systems/{sid}/games/{gid}/moves",
                    json={"phase": "step2", "payload": {"predicate": ["8"]}})
    assert r.status_code == 409
    assert "Step 2 condition" in r.json()["detail"]
    # game unchanged; the legal answer still goes through
    r = client.post(f"/api/systems/{sid}/games/{gid}/moves",
                    json={"phase": "step2", "payload": {"predicate": ["5"]}})
    assert r.status_code == 200


def test_out_of_turn_409(client, lts9_session):
    sid = lts9_session["sessionId"]
    gid = client.post(f"/api/systems/{sid}/games",
                      json={"x0": "1", "x1": "2",
                            "humanRole": "duplicator"}).json()["gameId"]
    r = client.post(f"/api/systems/{sid}/games/{gid}/moves",
                    json={"phase": "step3", "payload": {"ell": 0, "state": "4"}})
    assert r.status_code == 409


def test_human_spoiler_on_bisimilar_pair_loses(client, lts9_session):
    sid = lts9_session["sessionId"]
    gid = client.post(f"/api/systems/{sid}/games",
                      json={"x0": "6", "x1": "7",
                            "humanRole": "spoiler"}).json()["gameId"]
    body = client.get(f"/api/systems/{sid}/games/{gid}").json()
    rounds = 0
    while "winner" not in body and rounds < 500:
        state = body["state"]
        if state["phase"] == "step1":
            move = {"phase": "step1", "payload": {"j": 0, "predicate": ["1"]}}
        else:
            hint = state["legalHints"][0]
            move = {"phase": "step3",
                    "payload": {"ell": hint["ell"], "state": hint["state"]}}
        body = client.post(f"/api/systems/{sid}/games/{gid}/moves",
                           json=move).json()
        rounds += 1
    assert body["winner"] == "duplicator"
    assert "formula" not in body


def test_unknown_game_and_state_404(client, lts9_session):
    sid = lts9_session["sessionId"]
    assert client.get(f"/api/systems/{sid}/games/nope").status_code == 404
    r = client.post(f"/api/systems/{sid}/games",
                    json={"x0": "1", "x1": "zz", "humanRole": "spoiler"})
    assert r.status_code == 404


def test_malformed_move_422(client, lts9_session):
    sid = lts9_session["sessionId"]
    gid = client.post(f"/api/systems/{sid}/games",
                      json={"x0": "1", "x1": "2",
                            "humanRole": "duplicator"}).json()["gameId"]
    r = client.post(f"/api/systems/{sid}/games/{gid}/moves",
                    json={"phase": "step2", "payload": {}})
    assert r.status_code == 422
    r = client.post(f"/api/systems/{sid}/games/{gid}/moves",
                    json={"phase": "dance", "payload": {}})
    assert r.status_code == 422


def test_transcript_replay_is_deterministic(client, lts9_session):
    sid = lts9_session["sessionId"]
    script = [{"phase": "step2", "payload": {"predicate": ["5"]}},
              {"phase": "step4", "payload": {"state": "4"}}]
    results = []
    for _ in range(2):
        gid = client.post(f"/api/systems/{sid}/games",
                          json={"x0": "1", "x1": "2",
                                "humanRole": "duplicator"}).json()["gameId"]
        states = []
        for move in script:
            r = client.post(f"/api/systems/{sid}/games/{gid}/moves", json=move)
            body = r.json()
            states.append((body["state"], body["engineMoves"]))
        results.append(states)
    assert results[0] == results[1]


def test_session_expiry():
    store = SessionStore(ttl=0.0)
    client = TestClient(create_app(store))
    sid = client.post("/api/systems", json={
        "csv": "kind,lts\nalphabet,a\nstate,x\n"}).json()["sessionId"]
    assert client.get(f"/api/systems/{sid}").status_code == 404


def test_pts_session(client):
    csv_text = (FIXTURES / "pts5.csv").read_text()
    body = client.post("/api/systems", json={"csv": csv_text}).json()
    sid = body["sessionId"]
    assert all(len(b) == 1 for b in body["blocks"])
    r = client.get(f"/api/systems/{sid}/formula",
                   params={"x0": "2", "x1": "1", "recode": "thresholds"})
    assert "[a>=1]" in r.json()["formula"]
