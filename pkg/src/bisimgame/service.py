"""HTTP game service: sessions over analyzed systems and interactive games.

Sessions are in-memory and expire after an hour of inactivity.  After every
human move the engine immediately plays its replies, so a response always
shows either the human's turn or a finished game.
"""
from __future__ import annotations


import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import Body, FastAPI, HTTPException

from .coalgebra import LTS, Coalgebra, CoalgebraError, validate
from .csvio import loads as csv_loads
from .game import (DUPLICATOR_PHASES, SPOILER_PHASES, GameError, GameState,
                   Phase, Step1Move, Step2Move, Step3Move, Step4Move, advance,
                   engine_move, new_game)
from .logic import distinguishing_formula
from .refine import INF, refine

SESSION_TTL = 3600.0

SPOILER = "spoiler"
DUPLICATOR = "duplicator"


@dataclass
class Game:
    id: str
    x0: str
    x1: str
    human_role: str
    state: GameState
    lock: threading.Lock = field(default_factory=threading.Lock)


@dataclass
class Session:
    id: str
    coalgebra: Coalgebra
    partition: object
    strategy: object
    games: dict = field(default_factory=dict)
    last_used: float = field(default_factory=time.monotonic)


class SessionStore:
    def __init__(self, ttl: float = SESSION_TTL):
        self.ttl = ttl
        self._sessions: dict = {}
        self._lock = threading.Lock()

    def put(self, sess: Session) -> None:
        with self._lock:
            self._purge()
            self._sessions[sess.id] = sess

    def get(self, sid: str) -> Session:
        with self._lock:
            self._purge()
            sess = self._sessions.get(sid)
            if sess is None:
                raise HTTPException(404, f"unknown session {sid}")
            sess.last_used = time.monotonic()
            return sess

    def _purge(self) -> None:
        cutoff = time.monotonic() - self.ttl
        for sid in [s for s, v in self._sessions.items() if v.last_used < cutoff]:
            del self._sessions[sid]


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _transitions_json(c: Coalgebra) -> list:
    out = []
    if c.kind == LTS:
        for x in c.states:
            for a, y in sorted(c.transitions[x]):
                out.append({"src": x, "label": a, "dst": y})
    else:
        for x in c.states:
            for a in c.alphabet:
                dist = c.transitions[x][a]
                if dist is None:
                    out.append({"src": x, "label": a, "terminate": True})
                else:
                    for y, w in sorted(dist.items()):
                        out.append({"src": x, "label": a, "dst": y,
                                    "weight": str(w)})
    return out


def _legal_hints(g: GameState) -> list:
    if g.phase is Phase.STEP3:
        hints = []
        for ell in (0, 1):
            for x in sorted(g.predicate(ell) or ()):
                hints.append({"ell": ell, "state": x})
        return hints
    if g.phase is Phase.STEP4:
        return sorted(g.predicate(1 - g.ell) or ())
    return []


def _state_json(game: Game) -> dict:
    g = game.state
    out = {
        "phase": g.phase.value,
        "position": list(g.position),
        "round": g.round,
        "j": g.j,
        "ell": g.ell,
        "pick": g.pick,
        "pendingPredicates": {
            "p0": sorted(g.p0) if g.p0 is not None else None,
            "p1": sorted(g.p1) if g.p1 is not None else None,
        },
        "legalHints": _legal_hints(g),
        "humanRole": game.human_role,
        "turn": _turn_of(game),
    }
    if g.phase is Phase.SPOILER_WON:
        out["winner"] = SPOILER
    elif g.phase is Phase.DUPLICATOR_WON:
        out["winner"] = DUPLICATOR
    return out


def _turn_of(game: Game) -> Optional[str]:
    g = game.state
    if g.over:
        return None
    return SPOILER if g.phase in SPOILER_PHASES else DUPLICATOR


def _human_phases(role: str) -> tuple:
    return SPOILER_PHASES if role == SPOILER else DUPLICATOR_PHASES


def _move_json(g: GameState, move) -> dict:
    if isinstance(move, Step1Move):
        return {"phase": "step1", "j": move.j, "predicate": sorted(move.predicate)}
    if isinstance(move, Step2Move):
        return {"phase": "step2", "predicate": sorted(move.predicate)}
    if isinstance(move, Step3Move):
        return {"phase": "step3", "ell": move.ell, "state": move.state}
    return {"phase": "step4", "state": move.state}


def _parse_move(phase: str, payload: dict):
    try:
        if phase == "step1":
            return Step1Move(int(payload["j"]),
                             frozenset(map(str, payload["predicate"])))
        if phase == "step2":
            return Step2Move(frozenset(map(str, payload["predicate"])))
        if phase == "step3":
            return Step3Move(int(payload["ell"]), str(payload["state"]))
        if phase == "step4":
            return Step4Move(str(payload["state"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise HTTPException(422, f"malformed {phase} payload: {exc}") from None
    raise HTTPException(422, f"unknown move phase {phase!r}")


# ---------------------------------------------------------------------------
# App
# ---------------------------------------------------------------------------

def create_app(store: Optional[SessionStore] = None) -> FastAPI:
    app = FastAPI(title="bisimgame service")
    sessions = store if store is not None else SessionStore()

    def _load_system(body: dict) -> Coalgebra:
        try:
            if "csv" in body:
                c = csv_loads(body["csv"])
            else:
                if body.get("kind") == LTS:
                    c = Coalgebra.lts(
                        body["states"], body["alphabet"],
                        [(t["src"], t["label"], t["dst"])
                         for t in body["transitions"]])
                else:
                    rows = {}
                    for t in body["transitions"]:
                        if t.get("terminate"):
                            continue
                        rows.setdefault((t["src"], t["label"]), {})[t["dst"]] = \
                            t["weight"]
                    c = Coalgebra.pts(body["states"], body["alphabet"], rows)
            problems = validate(c)
            if problems:
                raise CoalgebraError("; ".join(problems))
            return c
        except (CoalgebraError, KeyError, TypeError, ValueError) as exc:
            raise HTTPException(422, f"invalid system: {exc}") from None

    def _system_json(sess: Session) -> dict:
        c = sess.coalgebra
        verdicts = []
        for i, x0 in enumerate(c.states):
            for x1 in c.states[i + 1:]:
                idx = sess.strategy.index(x0, x1)
                verdicts.append({"x0": x0, "x1": x1,
                                 "bisimilar": idx == INF,
                                 "separationRound": None if idx == INF else int(idx)})
        return {
            "sessionId": sess.id,
            "kind": c.kind,
            "states": list(c.states),
            "alphabet": list(c.alphabet),
            "transitions": _transitions_json(c),
            "blocks": [sorted(b) for b in sess.partition.blocks],
            "verdicts": verdicts,
        }

    def _engine_play(sess: Session, game: Game) -> list:
        played = []
        human = _human_phases(game.human_role)
        while not game.state.over and game.state.phase not in human:
            mv = engine_move(sess.coalgebra, sess.partition, sess.strategy,
                             game.state)
            game.state = advance(sess.coalgebra, game.state, mv)
            played.append(_move_json(game.state, mv))
        return played

    def _game_response(sess: Session, game: Game, engine_moves: list) -> dict:
        out = {"gameId": game.id, "state": _state_json(game),
               "engineMoves": engine_moves}
        g = game.state
        if g.over:
            out["winner"] = _state_json(game)["winner"]
            if (g.phase is Phase.SPOILER_WON
                    and game.human_role == DUPLICATOR
                    and sess.strategy.index(game.x0, game.x1) != INF):
                out["formula"] = str(distinguishing_formula(
                    sess.coalgebra, sess.partition, sess.strategy,
                    (game.x0, game.x1)))
        return out

    @app.post("/api/systems")
    def create_system(body: dict = Body(...)):
        c = _load_system(body)
        part, st = refine(c)
        sess = Session(id=uuid.uuid4().hex, coalgebra=c, partition=part,
                       strategy=st)
        sessions.put(sess)
        return _system_json(sess)

    @app.get("/api/systems/{sid}")
    def get_system(sid: str):
        return _system_json(sessions.get(sid))

    @app.get("/api/systems/{sid}/formula")
    def get_formula(sid: str, x0: str, x1: str, recode: Optional[str] = None):
        sess = sessions.get(sid)
        c = sess.coalgebra
        if x0 not in c.transitions or x1 not in c.transitions:
            raise HTTPException(404, "unknown state")
        if sess.strategy.index(x0, x1) == INF:
            raise HTTPException(409, f"states {x0} and {x1} are bisimilar")
        phi = distinguishing_formula(c, sess.partition, sess.strategy, (x0, x1))
        if recode:
            from .logic import recode_for
            try:
                phi = recode_for(c, phi)
            except CoalgebraError as exc:
                raise HTTPException(409, str(exc)) from None
        return {"x0": x0, "x1": x1, "formula": str(phi)}

    @app.post("/api/systems/{sid}/games")
    def create_game(sid: str, body: dict = Body(...)):
        sess = sessions.get(sid)
        try:
            x0, x1 = str(body["x0"]), str(body["x1"])
            role = body["humanRole"]
        except KeyError as exc:
            raise HTTPException(422, f"missing field {exc}") from None
        if role not in (SPOILER, DUPLICATOR):
            raise HTTPException(422, f"humanRole must be {SPOILER!r} or {DUPLICATOR!r}")
        c = sess.coalgebra
        if x0 not in c.transitions or x1 not in c.transitions:
            raise HTTPException(404, "unknown state")
        game = Game(id=uuid.uuid4().hex, x0=x0, x1=x1, human_role=role,
                    state=new_game(c, x0, x1))
        with game.lock:
            engine_moves = _engine_play(sess, game)
            sess.games[game.id] = game
            return _game_response(sess, game, engine_moves)

    def _get_game(sess: Session, gid: str) -> Game:
        game = sess.games.get(gid)
        if game is None:
            raise HTTPException(404, f"unknown game {gid}")
        return game

    @app.post("/api/systems/{sid}/games/{gid}/moves")
    def submit_move(sid: str, gid: str, body: dict = Body(...)):
        sess = sessions.get(sid)
        game = _get_game(sess, gid)
        try:
            phase = body["phase"]
            payload = body.get("payload", body)
        except KeyError as exc:
            raise HTTPException(422, f"missing field {exc}") from None
        move = _parse_move(phase, payload)
        with game.lock:
            if game.state.over:
                raise HTTPException(409, "game is over")
            if game.state.phase not in _human_phases(game.human_role):
                raise HTTPException(409, "not your turn")
            try:
                game.state = advance(sess.coalgebra, game.state, move)
            except GameError as exc:
                raise HTTPException(409, str(exc)) from None
            engine_moves = _engine_play(sess, game)
            return _game_response(sess, game, engine_moves)

    @app.get("/api/systems/{sid}/games/{gid}")
    def get_game(sid: str, gid: str):
        sess = sessions.get(sid)
        game = _get_game(sess, gid)
        with game.lock:
            return _game_response(sess, game, [])

    return app
