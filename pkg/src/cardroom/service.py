"""Turn-based table service: sessions, per-player views, live actions.

One authoritative state per session; every mutation goes through the
engine's transition function under a per-session lock and lands in an
append-only JSONL log, so replaying the log reproduces the state exactly.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel

from . import datagen, evalharness
from .engine import (
    GameState,
    IllegalAction,
    PlayerInput,
    WeightedAgent,
    init_round,
    legal_actions,
    next_state,
    redact,
)
from .rng import Rng
from .script import GameScript, ScriptError, ScriptSyntaxError, serialize_script
from .statelang import serialize_input, serialize_state


@dataclass
class Transition:
    version: int
    round_no: int
    input_text: str | None
    state: GameState

    def record(self) -> dict:
        return {
            "type": "transition",
            "v": self.version,
            "round": self.round_no,
            "input": self.input_text,
            "fn": self.state.produced_by,
            "state": serialize_state(self.state),
        }


@dataclass
class Session:
    session_id: str
    script: GameScript
    script_text: str
    seed: int
    stacks: int
    bots: set[str]
    carry_stacks: bool
    tokens: dict[str, str]
    spectator_token: str
    state: GameState = None
    transitions: list[Transition] = field(default_factory=list)
    round_no: int = 0
    round_seeds: list[int] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    changed: threading.Condition = None
    log_path: str | None = None

    def __post_init__(self):
        self.changed = threading.Condition(self.lock)

    @property
    def version(self) -> int:
        return len(self.transitions)

    def status(self) -> str:
        return "finished" if self.state.finished() else "awaiting-player"

    def player_of(self, token: str) -> str | None:
        """Player id for a token; None for the spectator; 404 if unknown."""
        if token == self.spectator_token:
            return None
        for pid, tok in self.tokens.items():
            if tok == token:
                return pid
        raise HTTPException(status_code=404, detail="unknown token")


class SessionStore:
    def __init__(self, data_dir: str):
        self.data_dir = data_dir
        self.sessions: dict[str, Session] = {}
        self.idempotency: dict[tuple[str, str], dict] = {}
        self._lock = threading.Lock()
        os.makedirs(os.path.join(data_dir, "sessions"), exist_ok=True)

    def path(self, session_id: str) -> str:
        return os.path.join(self.data_dir, "sessions", f"{session_id}.jsonl")

    def get(self, session_id: str) -> Session:
        with self._lock:
            if session_id in self.sessions:
                return self.sessions[session_id]
        session = self._load(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        with self._lock:
            return self.sessions.setdefault(session_id, session)

    def _load(self, session_id: str) -> Session | None:
        """Crash recovery: rebuild a session by replaying its log."""
        path = self.path(session_id)
        if not os.path.exists(path):
            return None
        with open(path, encoding="utf-8") as fh:
            lines = [json.loads(l) for l in fh if l.strip()]
        if not lines or lines[0]["type"] != "created":
            return None
        head = lines[0]
        session = Session(
            session_id=session_id,
            script=datagen.resolve_script(head["script"]),
            script_text=head["script"],
            seed=head["seed"],
            stacks=head["stacks"],
            bots=set(head["bots"]),
            carry_stacks=head["carry_stacks"],
            tokens=head["tokens"],
            spectator_token=head["spectator_token"],
        )
        session.log_path = path
        session.round_seeds = [head["seed"]]
        stacks = head["stacks"]
        state = init_round(session.script, head["seed"], stacks)
        session.state = state
        for entry in lines[1:]:
            if entry["type"] == "round_started":
                session.round_no = entry["round"]
                session.round_seeds.append(entry["seed"])
                state = init_round(session.script, entry["seed"], entry["stacks"])
                session.state = state
                continue
            inp = None
            if entry["input"]:
                inp = _input_from_text(entry["input"])
            state = next_state(state, inp, session.script)
            if serialize_state(state) != entry["state"]:
                raise HTTPException(status_code=500, detail="session log replay mismatch")
            session.transitions.append(
                Transition(entry["v"], entry["round"], entry["input"], state)
            )
            session.state = state
        return session


def _input_from_text(line: str) -> PlayerInput:
    parts = line.split("|", 4)
    return PlayerInput.parse(parts[2], parts[4])


# -- request/response bodies -----------------------------------------------------


class CreateSession(BaseModel):
    script: str
    seed: int | None = None
    stacks: int = 1000
    bots: list[str] = []
    carry_stacks: bool = False


class SubmitAction(BaseModel):
    token: str
    action: str
    idempotency_key: str | None = None


class ValidateScript(BaseModel):
    script: str


def _default_static_dir() -> str | None:
    candidate = os.environ.get("CARDROOM_STATIC")
    if candidate:
        return candidate
    repo = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    built = os.path.join(repo, "frontend", "dist")
    return built if os.path.isdir(built) else None


def create_app(data_dir: str | None = None, static_dir: str | None = None) -> FastAPI:
    data_dir = data_dir or os.environ.get("CARDROOM_DATA", "./cardroom-data")
    store = SessionStore(data_dir)
    app = FastAPI(title="cardroom", version="0.1.0")
    app.state.store = store

    def append_log(session: Session, record: dict) -> None:
        record = dict(record)
        record["ts"] = time.time()
        with open(session.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    def push_transition(session: Session, inp: PlayerInput | None, state: GameState) -> None:
        tr = Transition(session.version + 1, session.round_no,
                        serialize_input(inp) if inp else None, state)
        session.transitions.append(tr)
        session.state = state
        append_log(session, tr.record())
        session.changed.notify_all()

    def advance(session: Session) -> None:
        """Run auto phases and bot turns until a human is prompted or done."""
        bot_rng = Rng(session.round_seeds[-1]).fork(0xB07 + session.version)
        while not session.state.finished():
            state = session.state
            if state.to_act is None:
                nxt = next_state(state, None, session.script)
                push_transition(session, None, nxt)
            elif state.to_act in session.bots:
                agent = WeightedAgent(bot_rng)
                options = legal_actions(state, session.script, state.to_act)
                inp = agent.act(state, session.script, options)
                nxt = next_state(state, inp, session.script)
                push_transition(session, inp, nxt)
            else:
                return

    static_dir = static_dir or _default_static_dir()
    if static_dir:
        from fastapi.staticfiles import StaticFiles

        # Mounted last in route order anyway; explicit API routes win.
        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

    @app.post("/scripts/validate")
    def validate_script(body: ValidateScript):
        try:
            script = datagen.resolve_script(body.script)
        except ScriptSyntaxError as exc:
            return {"valid": False, "diagnostics": [{"line": exc.line_no, "message": exc.message}]}
        except ScriptError as exc:
            return {"valid": False, "diagnostics": [{"line": None, "message": str(exc)}]}
        return {"valid": True, "canonical": serialize_script(script)}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSession):
        try:
            script = datagen.resolve_script(body.script)
        except ScriptError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        if body.stacks <= 0:
            raise HTTPException(status_code=400, detail="stacks must be positive")
        seed = body.seed if body.seed is not None else secrets.randbits(31)
        players = [f"p{i}" for i in range(1, script.num_players + 1)]
        for bot in body.bots:
            if bot not in players:
                raise HTTPException(status_code=400, detail=f"no seat {bot} at this table")
        session = Session(
            session_id=secrets.token_hex(8),
            script=script,
            script_text=body.script,
            seed=seed,
            stacks=body.stacks,
            bots=set(body.bots),
            carry_stacks=body.carry_stacks,
            tokens={p: secrets.token_hex(8) for p in players},
            spectator_token=secrets.token_hex(8),
        )
        session.log_path = store.path(session.session_id)
        session.round_seeds = [seed]
        session.state = init_round(script, seed, body.stacks)
        append_log(session, {
            "type": "created", "script": body.script, "seed": seed,
            "stacks": body.stacks, "bots": sorted(session.bots),
            "carry_stacks": body.carry_stacks, "tokens": session.tokens,
            "spectator_token": session.spectator_token,
        })
        with session.lock:
            advance(session)
        with store._lock:
            store.sessions[session.session_id] = session
        return {
            "session_id": session.session_id,
            "tokens": session.tokens,
            "spectator_token": session.spectator_token,
            "players": players,
            "status": session.status(),
            "version": session.version,
        }

    @app.get("/sessions/{session_id}/view")
    def get_view(session_id: str, token: str = Query(...)):
        session = store.get(session_id)
        with session.lock:
            viewer = session.player_of(token)
            view = redact(session.state, viewer)
            options = []
            if viewer is not None and not session.state.finished():
                options = legal_actions(session.state, session.script, viewer)
            return {
                "view": view.text,
                "legal_actions": options,
                "your_turn": bool(options),
                "status": session.status(),
                "version": session.version,
                "round": session.round_no,
            }

    @app.post("/sessions/{session_id}/actions")
    def submit_action(session_id: str, body: SubmitAction):
        session = store.get(session_id)
        with session.lock:
            pid = session.player_of(body.token)
            idem = (session_id, body.idempotency_key) if body.idempotency_key else None
            if idem and idem in store.idempotency:
                return store.idempotency[idem]
            if pid is None or session.state.to_act != pid:
                raise HTTPException(status_code=403, detail="not this player's turn")
            try:
                inp = PlayerInput.parse(pid, body.action)
                nxt = next_state(session.state, inp, session.script)
            except IllegalAction as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            push_transition(session, inp, nxt)
            advance(session)
            ack = {"ok": True, "version": session.version, "status": session.status()}
            if idem:
                store.idempotency[idem] = ack
            return ack

    @app.post("/sessions/{session_id}/next-round")
    def next_round(session_id: str):
        session = store.get(session_id)
        with session.lock:
            if not session.state.finished():
                raise HTTPException(status_code=409, detail="the current round is still running")
            if not session.carry_stacks:
                raise HTTPException(status_code=409, detail="session was created single-round")
            stacks = [session.state.stacks[p] for p in session.state.players()]
            if any(s <= 0 for s in stacks):
                raise HTTPException(status_code=409, detail="a player is out of chips")
            session.round_no += 1
            new_seed = Rng(session.seed).fork(session.round_no).next_u64() & 0x7FFFFFFF
            session.round_seeds.append(new_seed)
            button = (session.state.button % session.script.num_players) + 1
            state = init_round(session.script, new_seed, stacks, button=button)
            session.state = state
            append_log(session, {"type": "round_started", "round": session.round_no,
                                 "seed": new_seed, "stacks": stacks, "button": button})
            advance(session)
            return {"ok": True, "round": session.round_no, "version": session.version,
                    "status": session.status()}

    @app.get("/sessions/{session_id}/events")
    def get_events(session_id: str, token: str = Query(...),
                   since: int = Query(0), timeout_ms: int = Query(25_000)):
        session = store.get(session_id)
        deadline = time.time() + timeout_ms / 1000.0
        with session.lock:
            session.player_of(token)
            while session.version <= since:
                remaining = deadline - time.time()
                if remaining <= 0 or session.state.finished():
                    break
                session.changed.wait(timeout=min(remaining, 1.0))
            events = [
                {"v": tr.version, "fn": tr.state.produced_by, "round": tr.round_no}
                for tr in session.transitions[since:]
            ]
            return {"version": session.version, "status": session.status(), "events": events}

    @app.get("/sessions/{session_id}/transcript")
    def get_transcript(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return {
                "script": session.script_text,
                "seed": session.seed,
                "records": _transcript_records(session),
            }

    return app


def _transcript_records(session: Session) -> list[dict]:
    """The session as corpus-schema records, one per transition."""
    records = []
    by_round: dict[int, list[Transition]] = {}
    for tr in session.transitions:
        by_round.setdefault(tr.round_no, []).append(tr)
    for round_no, transitions in sorted(by_round.items()):
        seed = session.round_seeds[round_no]
        if round_no == 0:
            start = init_round(session.script, seed, session.stacks)
        else:
            start = _round_start(session, round_no)
        prev_state = start
        # Category is round-level information: pinned once the round ends,
        # null while it is still running (keeps earlier exports prefixes).
        if transitions[-1].state.finished():
            category = _round_category(session, transitions)
        else:
            category = None
        for step, tr in enumerate(transitions):
            records.append({
                "script": serialize_script(session.script),
                "prev_state": serialize_state(prev_state),
                "player_input": tr.input_text or "",
                "next_state": serialize_state(tr.state),
                "meta": {
                    "variant": "session",
                    "round": round_no,
                    "round_seed": seed,
                    "step": step,
                    "function": tr.state.produced_by,
                    "category": category,
                    "script_form": "structured",
                    "stage": None,
                },
            })
            prev_state = tr.state
    return records


def _round_start(session: Session, round_no: int) -> GameState:
    with open(session.log_path, encoding="utf-8") as fh:
        for line in fh:
            entry = json.loads(line)
            if entry.get("type") == "round_started" and entry["round"] == round_no:
                return init_round(session.script, entry["seed"], entry["stacks"],
                                  button=entry["button"])
    raise HTTPException(status_code=500, detail="round start not found in log")


def _round_category(session: Session, transitions: list[Transition]) -> str:
    for tr in transitions:
        if tr.state.produced_by == "show":
            from .engine import _winner_sets

            sets = _winner_sets(tr.state, session.script)
            winner = sets[0][0]
            script = session.script
            if script.hand_rank:
                from . import evaluator

                low = script.has_rule("low_wins") or (
                    script.get_rule("high_low_split") is not None
                    and script.get_rule("high_low_split").params.get("high") == "badugi"
                )
                value, _ = evaluator.best_hand_directed(
                    tr.state.holes[winner], tr.state.community, script, low)
                return script.effective_hand_rank()[value.index]
            from . import evaluator

            value, _ = evaluator.badugi_select(
                list(tr.state.holes[winner]) + list(tr.state.community), script)
            return f"Badugi-{value.count}"
    return datagen.NO_SHOWDOWN
