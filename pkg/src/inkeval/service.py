"""HTTP rating service for the human preference protocol.

Raters fetch their next pair (original ink plus two blind candidates in a
seed-randomized left/right order), submit a choice per pair, and leave
free-text criteria feedback at the end. Every accepted submission is
appended to a log file and fsynced before it is acknowledged; restarting
the service replays the log, and the CSV export reproduces exactly the
accepted records.

Model identities never leave the server: clients only ever see opaque
left/right sides. The side-to-model mapping lives in the session.
"""

from __future__ import annotations

import json
import os
import random
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import HTMLResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .corpus_io import Corpus, preferences_to_csv
from .harness import PreferenceRecord

DEFAULT_RATERS_PER_PAIR = 3


@dataclass(frozen=True)
class SessionPair:
    pair_id: str
    sample_id: str
    left_model: str  # already randomized; left/right is what raters see
    right_model: str


@dataclass
class RatingSession:
    id: str
    seed: int
    raters_per_pair: int
    pairs: list[SessionPair]
    show_corrected_label: bool = True
    assignments: dict[str, list[int]] = field(default_factory=dict)
    answered: set[tuple[str, str]] = field(default_factory=set)  # (rater, pair_id)
    collected: list[PreferenceRecord] = field(default_factory=list)
    criteria_feedback: dict[str, str] = field(default_factory=dict)

    def assigned_count(self, pair_index: int) -> int:
        return sum(pair_index in idxs for idxs in self.assignments.values())


def build_session(
    corpus: Corpus,
    model_a: str,
    model_b: str,
    session_id: str = "default",
    seed: int = 0,
    raters_per_pair: int = DEFAULT_RATERS_PER_PAIR,
    show_corrected_label: bool = True,
) -> RatingSession:
    """One pair per sample that both models produced a candidate for, with
    the shown order decided by a per-pair seed."""
    if model_a == model_b:
        raise ValueError("a session needs two different models")
    for model in (model_a, model_b):
        if model not in corpus.candidates:
            raise ValueError(f"corpus has no candidates for model {model!r}")
    ids_a = {c.sample_id for c in corpus.candidates[model_a]}
    ids_b = {c.sample_id for c in corpus.candidates[model_b]}
    common = [s.id for s in corpus.samples if s.id in ids_a and s.id in ids_b]
    if not common:
        raise ValueError("no samples are covered by both models")
    pairs = []
    for idx, sample_id in enumerate(common):
        flip = random.Random(seed * 2_654_435_761 + idx).random() < 0.5
        left, right = (model_b, model_a) if flip else (model_a, model_b)
        pairs.append(
            SessionPair(
                pair_id=f"{session_id}-{idx:04d}",
                sample_id=sample_id,
                left_model=left,
                right_model=right,
            )
        )
    return RatingSession(
        id=session_id,
        seed=seed,
        raters_per_pair=raters_per_pair,
        pairs=pairs,
        show_corrected_label=show_corrected_label,
    )


class PreferenceIn(BaseModel):
    pair_id: str
    choice: str  # left | right | skip
    rater_id: str


class CriteriaIn(BaseModel):
    rater_id: str
    text: str


class RatingService:
    """Session state machine with an append-only persistence log.

    All mutations are serialized through one lock; reads take the lock only
    long enough to snapshot what they need.
    """

    def __init__(self, session: RatingSession, corpus: Corpus, log_path=None):
        self.session = session
        self.corpus = corpus
        self.log_path = Path(log_path) if log_path else None
        self._lock = threading.Lock()
        self._samples = {s.id: s for s in corpus.samples}
        self._candidates = {
            (model, c.sample_id): c
            for model, cands in corpus.candidates.items()
            for c in cands
        }
        for pair in session.pairs:
            for model in (pair.left_model, pair.right_model):
                if (model, pair.sample_id) not in self._candidates:
                    raise ValueError(
                        f"pair {pair.pair_id}: no candidate for model {model!r}"
                    )
        if self.log_path and self.log_path.exists():
            self._replay_log()

    # -- persistence --------------------------------------------------------

    def _append_log(self, event: dict) -> None:
        if not self.log_path:
            return
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _replay_log(self) -> None:
        with open(self.log_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                kind = event.get("type")
                if kind == "assign":
                    self.session.assignments.setdefault(event["rater_id"], []).append(
                        event["pair_index"]
                    )
                elif kind == "preference":
                    record = PreferenceRecord(**event["record"])
                    self.session.collected.append(record)
                    self.session.answered.add((event["rater_id"], event["pair_id"]))
                elif kind == "criteria":
                    self.session.criteria_feedback[event["rater_id"]] = event["text"]

    # -- protocol operations -------------------------------------------------

    def next_pair(self, rater_id: str) -> dict:
        with self._lock:
            sess = self.session
            assigned = sess.assignments.setdefault(rater_id, [])
            # resume an assigned-but-unanswered pair first
            pending = [
                i for i in assigned if (rater_id, sess.pairs[i].pair_id) not in sess.answered
            ]
            if pending:
                idx = pending[0]
            else:
                idx = None
                for i, pair in enumerate(sess.pairs):
                    if i in assigned:
                        continue
                    if sess.assigned_count(i) >= sess.raters_per_pair:
                        continue
                    idx = i
                    break
                if idx is None:
                    return {
                        "done": True,
                        "criteria_submitted": rater_id in sess.criteria_feedback,
                    }
                assigned.append(idx)
                self._append_log(
                    {"type": "assign", "rater_id": rater_id, "pair_index": idx}
                )
            pair = sess.pairs[idx]
            sample = self._samples[pair.sample_id]
            left = self._candidates[(pair.left_model, pair.sample_id)]
            right = self._candidates[(pair.right_model, pair.sample_id)]
            remaining = sum(
                1
                for i, p in enumerate(sess.pairs)
                if (rater_id, p.pair_id) not in sess.answered
                and (
                    i in assigned
                    or (sess.assigned_count(i) < sess.raters_per_pair)
                )
            )
            return {
                "done": False,
                "pair_id": pair.pair_id,
                "prompt_label": sample.corrected_label if sess.show_corrected_label else None,
                "original": sample.original_ink.to_stroke_lists(with_time=False),
                "left": left.ink.to_stroke_lists(with_time=False),
                "right": right.ink.to_stroke_lists(with_time=False),
                "remaining": remaining,
            }

    def submit_preference(self, pair_id: str, choice: str, rater_id: str) -> dict:
        if choice not in ("left", "right", "skip"):
            raise HTTPException(status_code=422, detail=f"invalid choice {choice!r}")
        with self._lock:
            sess = self.session
            index = next(
                (i for i, p in enumerate(sess.pairs) if p.pair_id == pair_id), None
            )
            if index is None:
                raise HTTPException(status_code=404, detail=f"unknown pair {pair_id!r}")
            if index not in sess.assignments.get(rater_id, []):
                raise HTTPException(
                    status_code=403, detail="pair is not assigned to this rater"
                )
            if (rater_id, pair_id) in sess.answered:
                raise HTTPException(status_code=409, detail="pair already answered")
            pair = sess.pairs[index]
            record = PreferenceRecord(
                sample_id=pair.sample_id,
                left_model=pair.left_model,
                right_model=pair.right_model,
                choice=choice,
                rater_id=rater_id,
                timestamp=datetime.now(timezone.utc).isoformat(),
            )
            self._append_log(
                {
                    "type": "preference",
                    "rater_id": rater_id,
                    "pair_id": pair_id,
                    "record": record.__dict__,
                }
            )
            sess.collected.append(record)
            sess.answered.add((rater_id, pair_id))
            return {"accepted": True, "record_index": len(sess.collected) - 1}

    def submit_criteria(self, rater_id: str, text: str) -> dict:
        with self._lock:
            self._append_log(
                {"type": "criteria", "rater_id": rater_id, "text": text}
            )
            self.session.criteria_feedback[rater_id] = text
            return {"accepted": True}

    def export_csv(self) -> str:
        with self._lock:
            return preferences_to_csv(list(self.session.collected))


_PLACEHOLDER_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>Rating service</title></head>
<body><h1>Rating service is running</h1>
<p>No rating UI build was found. Build the frontend (see README) or use the
API endpoints under <code>/api/session/&lt;sid&gt;/...</code> directly.</p>
</body></html>
"""


def create_app(services: dict[str, RatingService], static_dir=None) -> FastAPI:
    app = FastAPI(title="ink rating service")

    def _svc(sid: str) -> RatingService:
        svc = services.get(sid)
        if svc is None:
            raise HTTPException(status_code=404, detail=f"unknown session {sid!r}")
        return svc

    @app.get("/api/session/{sid}/next")
    def next_pair(sid: str, rater: str):
        return _svc(sid).next_pair(rater)

    @app.post("/api/session/{sid}/preference")
    def preference(sid: str, body: PreferenceIn):
        return _svc(sid).submit_preference(body.pair_id, body.choice, body.rater_id)

    @app.post("/api/session/{sid}/criteria")
    def criteria(sid: str, body: CriteriaIn):
        return _svc(sid).submit_criteria(body.rater_id, body.text)

    @app.get("/api/session/{sid}/export")
    def export(sid: str):
        return PlainTextResponse(_svc(sid).export_csv(), media_type="text/csv")

    static_dir = Path(static_dir) if static_dir else None
    if static_dir and static_dir.is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return _PLACEHOLDER_PAGE

    return app


def serve_rating(
    session: RatingSession,
    corpus: Corpus,
    port: int = 8000,
    host: str = "127.0.0.1",
    log_path=None,
    static_dir=None,
) -> None:
    """Run the rating service until interrupted."""
    import uvicorn

    service = RatingService(session, corpus, log_path=log_path)
    app = create_app({session.id: service}, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port)
