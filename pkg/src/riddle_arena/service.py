"""HTTP orchestration layer: live matches with server-pushed event streams,
human input, evaluation jobs, and report retrieval.

Matches with human slots run on the wall clock in a driver thread; pure
agent matches run on the virtual clock in the background. Every match
owns one lock, so all inputs land in a single serialized order.
"""

from __future__ import annotations

import json
import logging
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Iterator

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse
from pydantic import BaseModel, Field

from . import agents as ag
from .data import Riddle
from .driver import MatchDriver
from .engine import (
    AnswerInput,
    AwaitingAnswer,
    BuzzInput,
    DeadlineExpired,
    MatchConfig,
    write_transcript,
)
from .evalrun import build_report, run_eval, write_records
from .retrieval import CorpusIndex
from .storage import DataDir

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# request/response bodies


class AgentSpec(BaseModel):
    type: str  # oracle | retrieval | remote
    buzz_at_clue: int = 1
    threshold: float = 0.5
    evaluate_at: str = "clue_end"
    endpoint: str = ""
    index_path: str | None = None


class CreateMatchRequest(BaseModel):
    config: dict = Field(default_factory=dict)
    riddle_ids: list[str]
    agents: dict[str, AgentSpec] = Field(default_factory=dict)
    humans: list[str] = Field(default_factory=list)


class MatchInputRequest(BaseModel):
    team: str
    input: dict  # {"type": "join" | "buzz" | "answer", "text": ...}


class CreateEvalRequest(BaseModel):
    split: str = "test"
    agent: AgentSpec
    mode: str = "batch"


# ---------------------------------------------------------------------------
# match sessions


@dataclass
class MatchSession:
    match_id: str
    config: MatchConfig
    riddles: list[Riddle]
    humans: set[str]
    driver: MatchDriver
    clock: str  # virtual | wall
    created_at: float
    status: str = "pending"  # pending | running | finished
    joined: set[str] = field(default_factory=set)
    next_receipt_seq: int = 1
    lock: threading.RLock = field(default_factory=threading.RLock)
    cond: threading.Condition = field(init=False)
    started_mono: float = 0.0

    def __post_init__(self):
        self.cond = threading.Condition(self.lock)

    def snapshot(self) -> dict:
        with self.lock:
            return {
                "match_id": self.match_id,
                "status": self.status,
                "created_at": self.created_at,
                "clock": self.clock,
                "config": self.config.to_dict(),
                "riddle_ids": [r.id for r in self.riddles],
                "humans": sorted(self.humans),
                "joined": sorted(self.joined),
                "scores": dict(self.driver.state.scores),
                "event_count": len(self.driver.events),
            }


def build_agent(spec: AgentSpec, riddles: list[Riddle], data: DataDir) -> ag.Agent:
    if spec.type == "oracle":
        golds = {r.id: r.gold_answers[0] for r in riddles}
        return ag.OracleAgent(spec.buzz_at_clue, golds)
    if spec.type == "retrieval":
        index_path = spec.index_path or data.index_json
        index = CorpusIndex.load(index_path)
        return ag.RetrievalAgent(index, ag.BuzzPolicy(spec.threshold, spec.evaluate_at))
    if spec.type == "remote":
        return ag.RemoteAgent(spec.endpoint)
    raise ValueError(f"unknown agent spec type {spec.type!r}")


class ArenaService:
    """Registry of live matches and eval jobs over one data directory."""

    def __init__(self, data_dir: DataDir):
        self.data = data_dir
        self.matches: dict[str, MatchSession] = {}
        self.jobs: dict[str, dict] = {}
        self.registry_lock = threading.Lock()

    # -- matches -----------------------------------------------------------

    def create_match(self, req: CreateMatchRequest) -> tuple[MatchSession, dict]:
        riddles_by_id = {r.id: r for r in self.data.load_riddles()}
        riddles = []
        for rid in req.riddle_ids:
            if rid not in riddles_by_id:
                raise KeyError(f"unknown riddle id {rid!r}")
            riddles.append(riddles_by_id[rid])

        teams = list(req.agents) + list(req.humans)
        cfg_dict = dict(req.config)
        cfg_dict.setdefault("team_ids", teams)
        config = MatchConfig.from_dict(cfg_dict)
        if set(config.team_ids) != set(teams):
            raise ValueError("config team_ids must match agent and human slots")

        agent_map = {team: build_agent(spec, riddles, self.data) for team, spec in req.agents.items()}
        session = MatchSession(
            match_id=uuid.uuid4().hex[:12],
            config=config,
            riddles=riddles,
            humans=set(req.humans),
            driver=MatchDriver(config, riddles, agent_map),
            clock="wall" if req.humans else "virtual",
            created_at=time.time(),
        )
        with self.registry_lock:
            self.matches[session.match_id] = session
        # snapshot before the driver thread can race ahead
        snapshot = self._start(session) if not session.humans else session.snapshot()
        return session, snapshot

    def get_match(self, match_id: str) -> MatchSession:
        session = self.matches.get(match_id)
        if session is None:
            raise KeyError(f"unknown match {match_id!r}")
        return session

    def _start(self, session: MatchSession) -> dict:
        with session.lock:
            if session.status != "pending":
                return session.snapshot()
            session.status = "running"
            session.started_mono = time.monotonic()
            snapshot = session.snapshot()
        thread = threading.Thread(
            target=self._drive_virtual if session.clock == "virtual" else self._drive_wall,
            args=(session,),
            daemon=True,
        )
        thread.start()
        return snapshot

    def _finish(self, session: MatchSession) -> None:
        # persist first: a "finished" status implies the artifacts exist
        write_transcript(session.driver.events, self.data.match_transcript(session.match_id))
        result = session.driver.result()
        meta = session.snapshot()
        meta["status"] = "finished"
        meta["result"] = {
            "scores": result.scores,
            "riddles": [o.__dict__ for o in result.riddles],
        }
        self.data.write_json(self.data.match_meta(session.match_id), meta)
        session.driver.close()
        with session.cond:
            session.status = "finished"
            session.cond.notify_all()

    def _drive_virtual(self, session: MatchSession) -> None:
        try:
            while True:
                with session.cond:
                    if session.driver.done:
                        break
                    session.driver.tick()
                    session.cond.notify_all()
            self._finish(session)
        except Exception:
            log.exception("virtual match %s crashed", session.match_id)

    def _drive_wall(self, session: MatchSession) -> None:
        try:
            interval = session.driver.match.token_interval_ms / 1000
            while True:
                with session.cond:
                    if session.driver.done:
                        break
                    phase = session.driver.state.phase
                    if isinstance(phase, AwaitingAnswer):
                        # wait for the human answer or the real deadline
                        remaining_ms = phase.deadline_ms - self._now_ms(session)
                        if remaining_ms > 0:
                            session.cond.wait(timeout=remaining_ms / 1000)
                        still = session.driver.state.phase
                        if (
                            isinstance(still, AwaitingAnswer)
                            and still == phase
                            and self._now_ms(session) >= phase.deadline_ms
                        ):
                            session.driver.submit(DeadlineExpired(at_ms=self._now_ms(session)))
                            session.cond.notify_all()
                        continue
                    session.driver.tick(at_ms=self._now_ms(session))
                    session.cond.notify_all()
                time.sleep(interval)
            self._finish(session)
        except Exception:
            log.exception("wall match %s crashed", session.match_id)

    def _now_ms(self, session: MatchSession) -> int:
        return int((time.monotonic() - session.started_mono) * 1000)

    def join(self, session: MatchSession, team: str) -> dict:
        if team not in session.humans:
            raise PermissionError(f"{team!r} is not a human slot")
        start = False
        with session.lock:
            session.joined.add(team)
            if session.status == "pending" and session.joined >= session.humans:
                start = True
        if start:
            self._start(session)
        return {"joined": True, "status": session.status}

    def human_input(self, session: MatchSession, team: str, payload: dict) -> dict:
        kind = payload.get("type")
        if kind == "join":
            return self.join(session, team)
        if team not in session.humans:
            raise PermissionError(f"{team!r} is not a human slot")
        if session.status == "finished":
            raise PermissionError("match already finished")
        if session.status == "pending":
            raise PermissionError("match has not started")

        with session.cond:
            seq = session.next_receipt_seq
            session.next_receipt_seq += 1
            at_ms = self._now_ms(session)
            if kind == "buzz":
                events = session.driver.submit(BuzzInput(team=team, seq=seq, at_ms=at_ms))
            elif kind == "answer":
                events = session.driver.submit(
                    AnswerInput(team=team, text=str(payload.get("text", "")), at_ms=at_ms)
                )
            else:
                raise ValueError(f"unknown input type {kind!r}")
            session.cond.notify_all()

        rejected = [e for e in events if e.kind == "Rejected"]
        ack: dict = {"seq": seq, "accepted": not rejected}
        if rejected:
            ack["reason"] = rejected[0].data["reason"]
        elif kind == "buzz":
            ack["deadline_ms"] = session.config.answer_deadline_ms
        return ack

    def stream(self, session: MatchSession) -> Iterator[str]:
        """Full history then live tail, SSE-framed, closing at contest end."""
        sent = 0
        while True:
            with session.cond:
                while sent >= len(session.driver.events) and session.status != "finished":
                    session.cond.wait(timeout=0.5)
                events = session.driver.events[sent:]
                finished = session.status == "finished"
            for ev in events:
                yield f"id: {sent}\ndata: {json.dumps(ev.to_dict())}\n\n"
                sent += 1
            if finished and sent >= len(session.driver.events):
                return

    # -- eval jobs -----------------------------------------------------------

    def create_eval(self, req: CreateEvalRequest) -> dict:
        riddles = self.data.split_riddles(req.split)
        if not riddles:
            raise ValueError(f"split {req.split!r} is empty")
        job_id = uuid.uuid4().hex[:12]
        job = {
            "job_id": job_id,
            "split": req.split,
            "mode": req.mode,
            "agent": req.agent.model_dump(),
            "status": "running",
            "progress": {"done": 0, "total": len(riddles)},
            "error": None,
        }
        with self.registry_lock:
            self.jobs[job_id] = job
        thread = threading.Thread(target=self._run_eval, args=(job, req, riddles), daemon=True)
        thread.start()
        return job

    def _run_eval(self, job: dict, req: CreateEvalRequest, riddles: list[Riddle]) -> None:
        records = []

        def on_record(rec):
            records.append(rec)
            job["progress"]["done"] = len(records)

        try:
            agent = build_agent(req.agent, riddles, self.data)
            try:
                run_eval(riddles, agent, mode=req.mode, on_record=on_record)
            finally:
                agent.close()
            job["report"] = build_report(records).to_dict()
            final_status = "finished"
        except Exception as exc:
            log.exception("eval job %s failed", job["job_id"])
            job["error"] = str(exc)
            final_status = "failed"
        # persist per-riddle progress before announcing the terminal status
        write_records(records, self.data.job_records(job["job_id"]))
        meta = dict(job)
        meta["status"] = final_status
        self.data.write_json(self.data.job_meta(job["job_id"]), meta)
        job["status"] = final_status

    def get_job(self, job_id: str) -> dict:
        job = self.jobs.get(job_id)
        if job is None:
            raise KeyError(f"unknown eval job {job_id!r}")
        return job

    def list_jobs(self) -> list[dict]:
        with self.registry_lock:
            jobs = list(self.jobs.values())
        return [
            {k: job.get(k) for k in ("job_id", "split", "mode", "agent", "status", "progress", "error")}
            for job in jobs
        ]

    # -- datasets -----------------------------------------------------------

    def dataset_info(self) -> dict:
        info: dict = {"riddles": 0, "splits": None}
        try:
            info["riddles"] = len(self.data.load_riddles())
        except FileNotFoundError:
            return info
        try:
            split = self.data.load_split()
            info["splits"] = {
                "seed": split.seed,
                "train": len(split.train),
                "test": len(split.test),
                "dev": len(split.dev),
            }
        except FileNotFoundError:
            pass
        return info


# ---------------------------------------------------------------------------
# FastAPI wiring


def create_app(data_dir: str | DataDir) -> FastAPI:
    data = data_dir if isinstance(data_dir, DataDir) else DataDir(data_dir)
    service = ArenaService(data)
    app = FastAPI(title="riddle-arena")
    app.state.service = service

    def _match_or_404(match_id: str) -> MatchSession:
        try:
            return service.get_match(match_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.post("/matches")
    def create_match(req: CreateMatchRequest):
        try:
            _, snapshot = service.create_match(req)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except (ValueError, ConnectionError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return snapshot

    @app.get("/matches/{match_id}")
    def get_match(match_id: str):
        return _match_or_404(match_id).snapshot()

    @app.get("/matches/{match_id}/events")
    def stream_events(match_id: str):
        session = _match_or_404(match_id)
        return StreamingResponse(service.stream(session), media_type="text/event-stream")

    @app.post("/matches/{match_id}/input")
    def submit_input(match_id: str, req: MatchInputRequest):
        session = _match_or_404(match_id)
        try:
            return service.human_input(session, req.team, req.input)
        except PermissionError as exc:
            raise HTTPException(status_code=403, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/evals")
    def create_eval(req: CreateEvalRequest):
        try:
            return service.create_eval(req)
        except FileNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/evals")
    def list_evals():
        return service.list_jobs()

    @app.get("/evals/{job_id}")
    def get_eval(job_id: str):
        try:
            return service.get_job(job_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.get("/evals/{job_id}/report")
    def get_eval_report(job_id: str):
        try:
            job = service.get_job(job_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        if job["status"] != "finished":
            raise HTTPException(
                status_code=409,
                detail={"status": job["status"], "progress": job["progress"]},
            )
        return job["report"]

    @app.get("/datasets")
    def datasets():
        return service.dataset_info()

    return app
