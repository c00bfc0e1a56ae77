"""Evaluation runs over dataset splits.

Batch mode presents each riddle's clues concatenated up front and grants
the agent an unconditional answer window. Live mode drives a single-team
match through the engine so early-buzz behavior (and its clue index) is
measured.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO, Union

from . import agents as ag
from .data import Riddle
from .driver import run_match
from .engine import MatchConfig
from .metrics import EvalReport, MatchVerdict, aggregate_report, fuzzy_match


@dataclass(frozen=True)
class EvalRecord:
    """Per-riddle outcome of one evaluation run."""

    riddle_id: str
    subject: str
    answer: str
    em: bool
    fm: bool
    best_f1: float
    latency_s: float

    def to_dict(self) -> dict:
        return {
            "riddle_id": self.riddle_id,
            "subject": self.subject,
            "answer": self.answer,
            "em": self.em,
            "fm": self.fm,
            "best_f1": self.best_f1,
            "latency_s": self.latency_s,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvalRecord":
        return cls(
            riddle_id=d["riddle_id"],
            subject=d["subject"],
            answer=d["answer"],
            em=d["em"],
            fm=d["fm"],
            best_f1=d["best_f1"],
            latency_s=d["latency_s"],
        )


def _record(riddle: Riddle, answer: str, latency_s: float, fm_threshold: float) -> EvalRecord:
    verdict = fuzzy_match(answer, riddle.gold_answers, fm_threshold)
    return EvalRecord(
        riddle_id=riddle.id,
        subject=riddle.subject.value,
        answer=answer,
        em=verdict.em,
        fm=verdict.fm,
        best_f1=verdict.best_f1,
        latency_s=latency_s,
    )


def eval_riddle_batch(riddle: Riddle, agent: ag.Agent, fm_threshold: float = 0.5) -> EvalRecord:
    """Present every clue at once, then collect one answer."""
    start = time.monotonic()
    agent.handle(ag.RiddleStart(riddle_id=riddle.id, subject=riddle.subject.value))
    full_text = " ".join(riddle.clues)
    agent.handle(ag.Token(clue_index=len(riddle.clues), text=full_text, t_ms=0))
    agent.handle(ag.ClueEnd(clue_index=len(riddle.clues)))
    replies = agent.handle(ag.BuzzGranted(deadline_ms=0))
    answers = [m for m in replies if isinstance(m, ag.AnswerSubmission)]
    answer = answers[0].text if answers else ""
    agent.handle(ag.RiddleEnd(outcome="evaluated"))
    return _record(riddle, answer, time.monotonic() - start, fm_threshold)


def eval_riddle_live(
    riddle: Riddle, agent: ag.Agent, config: MatchConfig | None = None, fm_threshold: float = 0.5
) -> EvalRecord:
    """Run one single-team match; latency is the virtual time to answer."""
    cfg = config or MatchConfig(team_ids=("agent",))
    team = cfg.team_ids[0]
    result, events = run_match(cfg, [riddle], {team: agent}, full_contest=False)
    answer = ""
    latency_ms = events[-1].t_ms if events else 0
    for ev in events:
        if ev.kind == "AnswerGiven" and ev.data["team"] == team:
            answer = ev.data["text"]
            latency_ms = ev.t_ms
            break
    return _record(riddle, answer, latency_ms / 1000, fm_threshold)


def run_eval(
    riddles: Sequence[Riddle],
    agent: ag.Agent,
    mode: str = "batch",
    config: MatchConfig | None = None,
    fm_threshold: float = 0.5,
    on_record=None,
) -> list[EvalRecord]:
    """Evaluate an agent over a riddle list; records stay in dataset order."""
    if mode not in ("batch", "live"):
        raise ValueError(f"unknown eval mode {mode!r}")
    records = []
    for riddle in riddles:
        if mode == "batch":
            rec = eval_riddle_batch(riddle, agent, fm_threshold)
        else:
            rec = eval_riddle_live(riddle, agent, config, fm_threshold)
        records.append(rec)
        if on_record is not None:
            on_record(rec)
    return records


def build_report(records: Sequence[EvalRecord]) -> EvalReport:
    """Aggregate per-riddle records; reproducible from persisted records."""
    verdicts = [MatchVerdict(em=r.em, fm=r.fm, best_f1=r.best_f1) for r in records]
    return aggregate_report(
        verdicts,
        [r.latency_s for r in records],
        [r.subject for r in records],
    )


def write_records(records: Sequence[EvalRecord], dest: Union[str, Path, TextIO]) -> None:
    own = isinstance(dest, (str, Path))
    fp = open(dest, "w", encoding="utf-8") if own else dest
    try:
        for rec in records:
            fp.write(json.dumps(rec.to_dict()) + "\n")
    finally:
        if own:
            fp.close()


def read_records(source: Union[str, Path, TextIO]) -> list[EvalRecord]:
    own = isinstance(source, (str, Path))
    fp = open(source, "r", encoding="utf-8") if own else source
    try:
        return [EvalRecord.from_dict(json.loads(line)) for line in fp if line.strip()]
    finally:
        if own:
            fp.close()
