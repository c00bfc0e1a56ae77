"""Deterministic state machine for the buzzer round: timed clue streaming,
buzz arbitration, adjudication, 5/4/3 scoring, and transcript replay.

Every external input (tick, buzz, answer, deadline) passes through
``RiddleMatch.step``, a pure transition over an immutable ``MatchState``.
The emitted ``TranscriptEvent`` list is the authoritative log: feeding a
transcript's inputs back through ``step`` reproduces the match exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence, TextIO, Union

from .data import HumanRecord, Riddle
from .metrics import MatchVerdict, fuzzy_match

# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class MatchConfig:
    team_ids: tuple[str, ...]
    words_per_second: float = 2.5
    answer_deadline_ms: int = 5000
    adjudication_mode: str = "strict_em"  # strict_em | lenient_fm
    fm_threshold: float = 0.5
    lockout_on_wrong: bool = True
    inter_clue_pause_ms: int = 0
    seed: int = 0

    def __post_init__(self):
        teams = tuple(self.team_ids)
        object.__setattr__(self, "team_ids", teams)
        if not 1 <= len(teams) <= 3:
            raise ValueError("a match needs 1 to 3 teams")
        if len(set(teams)) != len(teams):
            raise ValueError("team ids must be unique")
        if self.words_per_second <= 0:
            raise ValueError("words_per_second must be positive")
        if self.answer_deadline_ms <= 0:
            raise ValueError("answer_deadline_ms must be positive")
        if self.inter_clue_pause_ms < 0:
            raise ValueError("inter_clue_pause_ms must be non-negative")
        if self.adjudication_mode not in ("strict_em", "lenient_fm"):
            raise ValueError(f"unknown adjudication mode {self.adjudication_mode!r}")

    def to_dict(self) -> dict:
        return {
            "team_ids": list(self.team_ids),
            "words_per_second": self.words_per_second,
            "answer_deadline_ms": self.answer_deadline_ms,
            "adjudication_mode": self.adjudication_mode,
            "fm_threshold": self.fm_threshold,
            "lockout_on_wrong": self.lockout_on_wrong,
            "inter_clue_pause_ms": self.inter_clue_pause_ms,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MatchConfig":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: (tuple(v) if k == "team_ids" else v) for k, v in d.items() if k in known})


# ---------------------------------------------------------------------------
# phases and inputs


@dataclass(frozen=True)
class Idle:
    pass


@dataclass(frozen=True)
class Streaming:
    riddle_index: int
    clue_index: int  # 1-based
    token_index: int  # tokens already emitted in the open clue
    clue_open: bool  # False between ClueEnd and the next ClueStart


@dataclass(frozen=True)
class AwaitingAnswer:
    team: str
    deadline_ms: int  # absolute clock value
    riddle_index: int
    scoring_clue: int
    resume: Streaming


@dataclass(frozen=True)
class RiddleDone:
    riddle_index: int


@dataclass(frozen=True)
class ContestDone:
    pass


Phase = Union[Idle, Streaming, AwaitingAnswer, RiddleDone, ContestDone]


@dataclass(frozen=True)
class Tick:
    at_ms: int | None = None


@dataclass(frozen=True)
class BuzzInput:
    team: str
    seq: int | None = None
    at_ms: int | None = None


@dataclass(frozen=True)
class AnswerInput:
    team: str
    text: str
    at_ms: int | None = None


@dataclass(frozen=True)
class DeadlineExpired:
    at_ms: int | None = None


MatchInput = Union[Tick, BuzzInput, AnswerInput, DeadlineExpired]


@dataclass(frozen=True)
class MatchState:
    phase: Phase
    scores: tuple[tuple[str, int], ...]  # alphabetical by team
    locked_out: frozenset[str]
    clock_ms: int
    next_seq: int

    def score_of(self, team: str) -> int:
        return dict(self.scores)[team]


@dataclass(frozen=True)
class TranscriptEvent:
    """One timestamped log record; ``data`` holds the kind's payload."""

    t_ms: int
    kind: str
    data: dict

    def to_dict(self) -> dict:
        return {"t_ms": self.t_ms, "kind": self.kind, **self.data}

    @classmethod
    def from_dict(cls, d: dict) -> "TranscriptEvent":
        payload = {k: v for k, v in d.items() if k not in ("t_ms", "kind")}
        return cls(t_ms=d["t_ms"], kind=d["kind"], data=payload)


# ---------------------------------------------------------------------------
# scoring and adjudication


def points_for_clue(clue_index: int) -> int:
    """5 points on the first clue, 4 on the second, 3 from the third on."""
    if clue_index < 1:
        raise ValueError("clue_index must be >= 1")
    if clue_index == 1:
        return 5
    if clue_index == 2:
        return 4
    return 3


@dataclass(frozen=True)
class AdjudicationResult:
    correct: bool
    detail: MatchVerdict


def adjudicate(
    answer: str,
    riddle: Riddle,
    mode: str = "strict_em",
    threshold: float = 0.5,
) -> AdjudicationResult:
    """Judge an answer against the riddle's gold answers."""
    detail = fuzzy_match(answer, riddle.gold_answers, threshold)
    if mode == "strict_em":
        return AdjudicationResult(correct=detail.em, detail=detail)
    if mode == "lenient_fm":
        return AdjudicationResult(correct=detail.fm, detail=detail)
    raise ValueError(f"unknown adjudication mode {mode!r}")


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class RiddleOutcome:
    riddle_id: str
    winner: str | None
    answered_on_clue: int | None
    points_awarded: int


@dataclass
class ContestResult:
    scores: dict[str, int]
    riddles: list[RiddleOutcome]


# ---------------------------------------------------------------------------
# the state machine


class RiddleMatch:
    """Pure transition function over a fixed (config, riddles) context."""

    def __init__(self, config: MatchConfig, riddles: Sequence[Riddle]):
        if not riddles:
            raise ValueError("a match needs at least one riddle")
        self.config = config
        self.riddles = list(riddles)
        self.clue_tokens = [[clue.split() for clue in r.clues] for r in self.riddles]
        self.token_interval_ms = max(1, round(1000 / config.words_per_second))

    def initial_state(self) -> MatchState:
        return MatchState(
            phase=Idle(),
            scores=tuple((t, 0) for t in sorted(self.config.team_ids)),
            locked_out=frozenset(),
            clock_ms=0,
            next_seq=1,
        )

    # -- helpers --------------------------------------------------------

    def _scoring_clue(self, s: Streaming) -> int:
        # clue being read at buzz time, or the last one fully read
        return s.clue_index if s.clue_open else max(1, s.clue_index - 1)

    def _reject(self, state: MatchState, clock: int, kind: str, reason: str, **extra) -> tuple[MatchState, list[TranscriptEvent]]:
        data = {"input": kind, "reason": reason, **extra}
        ev = TranscriptEvent(clock, "Rejected", data)
        return replace(state, clock_ms=clock), [ev]

    def _start_riddle(self, state: MatchState, clock: int, index: int) -> tuple[MatchState, list[TranscriptEvent]]:
        riddle = self.riddles[index]
        ev = TranscriptEvent(clock, "RiddleStart", {"riddle_id": riddle.id, "subject": riddle.subject.value})
        next_state = replace(
            state,
            phase=Streaming(index, 1, 0, clue_open=False),
            locked_out=frozenset(),
            clock_ms=clock,
        )
        return next_state, [ev]

    def _wrong_answer(
        self, state: MatchState, clock: int, phase: AwaitingAnswer, events: list[TranscriptEvent]
    ) -> MatchState:
        events.append(TranscriptEvent(clock, "Verdict", {"team": phase.team, "correct": False, "points": 0}))
        locked = state.locked_out | {phase.team} if self.config.lockout_on_wrong else state.locked_out
        return replace(state, phase=phase.resume, locked_out=locked, clock_ms=clock)

    # -- transitions ------------------------------------------------------

    def step(self, state: MatchState, inp: MatchInput) -> tuple[MatchState, list[TranscriptEvent]]:
        clock = state.clock_ms
        if inp.at_ms is not None and inp.at_ms > clock:
            clock = inp.at_ms

        if isinstance(inp, Tick):
            return self._step_tick(state, clock)
        if isinstance(inp, BuzzInput):
            return self._step_buzz(state, clock, inp)
        if isinstance(inp, AnswerInput):
            return self._step_answer(state, clock, inp)
        if isinstance(inp, DeadlineExpired):
            return self._step_deadline(state, clock)
        raise TypeError(f"unknown input {inp!r}")

    def _step_tick(self, state: MatchState, clock: int) -> tuple[MatchState, list[TranscriptEvent]]:
        phase = state.phase

        if isinstance(phase, Idle):
            return self._start_riddle(state, clock, 0)

        if isinstance(phase, RiddleDone):
            if phase.riddle_index + 1 < len(self.riddles):
                return self._start_riddle(state, clock, phase.riddle_index + 1)
            ev = TranscriptEvent(clock, "ContestEnd", {"scores": dict(state.scores)})
            return replace(state, phase=ContestDone(), clock_ms=clock), [ev]

        if isinstance(phase, Streaming):
            n_clues = len(self.clue_tokens[phase.riddle_index])
            if not phase.clue_open:
                if phase.clue_index > n_clues:
                    # the buzz window after the final clue passed unanswered
                    ev = TranscriptEvent(clock, "RiddleEnd", {"winner": None, "answered_on_clue": None})
                    return replace(state, phase=RiddleDone(phase.riddle_index), clock_ms=clock), [ev]
                if phase.clue_index > 1:
                    clock += self.config.inter_clue_pause_ms
                ev = TranscriptEvent(clock, "ClueStart", {"clue_index": phase.clue_index})
                next_phase = replace(phase, token_index=0, clue_open=True)
                return replace(state, phase=next_phase, clock_ms=clock), [ev]

            tokens = self.clue_tokens[phase.riddle_index][phase.clue_index - 1]
            clock += self.token_interval_ms
            events = [TranscriptEvent(clock, "Token", {"text": tokens[phase.token_index]})]
            emitted = phase.token_index + 1
            if emitted < len(tokens):
                next_phase: Phase = replace(phase, token_index=emitted)
            else:
                # a between-clues window follows even the final clue, so
                # teams can still buzz once everything has been read
                events.append(TranscriptEvent(clock, "ClueEnd", {"clue_index": phase.clue_index}))
                next_phase = Streaming(phase.riddle_index, phase.clue_index + 1, 0, clue_open=False)
            return replace(state, phase=next_phase, clock_ms=clock), events

        return self._reject(state, clock, "tick", "wrong_phase")

    def _step_buzz(self, state: MatchState, clock: int, inp: BuzzInput) -> tuple[MatchState, list[TranscriptEvent]]:
        if inp.team not in self.config.team_ids:
            return self._reject(state, clock, "buzz", "unknown_team", team=inp.team)
        phase = state.phase
        if isinstance(phase, AwaitingAnswer):
            return self._reject(state, clock, "buzz", "answer_in_progress", team=inp.team)
        if not isinstance(phase, Streaming):
            return self._reject(state, clock, "buzz", "wrong_phase", team=inp.team)
        if inp.team in state.locked_out:
            return self._reject(state, clock, "buzz", "locked_out", team=inp.team)

        seq = inp.seq if inp.seq is not None else state.next_seq
        ev = TranscriptEvent(clock, "Buzz", {"team": inp.team, "seq": seq})
        next_state = replace(
            state,
            phase=AwaitingAnswer(
                team=inp.team,
                deadline_ms=clock + self.config.answer_deadline_ms,
                riddle_index=phase.riddle_index,
                scoring_clue=self._scoring_clue(phase),
                resume=phase,
            ),
            clock_ms=clock,
            next_seq=max(state.next_seq, seq + 1),
        )
        return next_state, [ev]

    def _step_answer(self, state: MatchState, clock: int, inp: AnswerInput) -> tuple[MatchState, list[TranscriptEvent]]:
        phase = state.phase
        if not isinstance(phase, AwaitingAnswer):
            return self._reject(state, clock, "answer", "wrong_phase", team=inp.team, text=inp.text)
        if inp.team != phase.team:
            return self._reject(state, clock, "answer", "not_answering_team", team=inp.team, text=inp.text)

        events = [TranscriptEvent(clock, "AnswerGiven", {"team": inp.team, "text": inp.text})]
        riddle = self.riddles[phase.riddle_index]
        result = adjudicate(inp.text, riddle, self.config.adjudication_mode, self.config.fm_threshold)
        if not result.correct:
            return self._wrong_answer(state, clock, phase, events), events

        points = points_for_clue(phase.scoring_clue)
        scores = tuple(
            (team, pts + points if team == inp.team else pts) for team, pts in state.scores
        )
        events.append(TranscriptEvent(clock, "Verdict", {"team": inp.team, "correct": True, "points": points}))
        events.append(
            TranscriptEvent(clock, "RiddleEnd", {"winner": inp.team, "answered_on_clue": phase.scoring_clue})
        )
        next_state = replace(
            state, phase=RiddleDone(phase.riddle_index), scores=scores, clock_ms=clock
        )
        return next_state, events

    def _step_deadline(self, state: MatchState, clock: int) -> tuple[MatchState, list[TranscriptEvent]]:
        phase = state.phase
        if not isinstance(phase, AwaitingAnswer):
            return self._reject(state, clock, "deadline", "wrong_phase")
        clock = max(clock, phase.deadline_ms)
        # logged as an empty answer so a transcript replays without a clock
        events = [TranscriptEvent(clock, "AnswerGiven", {"team": phase.team, "text": ""})]
        return self._wrong_answer(state, clock, phase, events), events


# ---------------------------------------------------------------------------
# transcript utilities


def write_transcript(events: Sequence[TranscriptEvent], dest: Union[str, Path, TextIO]) -> None:
    own = isinstance(dest, (str, Path))
    fp = open(dest, "w", encoding="utf-8") if own else dest
    try:
        for ev in events:
            fp.write(json.dumps(ev.to_dict()) + "\n")
    finally:
        if own:
            fp.close()


def read_transcript(source: Union[str, Path, TextIO]) -> list[TranscriptEvent]:
    own = isinstance(source, (str, Path))
    fp = open(source, "r", encoding="utf-8") if own else source
    try:
        return [TranscriptEvent.from_dict(json.loads(line)) for line in fp if line.strip()]
    finally:
        if own:
            fp.close()


def result_from_transcript(events: Sequence[TranscriptEvent], riddle_ids: Sequence[str]) -> ContestResult:
    """Reconstruct the contest result recorded in a transcript."""
    scores: dict[str, int] = {}
    outcomes: list[RiddleOutcome] = []
    current: str | None = None
    for ev in events:
        if ev.kind == "RiddleStart":
            current = ev.data["riddle_id"]
        elif ev.kind == "RiddleEnd":
            winner = ev.data.get("winner")
            clue = ev.data.get("answered_on_clue")
            points = points_for_clue(clue) if winner is not None else 0
            outcomes.append(RiddleOutcome(current or "", winner, clue, points))
        elif ev.kind == "ContestEnd":
            scores = dict(ev.data["scores"])
    if len(outcomes) != len(riddle_ids):
        raise ValueError("transcript does not cover every riddle")
    return ContestResult(scores=scores, riddles=outcomes)


class ReplayError(ValueError):
    pass


_INPUT_KINDS = {"Buzz", "AnswerGiven", "Rejected"}


def _input_for_event(ev: TranscriptEvent) -> MatchInput:
    if ev.kind == "Buzz":
        return BuzzInput(team=ev.data["team"], seq=ev.data["seq"])
    if ev.kind == "AnswerGiven":
        return AnswerInput(team=ev.data["team"], text=ev.data["text"])
    if ev.kind == "Rejected":
        kind = ev.data["input"]
        if kind == "buzz":
            return BuzzInput(team=ev.data.get("team", ""))
        if kind == "answer":
            return AnswerInput(team=ev.data.get("team", ""), text=ev.data.get("text", ""))
        if kind == "deadline":
            return DeadlineExpired()
        return Tick()
    return Tick()


def replay_transcript(
    config: MatchConfig, riddles: Sequence[Riddle], events: Sequence[TranscriptEvent]
) -> tuple[ContestResult, list[TranscriptEvent]]:
    """Re-run a recorded transcript's inputs through a fresh state machine.

    Any divergence between the regenerated event kinds and the recording
    raises ReplayError.
    """
    match = RiddleMatch(config, riddles)
    state = match.initial_state()
    out: list[TranscriptEvent] = []
    i = 0
    while i < len(events):
        state, emitted = match.step(state, _input_for_event(events[i]))
        if not emitted:
            raise ReplayError(f"no progress at event {i}")
        for offset, ev in enumerate(emitted):
            if i + offset >= len(events) or events[i + offset].kind != ev.kind:
                raise ReplayError(f"replay diverged at event {i + offset}: {ev.kind}")
        out.extend(emitted)
        i += len(emitted)
    return result_from_transcript(out, [r.id for r in riddles]), out


def replay_human(records: Sequence[HumanRecord], riddles: Sequence[Riddle]) -> ContestResult:
    """Score a contest from its recorded human outcomes."""
    by_id = {r.id: r for r in riddles}
    scores: dict[str, int] = {}
    outcomes: list[RiddleOutcome] = []
    for rec in records:
        riddle = by_id.get(rec.riddle_id)
        if riddle is None:
            raise ValueError(f"unknown riddle id {rec.riddle_id!r}")
        if rec.winning_team is None:
            outcomes.append(RiddleOutcome(riddle.id, None, None, 0))
            continue
        if rec.answered_on_clue > len(riddle.clues):
            raise ValueError(
                f"riddle {riddle.id}: answered_on_clue {rec.answered_on_clue} exceeds {len(riddle.clues)} clues"
            )
        points = points_for_clue(rec.answered_on_clue)
        scores[rec.winning_team] = scores.get(rec.winning_team, 0) + points
        outcomes.append(RiddleOutcome(riddle.id, rec.winning_team, rec.answered_on_clue, points))
    return ContestResult(scores=scores, riddles=outcomes)
