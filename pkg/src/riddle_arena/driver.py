"""Drives a RiddleMatch: projects transcript events to agents, funnels
their outbound messages back through the single ordered input queue, and
runs whole contests on a virtual clock."""

from __future__ import annotations

import logging
from collections import deque
from typing import Mapping, Sequence

from . import agents as ag
from .data import Riddle
from .engine import (
    AnswerInput,
    AwaitingAnswer,
    BuzzInput,
    ContestDone,
    ContestResult,
    DeadlineExpired,
    MatchConfig,
    RiddleMatch,
    Tick,
    TranscriptEvent,
    result_from_transcript,
)

log = logging.getLogger(__name__)


class _Projector:
    """Turns transcript events into each team's inbound message stream."""

    def __init__(self) -> None:
        self.clue_index = 0

    def project(self, ev: TranscriptEvent) -> ag.AgentInbound | None:
        if ev.kind == "RiddleStart":
            self.clue_index = 0
            return ag.RiddleStart(riddle_id=ev.data["riddle_id"], subject=ev.data["subject"])
        if ev.kind == "ClueStart":
            self.clue_index = ev.data["clue_index"]
            return None
        if ev.kind == "Token":
            return ag.Token(clue_index=self.clue_index, text=ev.data["text"], t_ms=ev.t_ms)
        if ev.kind == "ClueEnd":
            return ag.ClueEnd(clue_index=ev.data["clue_index"])
        if ev.kind == "RiddleEnd":
            winner = ev.data.get("winner")
            return ag.RiddleEnd(outcome=winner if winner is not None else "unanswered")
        return None


class MatchDriver:
    """Owns one match's state, transcript, and agent hookup.

    All inputs — agent buzzes, human inputs, ticks — funnel through
    ``submit``/``tick`` and are applied in arrival order; callers that
    share a driver across threads must serialize access themselves.
    """

    def __init__(
        self,
        config: MatchConfig,
        riddles: Sequence[Riddle],
        agent_map: Mapping[str, ag.Agent] | None = None,
    ):
        self.match = RiddleMatch(config, riddles)
        self.config = config
        self.riddles = list(riddles)
        self.agents = dict(agent_map or {})
        self.state = self.match.initial_state()
        self.events: list[TranscriptEvent] = []
        self._projector = _Projector()

    @property
    def done(self) -> bool:
        return isinstance(self.state.phase, ContestDone)

    # -- internals ---------------------------------------------------------

    def _apply(self, inp) -> list[TranscriptEvent]:
        self.state, emitted = self.match.step(self.state, inp)
        self.events.extend(emitted)
        return emitted

    def _dispatch(self, emitted: Sequence[TranscriptEvent]) -> deque[tuple[str, ag.AgentOutbound]]:
        """Deliver events to every agent (team order); collect their output."""
        outs: deque[tuple[str, ag.AgentOutbound]] = deque()
        for ev in emitted:
            msg = self._projector.project(ev)
            if msg is None:
                continue
            for team in self.config.team_ids:
                agent = self.agents.get(team)
                if agent is None:
                    continue
                for out in agent.handle(msg):
                    outs.append((team, out))
        return outs

    def _deliver_direct(self, team: str, msg: ag.AgentInbound) -> list[ag.AgentOutbound]:
        agent = self.agents.get(team)
        return agent.handle(msg) if agent else []

    def _process_outbound(self, queue: deque[tuple[str, ag.AgentOutbound]]) -> None:
        while queue:
            team, out = queue.popleft()
            if isinstance(out, ag.AnswerSubmission):
                # answers are only valid as a reply to a grant
                log.warning("team %s submitted an answer without a grant; dropped", team)
                continue
            emitted = self._apply(BuzzInput(team=team))
            queue.extend(self._dispatch(emitted))
            phase = self.state.phase
            if isinstance(phase, AwaitingAnswer) and phase.team == team:
                replies = self._deliver_direct(team, ag.BuzzGranted(deadline_ms=self.config.answer_deadline_ms))
                answers = [m for m in replies if isinstance(m, ag.AnswerSubmission)]
                if answers:
                    emitted = self._apply(AnswerInput(team=team, text=answers[0].text))
                else:
                    emitted = self._apply(DeadlineExpired())
                queue.extend(self._dispatch(emitted))
            else:
                self._deliver_direct(team, ag.BuzzDenied())

    # -- public surface ------------------------------------------------------

    def tick(self, at_ms: int | None = None) -> list[TranscriptEvent]:
        """Advance one streaming step and let agents react."""
        before = len(self.events)
        emitted = self._apply(Tick(at_ms=at_ms))
        self._process_outbound(self._dispatch(emitted))
        return self.events[before:]

    def submit(self, inp) -> list[TranscriptEvent]:
        """Apply an external input (human buzz/answer, deadline expiry)."""
        before = len(self.events)
        emitted = self._apply(inp)
        self._process_outbound(self._dispatch(emitted))
        return self.events[before:]

    def result(self) -> ContestResult:
        return result_from_transcript(self.events, [r.id for r in self.riddles])

    def close(self) -> None:
        for agent in self.agents.values():
            agent.close()


def run_match(
    config: MatchConfig,
    riddles: Sequence[Riddle],
    agent_map: Mapping[str, ag.Agent] | None = None,
    full_contest: bool | None = None,
) -> tuple[ContestResult, list[TranscriptEvent]]:
    """Run an entire contest on the virtual clock.

    A four-riddle match is treated as a full contest and must cover four
    distinct subjects (override with full_contest=False). Deterministic
    for fixed (config, riddles, agent behaviors).
    """
    if full_contest is None:
        full_contest = len(riddles) == 4
    if full_contest:
        if len(riddles) != 4:
            raise ValueError("a full contest has exactly 4 riddles")
        subjects = {r.subject for r in riddles}
        if len(subjects) != 4:
            raise ValueError("a full contest needs 4 distinct subjects")

    driver = MatchDriver(config, riddles, agent_map)
    guard = 0
    limit = 10_000 * max(1, len(riddles))
    while not driver.done:
        driver.tick()
        guard += 1
        if guard > limit:
            raise RuntimeError("match failed to terminate")
    return driver.result(), driver.events
