"""Answerer agents and the newline-delimited JSON wire protocol.

An agent receives a per-team projection of the match (riddle start,
tokens, clue ends, grant/deny, riddle end) and may respond with a buzz
request or, after a grant, an answer submission. Remote agents forward
the same messages over a persistent TCP connection, one JSON object per
line.
"""

from __future__ import annotations

import json
import logging
import select
import socket
import time
from dataclasses import dataclass
from typing import Callable, Union

from .retrieval import ContextBundle, CorpusIndex, make_context, search

log = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# messages


@dataclass(frozen=True)
class RiddleStart:
    riddle_id: str
    subject: str


@dataclass(frozen=True)
class Token:
    clue_index: int
    text: str
    t_ms: int


@dataclass(frozen=True)
class ClueEnd:
    clue_index: int


@dataclass(frozen=True)
class BuzzGranted:
    deadline_ms: int


@dataclass(frozen=True)
class BuzzDenied:
    pass


@dataclass(frozen=True)
class RiddleEnd:
    outcome: str  # winning team id, or "unanswered"


AgentInbound = Union[RiddleStart, Token, ClueEnd, BuzzGranted, BuzzDenied, RiddleEnd]


@dataclass(frozen=True)
class BuzzRequest:
    confidence: float


@dataclass(frozen=True)
class AnswerSubmission:
    text: str


AgentOutbound = Union[BuzzRequest, AnswerSubmission]


_INBOUND_WIRE = {
    RiddleStart: "riddle_start",
    Token: "token",
    ClueEnd: "clue_end",
    BuzzGranted: "buzz_granted",
    BuzzDenied: "buzz_denied",
    RiddleEnd: "riddle_end",
}


def inbound_to_wire(msg: AgentInbound) -> dict:
    d = {"type": _INBOUND_WIRE[type(msg)]}
    d.update(msg.__dict__)
    return d


def outbound_from_wire(d: dict) -> AgentOutbound | None:
    """Decode a remote's message; unknown types are ignored with a warning."""
    kind = d.get("type")
    if kind == "buzz":
        confidence = float(d.get("confidence", 0.0))
        clamped = min(1.0, max(0.0, confidence))
        if clamped != confidence:
            log.warning("remote confidence %s clamped into [0, 1]", confidence)
        return BuzzRequest(confidence=clamped)
    if kind == "answer":
        return AnswerSubmission(text=str(d.get("text", "")))
    log.warning("ignoring unknown wire message type %r", kind)
    return None


class Agent:
    """Base agent: sees inbound messages, may emit outbound ones."""

    def handle(self, msg: AgentInbound) -> list[AgentOutbound]:
        return []

    def close(self) -> None:
        pass


# ---------------------------------------------------------------------------
# scripted oracle


class OracleAgent(Agent):
    """Test double that buzzes at the end of a fixed clue and answers with
    the gold answer injected by the harness."""

    def __init__(self, buzz_at_clue: int, gold_answers: dict[str, str]):
        if buzz_at_clue < 1:
            raise ValueError("buzz_at_clue must be >= 1")
        self.buzz_at_clue = buzz_at_clue
        self.gold_answers = gold_answers
        self.riddle_id: str | None = None

    def handle(self, msg: AgentInbound) -> list[AgentOutbound]:
        if isinstance(msg, RiddleStart):
            self.riddle_id = msg.riddle_id
        elif isinstance(msg, ClueEnd) and msg.clue_index == self.buzz_at_clue:
            return [BuzzRequest(confidence=1.0)]
        elif isinstance(msg, BuzzGranted):
            return [AnswerSubmission(text=self.gold_answers.get(self.riddle_id or "", ""))]
        return []


def oracle_agent(buzz_at_clue: int, gold_answers: dict[str, str]) -> OracleAgent:
    return OracleAgent(buzz_at_clue, gold_answers)


# ---------------------------------------------------------------------------
# retrieval-confidence baseline


@dataclass(frozen=True)
class BuzzPolicy:
    """Buzz when retrieval confidence reaches the threshold."""

    threshold: float
    evaluate_at: str = "clue_end"  # clue_end | every_token


class RetrievalAgent(Agent):
    """Lexical baseline: searches the corpus with the clues seen so far and
    buzzes once mean top-3 confidence reaches the policy threshold.

    The answer is the section title (heading-path tail) of the top
    passage — a deliberately weak stand-in for a generative answerer that
    keeps the end-to-end loop runnable without any model.
    """

    def __init__(
        self,
        index: CorpusIndex,
        policy: BuzzPolicy,
        on_evaluation: Callable[[str, int, ContextBundle], None] | None = None,
    ):
        if policy.evaluate_at not in ("clue_end", "every_token"):
            raise ValueError(f"unknown evaluation point {policy.evaluate_at!r}")
        self.index = index
        self.policy = policy
        self.on_evaluation = on_evaluation
        self.riddle_id = ""
        self.tokens: list[str] = []
        self.clue_index = 0
        self.buzzed = False
        self.candidate = ""

    def _evaluate(self) -> list[AgentOutbound]:
        query = " ".join(self.tokens)
        try:
            hits = search(self.index, query, k=3)
        except ValueError:
            return []  # query normalized to empty
        bundle = make_context(self.index, hits)
        if self.on_evaluation is not None:
            self.on_evaluation(self.riddle_id, self.clue_index, bundle)
        heading = self.index.heading_paths[hits[0].passage_id]
        self.candidate = heading[-1] if heading else ""
        if not self.buzzed and bundle.confidence >= self.policy.threshold:
            self.buzzed = True
            return [BuzzRequest(confidence=bundle.confidence)]
        return []

    def handle(self, msg: AgentInbound) -> list[AgentOutbound]:
        if isinstance(msg, RiddleStart):
            self.riddle_id = msg.riddle_id
            self.tokens = []
            self.clue_index = 0
            self.buzzed = False
            self.candidate = ""
        elif isinstance(msg, Token):
            self.tokens.append(msg.text)
            self.clue_index = msg.clue_index
            if self.policy.evaluate_at == "every_token":
                return self._evaluate()
        elif isinstance(msg, ClueEnd):
            self.clue_index = msg.clue_index
            if self.policy.evaluate_at == "clue_end":
                return self._evaluate()
        elif isinstance(msg, BuzzGranted):
            if not self.candidate and self.tokens:
                self._evaluate()
            return [AnswerSubmission(text=self.candidate)]
        return []


def retrieval_agent(index: CorpusIndex, policy: BuzzPolicy) -> RetrievalAgent:
    return RetrievalAgent(index, policy)


# ---------------------------------------------------------------------------
# remote agent over NDJSON/TCP


class _NdjsonConnection:
    """Line-framed JSON over a socket, with timeout-bounded reads."""

    def __init__(self, sock: socket.socket):
        self.sock = sock
        self.buffer = b""

    def send(self, obj: dict) -> None:
        self.sock.sendall(json.dumps(obj).encode("utf-8") + b"\n")

    def recv(self, timeout_s: float) -> dict | None:
        """Next decodable JSON line, or None if none arrives in time.

        Malformed lines are logged and dropped. Raises ConnectionError on
        EOF.
        """
        deadline = None
        while True:
            nl = self.buffer.find(b"\n")
            if nl >= 0:
                line, self.buffer = self.buffer[:nl], self.buffer[nl + 1 :]
                if not line.strip():
                    continue
                try:
                    return json.loads(line.decode("utf-8"))
                except (json.JSONDecodeError, UnicodeDecodeError):
                    log.warning("dropping malformed wire line: %r", line[:80])
                    continue
            now = time.monotonic()
            if deadline is None:
                deadline = now + timeout_s
            remaining = deadline - now
            if remaining <= 0:
                return None
            ready, _, _ = select.select([self.sock], [], [], remaining)
            if not ready:
                return None
            chunk = self.sock.recv(4096)
            if not chunk:
                raise ConnectionError("remote closed the connection")
            self.buffer += chunk

    def close(self) -> None:
        try:
            self.sock.close()
        except OSError:
            pass


class RemoteAgent(Agent):
    """Bridges the wire protocol to an external answerer.

    Connects once per match (the successful connect is the health check).
    After each forwarded event the remote gets a short window
    (buzz_forward_ms) to send a buzz; after a grant it gets answer_ms to
    answer, else an empty answer is submitted on its behalf. A lost
    connection silences the agent for the rest of the match.
    """

    def __init__(self, endpoint: str, buzz_forward_ms: int = 25, answer_ms: int = 2000):
        host, _, port = endpoint.rpartition(":")
        if not host or not port.isdigit():
            raise ValueError(f"endpoint must be host:port, got {endpoint!r}")
        self.endpoint = endpoint
        self.buzz_forward_ms = buzz_forward_ms
        self.answer_ms = answer_ms
        try:
            sock = socket.create_connection((host, int(port)), timeout=5.0)
        except OSError as exc:
            raise ConnectionError(f"remote agent at {endpoint} unreachable: {exc}") from exc
        sock.settimeout(None)
        self.conn: _NdjsonConnection | None = _NdjsonConnection(sock)

    def _drop_connection(self, why: str) -> None:
        log.warning("remote agent %s going silent: %s", self.endpoint, why)
        if self.conn is not None:
            self.conn.close()
        self.conn = None

    def _collect(self, timeout_s: float, awaiting_answer: bool) -> list[AgentOutbound]:
        assert self.conn is not None
        out: list[AgentOutbound] = []
        remaining = timeout_s
        start = time.monotonic()
        while True:
            wire = self.conn.recv(remaining)
            if wire is None:
                return out
            msg = outbound_from_wire(wire)
            if isinstance(msg, AnswerSubmission) and not awaiting_answer:
                log.warning("remote %s sent an answer without a grant; dropped", self.endpoint)
            elif msg is not None:
                out.append(msg)
                if awaiting_answer and isinstance(msg, AnswerSubmission):
                    return out
                if not awaiting_answer and isinstance(msg, BuzzRequest):
                    return out
            remaining = timeout_s - (time.monotonic() - start)
            if remaining <= 0:
                return out

    def handle(self, msg: AgentInbound) -> list[AgentOutbound]:
        if self.conn is None:
            return []
        try:
            self.conn.send(inbound_to_wire(msg))
            if isinstance(msg, BuzzGranted):
                replies = self._collect(self.answer_ms / 1000, awaiting_answer=True)
                answers = [m for m in replies if isinstance(m, AnswerSubmission)]
                return [answers[0] if answers else AnswerSubmission(text="")]
            return self._collect(self.buzz_forward_ms / 1000, awaiting_answer=False)
        except (ConnectionError, OSError) as exc:
            self._drop_connection(str(exc))
            return []

    def close(self) -> None:
        if self.conn is not None:
            self.conn.close()
            self.conn = None


def remote_agent(endpoint: str, buzz_forward_ms: int = 25, answer_ms: int = 2000) -> RemoteAgent:
    return RemoteAgent(endpoint, buzz_forward_ms, answer_ms)
