import pytest

from riddle_arena.agents import Agent, AnswerSubmission, BuzzGranted, BuzzRequest, ClueEnd, RiddleStart, Token
from riddle_arena.evalrun import (
    build_report,
    eval_riddle_batch,
    eval_riddle_live,
    read_records,
    run_eval,
    write_records,
)


class FixedAnswerer(Agent):
    """Answers from a riddle_id -> text table; buzzes at the first clue end."""

    def __init__(self, table):
        self.table = table
        self.current = None
        self.saw_full_text = None

    def handle(self, msg):
        if isinstance(msg, RiddleStart):
            self.current = msg.riddle_id
        elif isinstance(msg, Token):
            self.saw_full_text = msg.text
        elif isinstance(msg, ClueEnd):
            return [BuzzRequest(confidence=1.0)]
        elif isinstance(msg, BuzzGranted):
            return [AnswerSubmission(self.table.get(self.current, ""))]
        return []


def test_batch_presents_concatenated_clues(contest_riddles):
    riddle = contest_riddles[0]
    agent = FixedAnswerer({riddle.id: riddle.gold_answers[0]})
    record = eval_riddle_batch(riddle, agent)
    assert agent.saw_full_text == " ".join(riddle.clues)
    assert record.em and record.fm
    assert record.subject == "Physics"
    assert record.latency_s >= 0


def test_batch_empty_answer_scores_zero(contest_riddles):
    riddle = contest_riddles[0]
    record = eval_riddle_batch(riddle, Agent())
    assert record.answer == ""
    assert not record.em and not record.fm


def test_live_mode_latency_is_virtual(contest_riddles):
    riddle = contest_riddles[0]
    agent = FixedAnswerer({riddle.id: riddle.gold_answers[0]})
    record = eval_riddle_live(riddle, agent)
    assert record.em
    # buzzed at clue 1's end: latency = clue-1 word count x 400 ms
    expected = len(riddle.clues[0].split()) * 0.4
    assert record.latency_s == pytest.approx(expected)


def test_run_eval_preserves_dataset_order(contest_riddles):
    table = {r.id: r.gold_answers[0] for r in contest_riddles}
    records = run_eval(contest_riddles, FixedAnswerer(table), mode="batch")
    assert [r.riddle_id for r in records] == [r.id for r in contest_riddles]


def test_run_eval_rejects_unknown_mode(contest_riddles):
    with pytest.raises(ValueError):
        run_eval(contest_riddles, Agent(), mode="offline")


def test_report_from_mixed_records(contest_riddles):
    table = {r.id: r.gold_answers[0] for r in contest_riddles}
    table[contest_riddles[0].id] = "wrong"
    records = run_eval(contest_riddles, FixedAnswerer(table), mode="batch")
    report = build_report(records)
    assert report.n == 4
    assert report.em_pct == 75.0
    assert set(report.per_subject) == {"Physics", "Biology", "Chemistry", "Mathematics"}


def test_records_round_trip(contest_riddles, tmp_path):
    table = {r.id: r.gold_answers[0] for r in contest_riddles}
    records = run_eval(contest_riddles, FixedAnswerer(table), mode="batch")
    path = tmp_path / "records.ndjson"
    write_records(records, path)
    again = read_records(path)
    assert again == records
    assert build_report(again) == build_report(records)
