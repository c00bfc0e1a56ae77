"""Riddle Arena: a deterministic buzzer-contest simulator and evaluation
harness for clue-based science riddles."""

from .agents import (
    Agent,
    AnswerSubmission,
    BuzzPolicy,
    BuzzRequest,
    OracleAgent,
    RemoteAgent,
    RetrievalAgent,
    oracle_agent,
    remote_agent,
    retrieval_agent,
)
from .bookparse import BookNode, BookParseError, Passage, parse_book, segment_passages
from .data import (
    DatasetError,
    DatasetSplit,
    HumanRecord,
    LedgerEntry,
    Riddle,
    Subject,
    YearSummary,
    ledger_summary,
    load_riddle_csv,
    split_dataset,
    write_riddle_csv,
)
from .driver import MatchDriver, run_match
from .engine import (
    AdjudicationResult,
    ContestResult,
    MatchConfig,
    MatchState,
    ReplayError,
    RiddleMatch,
    RiddleOutcome,
    TranscriptEvent,
    adjudicate,
    points_for_clue,
    read_transcript,
    replay_human,
    replay_transcript,
    result_from_transcript,
    write_transcript,
)
from .metrics import (
    EvalReport,
    MatchVerdict,
    WerResult,
    aggregate_report,
    exact_match,
    fuzzy_match,
    latency_stats,
    render_report_table,
    token_f1,
    word_error_rate,
)
from .normalize import normalize_answer, normalize_text
from .retrieval import ContextBundle, CorpusIndex, Retrieval, build_index, make_context, search

__version__ = "0.1.0"
