"""Riddle dataset loading, validation, splitting, and ledger summaries."""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterable, Sequence, TextIO, Union

log = logging.getLogger(__name__)

MAX_CLUES = 9
MAX_ALT_ANSWERS = 4

CLUE_COLUMNS = [f"Clue {i}" for i in range(1, MAX_CLUES + 1)]
ALT_ANSWER_COLUMNS = [f"Answer {i}" for i in range(1, MAX_ALT_ANSWERS + 1)]


class DatasetError(ValueError):
    """Raised for malformed riddle CSV files or invalid rows."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class Subject(enum.Enum):
    BIOLOGY = "Biology"
    CHEMISTRY = "Chemistry"
    PHYSICS = "Physics"
    MATHEMATICS = "Mathematics"

    @classmethod
    def parse(cls, s: str) -> "Subject":
        key = s.strip().lower()
        if key in ("math", "maths"):
            key = "mathematics"
        for subj in cls:
            if subj.value.lower() == key:
                return subj
        raise ValueError(f"unknown subject: {s!r}")

    def __str__(self) -> str:
        return self.value


@dataclass
class Riddle:
    """One riddle: an ordered clue sequence plus its gold answers.

    gold_answers holds the primary answer first, then any alternatives.
    """

    id: str
    subject: Subject
    contest_no: int
    year: int
    clues: list[str]
    gold_answers: list[str]

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("riddle id must be non-empty")
        if not 1 <= len(self.clues) <= MAX_CLUES:
            raise ValueError(f"riddle {self.id}: expected 1..{MAX_CLUES} clues, got {len(self.clues)}")
        if any(not c.strip() for c in self.clues):
            raise ValueError(f"riddle {self.id}: blank clue")
        if not self.gold_answers or any(not a.strip() for a in self.gold_answers):
            raise ValueError(f"riddle {self.id}: gold answers must be non-empty")
        if self.contest_no < 1:
            raise ValueError(f"riddle {self.id}: contest_no must be positive")


@dataclass
class DatasetSplit:
    """Disjoint train/test/dev id lists plus the seed that produced them."""

    seed: int
    train: list[str]
    test: list[str]
    dev: list[str]

    def to_dict(self) -> dict:
        return {"seed": self.seed, "train": self.train, "test": self.test, "dev": self.dev}

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetSplit":
        return cls(seed=d["seed"], train=list(d["train"]), test=list(d["test"]), dev=list(d["dev"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "DatasetSplit":
        return cls.from_dict(json.loads(s))


@dataclass
class HumanRecord:
    """Which team (if any) answered a recorded riddle, and on which clue."""

    riddle_id: str
    winning_team: str | None = None
    answered_on_clue: int | None = None

    def __post_init__(self) -> None:
        if (self.winning_team is None) != (self.answered_on_clue is None):
            raise ValueError("winning_team and answered_on_clue must be present together")
        if self.answered_on_clue is not None and self.answered_on_clue < 1:
            raise ValueError("answered_on_clue must be >= 1")


@dataclass
class LedgerEntry:
    """One historical contest: schools, final marks, and video status."""

    year: int
    contest_no: int
    schools: list[str]
    final_scores: list[int]
    video_complete: bool
    riddle_count: int

    def __post_init__(self) -> None:
        if len(self.schools) != len(self.final_scores):
            raise ValueError("schools and final_scores must align")
        if self.riddle_count < 0:
            raise ValueError("riddle_count must be non-negative")


@dataclass(frozen=True)
class YearSummary:
    contests: int
    complete_videos: int
    riddles: int


Source = Union[str, Path, BinaryIO, TextIO]


def _open_text(source: Source) -> TextIO:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8", newline="")


def load_riddle_csv(source: Source, default_subject: Subject | None = None) -> list[Riddle]:
    """Parse a riddle CSV (UTF-8, RFC 4180 quoting).

    The header must contain "Clue 1" and "Answer". Clues are read as the
    contiguous run of non-blank cells from "Clue 1" upward; cells after
    the first blank clue column are ignored with a warning. Gold answers
    are "Answer" followed by any non-blank "Answer 1".."Answer 4".

    When the Subject column is missing or blank, rows fall back to
    default_subject, or to Physics with a warning when no default is
    given. Missing Contest/Year columns default to 1 and 2020.
    """
    fp = _open_text(source)
    reader = csv.reader(fp, strict=True)
    try:
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError("empty file: missing header row")

        columns = {name.strip(): idx for idx, name in enumerate(header)}
        for required in ("Clue 1", "Answer"):
            if required not in columns:
                raise DatasetError(f'missing required column "{required}"')

        def cell(row: list[str], name: str) -> str:
            idx = columns.get(name)
            if idx is None or idx >= len(row):
                return ""
            return row[idx].strip()

        warned_subject = False
        riddles: list[Riddle] = []
        seen_ids: set[str] = set()
        for line, row in enumerate(reader, start=2):
            if not any(c.strip() for c in row):
                continue

            clues: list[str] = []
            for name in CLUE_COLUMNS:
                value = cell(row, name)
                if not value:
                    break
                clues.append(value)
            trailing = [
                name for name in CLUE_COLUMNS[len(clues) + 1 :] if cell(row, name)
            ]
            if trailing:
                log.warning("line %d: ignoring clue cells after a blank column: %s", line, trailing)
            if not clues:
                raise DatasetError("all clue cells are blank", line)
            if len(clues) < 3:
                log.warning("line %d: riddle has only %d clue(s)", line, len(clues))

            answer = cell(row, "Answer")
            if not answer:
                raise DatasetError('missing "Answer" value', line)
            golds = [answer] + [cell(row, name) for name in ALT_ANSWER_COLUMNS if cell(row, name)]

            raw_subject = cell(row, "Subject")
            if raw_subject:
                try:
                    subject = Subject.parse(raw_subject)
                except ValueError as exc:
                    raise DatasetError(str(exc), line)
            elif default_subject is not None:
                subject = default_subject
            else:
                if not warned_subject:
                    log.warning("Subject column missing or blank; defaulting to Physics")
                    warned_subject = True
                subject = Subject.PHYSICS

            rid = cell(row, "Id") or f"r{line - 1:04d}"
            if rid in seen_ids:
                raise DatasetError(f"duplicate riddle id {rid!r}", line)
            seen_ids.add(rid)

            try:
                riddles.append(
                    Riddle(
                        id=rid,
                        subject=subject,
                        contest_no=int(cell(row, "Contest") or 1),
                        year=int(cell(row, "Year") or 2020),
                        clues=clues,
                        gold_answers=golds,
                    )
                )
            except ValueError as exc:
                raise DatasetError(str(exc), line)
        return riddles
    except csv.Error as exc:
        raise DatasetError(f"malformed CSV: {exc}")
    finally:
        if isinstance(source, (str, Path)):
            fp.close()


def write_riddle_csv(riddles: Sequence[Riddle], dest: Union[str, Path, TextIO]) -> None:
    """Write riddles in the same column schema load_riddle_csv reads."""
    own = isinstance(dest, (str, Path))
    fp = open(dest, "w", encoding="utf-8", newline="") if own else dest
    try:
        writer = csv.writer(fp)
        writer.writerow(["Id", "Subject", "Contest", "Year", *CLUE_COLUMNS, "Answer", *ALT_ANSWER_COLUMNS])
        for r in riddles:
            clues = r.clues + [""] * (MAX_CLUES - len(r.clues))
            alts = r.gold_answers[1:]
            alts = alts + [""] * (MAX_ALT_ANSWERS - len(alts))
            writer.writerow([r.id, r.subject.value, r.contest_no, r.year, *clues, r.gold_answers[0], *alts])
    finally:
        if own:
            fp.close()


def split_dataset(riddles: Sequence[Riddle], seed: int) -> DatasetSplit:
    """Seeded 60:20:20 shuffle-split over riddle ids.

    Train gets floor(0.6 * n); the remainder divides as evenly as
    possible with test taking the extra element when it is odd.
    Deterministic for a fixed (riddles, seed) pair.
    """
    if not riddles:
        raise ValueError("cannot split an empty dataset")
    ids = [r.id for r in riddles]
    random.Random(seed).shuffle(ids)
    n = len(ids)
    n_train = 6 * n // 10
    rest = n - n_train
    n_test = rest - rest // 2
    return DatasetSplit(
        seed=seed,
        train=ids[:n_train],
        test=ids[n_train : n_train + n_test],
        dev=ids[n_train + n_test :],
    )


def ledger_summary(entries: Iterable[LedgerEntry]) -> dict[int, YearSummary]:
    """Per-year contest count, complete-video count, and riddle total."""
    contests: dict[int, int] = {}
    videos: dict[int, int] = {}
    riddles: dict[int, int] = {}
    for e in entries:
        contests[e.year] = contests.get(e.year, 0) + 1
        videos[e.year] = videos.get(e.year, 0) + (1 if e.video_complete else 0)
        riddles[e.year] = riddles.get(e.year, 0) + e.riddle_count
    return {
        year: YearSummary(contests[year], videos[year], riddles[year])
        for year in sorted(contests)
    }
