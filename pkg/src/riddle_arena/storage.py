"""Flat-file persistence: newline-delimited JSON under one data directory."""

from __future__ import annotations

import json
import os
from pathlib import Path

from .data import DatasetSplit, Riddle, load_riddle_csv, write_riddle_csv

ENV_DATA_DIR = "ARENA_DATA_DIR"
DEFAULT_DATA_DIR = "arena-data"


def resolve_data_dir(explicit: str | None = None) -> Path:
    """Explicit flag wins; the ARENA_DATA_DIR env var overrides the default."""
    if explicit:
        return Path(explicit)
    return Path(os.environ.get(ENV_DATA_DIR, DEFAULT_DATA_DIR))


class DataDir:
    """Paths and helpers for the datasets/, matches/, and reports/ stores."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.datasets = self.root / "datasets"
        self.matches = self.root / "matches"
        self.reports = self.root / "reports"
        for d in (self.datasets, self.matches, self.reports):
            d.mkdir(parents=True, exist_ok=True)

    # -- datasets ----------------------------------------------------------

    @property
    def riddles_csv(self) -> Path:
        return self.datasets / "riddles.csv"

    @property
    def split_json(self) -> Path:
        return self.datasets / "split.json"

    @property
    def index_json(self) -> Path:
        return self.datasets / "index.json"

    def save_riddles(self, riddles: list[Riddle]) -> Path:
        write_riddle_csv(riddles, self.riddles_csv)
        return self.riddles_csv

    def load_riddles(self) -> list[Riddle]:
        if not self.riddles_csv.exists():
            raise FileNotFoundError(f"no ingested dataset at {self.riddles_csv}; run `ingest` first")
        return load_riddle_csv(self.riddles_csv)

    def save_split(self, split: DatasetSplit) -> Path:
        self.split_json.write_text(split.to_json(), encoding="utf-8")
        return self.split_json

    def load_split(self) -> DatasetSplit:
        if not self.split_json.exists():
            raise FileNotFoundError(f"no split at {self.split_json}; run `split` first")
        return DatasetSplit.from_json(self.split_json.read_text(encoding="utf-8"))

    def split_riddles(self, name: str) -> list[Riddle]:
        """Riddles belonging to one split, in dataset order."""
        if name not in ("train", "test", "dev"):
            raise ValueError(f"unknown split {name!r}")
        split = self.load_split()
        wanted = set(getattr(split, name))
        return [r for r in self.load_riddles() if r.id in wanted]

    # -- matches -----------------------------------------------------------

    def match_transcript(self, match_id: str) -> Path:
        return self.matches / f"{match_id}.ndjson"

    def match_meta(self, match_id: str) -> Path:
        return self.matches / f"{match_id}.json"

    # -- reports -------------------------------------------------------------

    def job_records(self, job_id: str) -> Path:
        return self.reports / f"{job_id}.ndjson"

    def job_meta(self, job_id: str) -> Path:
        return self.reports / f"{job_id}.json"

    def write_json(self, path: Path, payload: dict) -> None:
        path.write_text(json.dumps(payload, indent=2), encoding="utf-8")

    def read_json(self, path: Path) -> dict:
        return json.loads(path.read_text(encoding="utf-8"))
