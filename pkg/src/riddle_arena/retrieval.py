"""Lexical passage retrieval: TF-IDF vectors, cosine top-k search, and
mean-confidence context bundles."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO, Union

from .bookparse import Passage
from .normalize import normalize_text


@dataclass(frozen=True)
class Retrieval:
    passage_id: str
    score: float


@dataclass
class ContextBundle:
    """Concatenated retrieved passages plus their mean similarity score."""

    context_text: str
    confidence: float
    retrievals: list[Retrieval]


@dataclass
class CorpusIndex:
    """Immutable after build; safe to share across concurrent searchers."""

    vocabulary: dict[str, int]  # term -> dimension
    idf: dict[str, float]
    vectors: dict[str, dict[str, float]]  # passage_id -> unit TF-IDF vector
    passage_count: int
    texts: dict[str, str]
    heading_paths: dict[str, list[str]]

    def to_dict(self) -> dict:
        return {
            "vocabulary": self.vocabulary,
            "idf": self.idf,
            "vectors": self.vectors,
            "passage_count": self.passage_count,
            "passages": {
                pid: {"text": self.texts[pid], "heading_path": self.heading_paths[pid]}
                for pid in self.vectors
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CorpusIndex":
        meta = d["passages"]
        return cls(
            vocabulary=dict(d["vocabulary"]),
            idf=dict(d["idf"]),
            vectors={pid: dict(vec) for pid, vec in d["vectors"].items()},
            passage_count=d["passage_count"],
            texts={pid: m["text"] for pid, m in meta.items()},
            heading_paths={pid: list(m["heading_path"]) for pid, m in meta.items()},
        )

    def save(self, dest: Union[str, Path, TextIO]) -> None:
        own = isinstance(dest, (str, Path))
        fp = open(dest, "w", encoding="utf-8") if own else dest
        try:
            json.dump(self.to_dict(), fp)
        finally:
            if own:
                fp.close()

    @classmethod
    def load(cls, source: Union[str, Path, TextIO]) -> "CorpusIndex":
        own = isinstance(source, (str, Path))
        fp = open(source, "r", encoding="utf-8") if own else source
        try:
            return cls.from_dict(json.load(fp))
        finally:
            if own:
                fp.close()


def _tokenize(text: str) -> list[str]:
    return normalize_text(text).split()


def build_index(passages: Sequence[Passage]) -> CorpusIndex:
    """Index passages as unit-normalized TF-IDF vectors.

    TF is the raw in-passage count; idf(t) = ln(1 + N/df(t)), strictly
    positive so every shared term contributes to similarity.
    """
    if not passages:
        raise ValueError("cannot index an empty corpus")
    ids = [p.id for p in passages]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate passage ids")

    token_lists = {p.id: _tokenize(p.text) for p in passages}
    for pid, tokens in token_lists.items():
        if not tokens:
            raise ValueError(f"passage {pid} normalizes to empty text")

    n = len(passages)
    df: Counter[str] = Counter()
    for tokens in token_lists.values():
        df.update(set(tokens))

    vocabulary = {term: dim for dim, term in enumerate(sorted(df))}
    idf = {term: math.log(1 + n / df[term]) for term in vocabulary}

    vectors: dict[str, dict[str, float]] = {}
    for pid, tokens in token_lists.items():
        tf = Counter(tokens)
        vec = {term: count * idf[term] for term, count in tf.items()}
        norm = math.sqrt(sum(w * w for w in vec.values()))
        vectors[pid] = {term: w / norm for term, w in vec.items()}

    return CorpusIndex(
        vocabulary=vocabulary,
        idf=idf,
        vectors=vectors,
        passage_count=n,
        texts={p.id: p.text for p in passages},
        heading_paths={p.id: list(p.heading_path) for p in passages},
    )


def search(index: CorpusIndex, query: str, k: int = 3) -> list[Retrieval]:
    """Top-k passages by cosine similarity, descending.

    Ties break by ascending passage id; fewer than k results are returned
    when the corpus is smaller than k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    tokens = _tokenize(query)
    if not tokens:
        raise ValueError("query normalizes to empty")

    tf = Counter(t for t in tokens if t in index.idf)
    qvec = {term: count * index.idf[term] for term, count in tf.items()}
    qnorm = math.sqrt(sum(w * w for w in qvec.values()))
    if qnorm > 0:
        qvec = {term: w / qnorm for term, w in qvec.items()}

    scored = []
    for pid, vec in index.vectors.items():
        dot = sum(w * vec.get(term, 0.0) for term, w in qvec.items())
        scored.append(Retrieval(pid, min(1.0, max(0.0, dot))))
    scored.sort(key=lambda r: (-r.score, r.passage_id))
    return scored[:k]


def make_context(index: CorpusIndex, retrievals: Sequence[Retrieval]) -> ContextBundle:
    """Join retrieved passage texts (retrieval order, one newline between)
    and average their scores into an overall confidence."""
    if not retrievals:
        raise ValueError("retrievals must be non-empty")
    for r in retrievals:
        if r.passage_id not in index.texts:
            raise KeyError(f"unknown passage id {r.passage_id!r}")
    return ContextBundle(
        context_text="\n".join(index.texts[r.passage_id] for r in retrievals),
        confidence=sum(r.score for r in retrievals) / len(retrievals),
        retrievals=list(retrievals),
    )
