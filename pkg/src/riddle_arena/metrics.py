"""Answer-equivalence metrics (EM, fuzzy match), word error rate, latency
statistics, and evaluation-report aggregation."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from .normalize import normalize_answer, normalize_text


@dataclass(frozen=True)
class MatchVerdict:
    """Outcome of comparing one prediction against the gold answers."""

    em: bool
    fm: bool
    best_f1: float

    def __post_init__(self):
        if self.em and not self.fm:
            raise ValueError("exact match implies fuzzy match")
        if self.em and self.best_f1 != 1.0:
            raise ValueError("exact match implies best_f1 = 1")
        if not 0.0 <= self.best_f1 <= 1.0:
            raise ValueError("best_f1 must be in [0, 1]")


@dataclass(frozen=True)
class WerResult:
    substitutions: int
    insertions: int
    deletions: int
    ref_words: int
    wer: float


def exact_match(pred: str, golds: Sequence[str]) -> bool:
    """True iff the normalized prediction equals some normalized gold.

    An empty normalized prediction never matches.
    """
    if not golds:
        raise ValueError("golds must be non-empty")
    p = normalize_answer(pred)
    if not p:
        return False
    return any(p == normalize_answer(g) for g in golds)


def token_f1(pred: str, gold: str) -> float:
    """Bag-of-tokens F1 between normalized answers; 0 if either is empty."""
    pred_tokens = normalize_answer(pred).split()
    gold_tokens = normalize_answer(gold).split()
    common = Counter(pred_tokens) & Counter(gold_tokens)
    num_same = sum(common.values())
    if num_same == 0:
        return 0.0
    precision = num_same / len(pred_tokens)
    recall = num_same / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def fuzzy_match(pred: str, golds: Sequence[str], threshold: float = 0.5) -> MatchVerdict:
    """Score a prediction against every gold answer.

    best_f1 is the max token F1 over golds; fm holds when it reaches the
    threshold; em is the strict normalized-equality check.
    """
    if not golds:
        raise ValueError("golds must be non-empty")
    if not 0 < threshold <= 1:
        raise ValueError("threshold must be in (0, 1]")
    best = max(token_f1(pred, g) for g in golds)
    return MatchVerdict(em=exact_match(pred, golds), fm=best >= threshold, best_f1=best)


def word_error_rate(ref: str, hyp: str) -> WerResult:
    """Minimal word-level edit distance from reference to hypothesis.

    Both sides are tokenized with normalize_text. Unit costs; the distance
    decomposes into substitutions, insertions, and deletions. WER can
    exceed 1 when the hypothesis is much longer than the reference.
    """
    ref_tokens = normalize_text(ref).split()
    hyp_tokens = normalize_text(hyp).split()
    if not ref_tokens:
        raise ValueError("reference normalizes to empty")

    n, m = len(ref_tokens), len(hyp_tokens)
    # dp[i][j] = edits turning ref[:i] into hyp[:j]
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dp[i][0] = i
    for j in range(1, m + 1):
        dp[0][j] = j
    for i in range(1, n + 1):
        ri = ref_tokens[i - 1]
        row, prev = dp[i], dp[i - 1]
        for j in range(1, m + 1):
            sub = prev[j - 1] + (ri != hyp_tokens[j - 1])
            row[j] = min(sub, prev[j] + 1, row[j - 1] + 1)

    subs = ins = dels = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and ref_tokens[i - 1] == hyp_tokens[j - 1] and dp[i][j] == dp[i - 1][j - 1]:
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and dp[i][j] == dp[i - 1][j - 1] + 1:
            subs += 1
            i, j = i - 1, j - 1
        elif i > 0 and dp[i][j] == dp[i - 1][j] + 1:
            dels += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    return WerResult(subs, ins, dels, n, (subs + ins + dels) / n)


def _pct(count: int, n: int) -> float:
    """Percentage rounded half-up to 2 decimals."""
    q = Decimal(count) * 100 / Decimal(n)
    return float(q.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass
class EvalReport:
    """Aggregate EM/FM percentages and mean latency over one evaluation run."""

    n: int
    em_pct: float
    fm_pct: float
    mean_latency_s: float
    per_subject: dict[str, "EvalReport"] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "em_pct": self.em_pct,
            "fm_pct": self.fm_pct,
            "mean_latency_s": self.mean_latency_s,
        }
        d["per_subject"] = {k: v.to_dict() for k, v in self.per_subject.items()}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        return cls(
            n=d["n"],
            em_pct=d["em_pct"],
            fm_pct=d["fm_pct"],
            mean_latency_s=d["mean_latency_s"],
            per_subject={k: cls.from_dict(v) for k, v in d.get("per_subject", {}).items()},
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def aggregate_report(
    verdicts: Sequence[MatchVerdict],
    latencies: Sequence[float] = (),
    subjects: Sequence[str] | None = None,
) -> EvalReport:
    """Fold per-riddle verdicts into an EvalReport.

    Order-free: any permutation of (verdict, latency, subject) triples
    yields the same report. When subjects are given they must align with
    verdicts and the report carries a per-subject breakdown.
    """
    if not verdicts:
        raise ValueError("verdicts must be non-empty")
    if subjects is not None and len(subjects) != len(verdicts):
        raise ValueError("subjects must align with verdicts")

    def _fold(vs: Sequence[MatchVerdict], ls: Sequence[float]) -> EvalReport:
        n = len(vs)
        mean_lat = sum(ls) / len(ls) if ls else 0.0
        return EvalReport(
            n=n,
            em_pct=_pct(sum(v.em for v in vs), n),
            fm_pct=_pct(sum(v.fm for v in vs), n),
            mean_latency_s=mean_lat,
        )

    report = _fold(verdicts, latencies)
    if subjects is not None:
        lat = list(latencies) if latencies else [0.0] * len(verdicts)
        for subj in sorted(set(subjects)):
            vs = [v for v, s in zip(verdicts, subjects) if s == subj]
            ls = [l for l, s in zip(lat, subjects) if s == subj]
            report.per_subject[subj] = _fold(vs, ls)
    return report


def latency_stats(samples: Sequence[float]) -> dict[str, float]:
    """Mean/min/max plus nearest-rank p50 and p95."""
    if not samples:
        raise ValueError("samples must be non-empty")
    srt = sorted(samples)
    n = len(srt)

    def nearest_rank(p: float) -> float:
        rank = max(1, math.ceil(p / 100 * n))
        return srt[rank - 1]

    return {
        "mean": sum(srt) / n,
        "min": srt[0],
        "max": srt[-1],
        "p50": nearest_rank(50),
        "p95": nearest_rank(95),
    }


def render_report_table(rows: Iterable[tuple[str, EvalReport]]) -> str:
    """Aligned plain-text table: model name, exact match %, fuzzy match %."""
    header = ("Model", "Exact Match", "Fuzzy Match")
    body = [(name, f"{r.em_pct:.2f}%", f"{r.fm_pct:.2f}%") for name, r in rows]
    widths = [max(len(col[i]) for col in [header, *body]) for i in range(3)]
    lines = []
    for row in [header, *body]:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines)
