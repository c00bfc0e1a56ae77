"""Tour of the text normalization and answer-equivalence metrics.

Run: python3 demos/metrics_walkthrough.py
"""

from riddle_arena import (
    aggregate_report,
    fuzzy_match,
    latency_stats,
    normalize_answer,
    normalize_text,
    render_report_table,
    token_f1,
    word_error_rate,
)

# --- normalization -----------------------------------------------------
print("== normalization ==")
for raw in ["Who am I?", "  The X-Ray  ", "H2O at 100°C"]:
    print(f"  text   {raw!r:32} -> {normalize_text(raw)!r}")
for raw in ["The Polarization.", "a Wave", "an"]:
    print(f"  answer {raw!r:32} -> {normalize_answer(raw)!r}")

# --- matching ----------------------------------------------------------
print("\n== matching ==")
golds = ["polarization"]
for pred in ["Polarization", "the polarization", "polarisation", "plane polarization"]:
    verdict = fuzzy_match(pred, golds)
    print(
        f"  {pred!r:24} em={verdict.em!s:5} fm={verdict.fm!s:5} "
        f"best_f1={verdict.best_f1:.4f}"
    )
print(f"  token_f1('transverse wave', 'wave') = {token_f1('transverse wave', 'wave'):.4f}")

# --- word error rate ----------------------------------------------------
print("\n== word error rate ==")
ref = "the wave carries energy through the medium"
for hyp in [ref, "the wave carries power through the medium", "wave carries energy"]:
    r = word_error_rate(ref, hyp)
    print(f"  S={r.substitutions} I={r.insertions} D={r.deletions} wer={r.wer:.3f}  {hyp!r}")

# --- aggregation --------------------------------------------------------
print("\n== report aggregation ==")
verdicts = [fuzzy_match(p, golds) for p in ["polarization"] * 3 + ["plane polarization"] * 2 + ["energy"] * 5]
report = aggregate_report(verdicts, latencies=[0.8, 1.1, 0.9, 1.4, 1.0, 0.7, 1.2, 0.8, 1.3, 1.0])
print(f"  n={report.n} EM={report.em_pct}% FM={report.fm_pct}% mean latency {report.mean_latency_s:.2f}s")
print("\n" + render_report_table([("toy answerer", report)]))

print("\n== latency stats ==")
stats = latency_stats([0.8, 1.1, 0.9, 1.4, 1.0, 0.7, 1.2, 0.8, 1.3, 1.0])
print("  " + "  ".join(f"{k}={v:.2f}" for k, v in stats.items()))
