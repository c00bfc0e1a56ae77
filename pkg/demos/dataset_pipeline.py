"""Dataset loading, seeded splitting, and contest-ledger summaries.

Run: python3 demos/dataset_pipeline.py
"""

import io

from riddle_arena import LedgerEntry, ledger_summary, load_riddle_csv, split_dataset

CSV = """\
Clue 1,Clue 2,Clue 3,Answer,Answer 1,Subject,Contest,Year
I speed up reactions.,I am not consumed.,Enzymes are my biological kin.,Catalyst,a catalyst,Chemistry,12,2020
I am a passive transport process.,I move water across membranes.,I swell cells in pure water.,Osmosis,,Biology,12,2020
My only divisors are one and myself.,I am greater than one.,Two is my only even member.,Prime number,prime,Mathematics,12,2020
I restrict wave oscillation to a plane.,Polaroid film shows me off.,I need transverse waves.,Polarization,,Physics,12,2020
"""

riddles = load_riddle_csv(io.BytesIO(CSV.encode("utf-8")))
print(f"loaded {len(riddles)} riddles")
for r in riddles:
    print(f"  {r.id}: {r.subject} / {len(r.clues)} clues / answers {r.gold_answers}")

split = split_dataset(riddles, seed=42)
print(f"\nseeded split (seed={split.seed}):")
print(f"  train={split.train}  test={split.test}  dev={split.dev}")

# a bigger synthetic pool shows the 60:20:20 ratio
big = load_riddle_csv(
    io.BytesIO(
        (
            "Clue 1,Answer,Subject\n"
            + "\n".join(f"clue number {i},answer {i},Physics" for i in range(1144))
        ).encode("utf-8")
    )
)
big_split = split_dataset(big, seed=0)
print(f"\n1144 riddles -> train={len(big_split.train)} test={len(big_split.test)} dev={len(big_split.dev)}")

# ledger bookkeeping: one complete season plus one partial one
entries = [
    LedgerEntry(2020, i + 1, ["North", "South", "East"], [35, 28, 22], True, 4)
    for i in range(40)
]
entries += [
    LedgerEntry(2022, i + 1, ["North", "South", "East"], [31, 30, 18], i < 68, 4 if i < 68 else 0)
    for i in range(71)
]
print("\nledger summary:")
for year, summary in ledger_summary(entries).items():
    print(
        f"  {year}: {summary.contests} contests, {summary.complete_videos} complete videos, "
        f"{summary.riddles} riddles"
    )
