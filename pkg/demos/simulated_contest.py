"""A full four-riddle contest on the virtual clock, then a replay check.

Three teams: an oracle that knows the answers but waits for clue 2, a
retrieval baseline reading from a tiny index, and a reckless team that
buzzes first with a wrong answer and gets locked out.

Run: python3 demos/simulated_contest.py
"""

from riddle_arena import (
    BuzzPolicy,
    MatchConfig,
    OracleAgent,
    RetrievalAgent,
    Riddle,
    Subject,
    build_index,
    replay_transcript,
    run_match,
    segment_passages,
    parse_book,
)
from riddle_arena.agents import Agent, AnswerSubmission, BuzzGranted, BuzzRequest, ClueEnd


def riddle(rid, subject, clues, answer):
    return Riddle(id=rid, subject=subject, contest_no=1, year=2020, clues=clues, gold_answers=[answer])


RIDDLES = [
    riddle(
        "phys-1",
        Subject.PHYSICS,
        [
            "I am a property some waves have and others never can.",
            "I confine oscillations to a single plane.",
            "A polaroid film makes me visible.",
        ],
        "Polarization",
    ),
    riddle(
        "bio-1",
        Subject.BIOLOGY,
        [
            "I move solvent, not solute.",
            "I act across selectively permeable membranes.",
            "I burst red cells dropped into pure water.",
        ],
        "Osmosis",
    ),
    riddle(
        "chem-1",
        Subject.CHEMISTRY,
        [
            "I make reactions faster.",
            "I am never used up.",
            "Enzymes do my job in cells.",
        ],
        "Catalyst",
    ),
    riddle(
        "math-1",
        Subject.MATHEMATICS,
        [
            "I am bigger than one.",
            "Only one and myself divide me.",
            "Two is my smallest member.",
        ],
        "Prime number",
    ),
]


class RecklessTeam(Agent):
    """Buzzes at the first clue end with the same wrong answer every time."""

    def handle(self, msg):
        if isinstance(msg, ClueEnd) and msg.clue_index == 1:
            return [BuzzRequest(confidence=0.99)]
        if isinstance(msg, BuzzGranted):
            return [AnswerSubmission("gravity")]
        return []


book = parse_book(
    "<h1>Primer</h1>"
    "<h2>Polarization</h2><p>polarization plane transverse polaroid film wave</p>"
    "<h2>Osmosis</h2><p>osmosis membrane solvent water cell</p>"
    "<h2>Catalysts</h2><p>catalyst reaction activation energy enzyme</p>"
    "<h2>Primes</h2><p>prime number divisor even two</p>",
    "primer",
)
index = build_index(segment_passages(book))

config = MatchConfig(team_ids=("oracle", "reader", "reckless"), words_per_second=2.5)
agents = {
    "oracle": OracleAgent(2, {r.id: r.gold_answers[0] for r in RIDDLES}),
    "reader": RetrievalAgent(index, BuzzPolicy(threshold=0.5)),
    "reckless": RecklessTeam(),
}

result, events = run_match(config, RIDDLES, agents)

print(f"transcript: {len(events)} events; excerpt:")
for ev in events:
    if ev.kind in ("RiddleStart", "Buzz", "AnswerGiven", "Verdict", "RiddleEnd", "ContestEnd"):
        print(f"  {ev.t_ms:6d}ms {ev.kind:12} {ev.data}")

print("\nfinal scores:")
for team, points in sorted(result.scores.items(), key=lambda kv: -kv[1]):
    print(f"  {team}: {points}")

replayed, _ = replay_transcript(config, RIDDLES, events)
print(f"\nreplay reproduces the result: {replayed == result}")
