import pytest

from riddle_arena.data import Riddle, Subject


def make_riddle(rid, subject, clues, answers, contest=1, year=2020):
    return Riddle(
        id=rid,
        subject=subject,
        contest_no=contest,
        year=year,
        clues=list(clues),
        gold_answers=list(answers),
    )


@pytest.fixture
def polarization_riddle():
    # same shape as the round's canonical physics riddle: clues narrow in,
    # a one-word answer
    return make_riddle(
        "phys-polar",
        Subject.PHYSICS,
        [
            "I am exhibited by some waves but never by others.",
            "I restrict oscillations to a single plane.",
            "I distinguish transverse waves from longitudinal ones.",
            "Sunglasses exploit me to cut glare from reflected light.",
            "A polaroid film demonstrates me for electromagnetic waves.",
        ],
        ["Polarization"],
    )


@pytest.fixture
def contest_riddles(polarization_riddle):
    return [
        polarization_riddle,
        make_riddle(
            "bio-osmosis",
            Subject.BIOLOGY,
            [
                "I am a passive process needing no energy input.",
                "I move solvent across a selectively permeable membrane.",
                "I make red blood cells swell in distilled water.",
            ],
            ["Osmosis"],
        ),
        make_riddle(
            "chem-catalyst",
            Subject.CHEMISTRY,
            [
                "I speed things up without being used up.",
                "I lower the activation energy of a reaction.",
                "Enzymes are my biological counterparts.",
            ],
            ["Catalyst", "a catalyst"],
        ),
        make_riddle(
            "math-prime",
            Subject.MATHEMATICS,
            [
                "I am a natural number greater than one.",
                "My only divisors are one and myself.",
                "Two is the smallest and only even one of me.",
            ],
            ["Prime number", "prime"],
        ),
    ]
