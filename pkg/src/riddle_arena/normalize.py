"""Text normalization applied to clues and answers before any matching.

Clue text is lowercased, stripped of punctuation, and single-spaced.
Answers additionally drop the articles "the", "a", "an".
"""

import unicodedata

# Hyphens and slashes become spaces so "x-ray" matches "x ray".
_SLASHES = frozenset("/⁄")
# Symbols stripped alongside Unicode punctuation (category P*): degree
# sign and prime marks, which show up in physics answers.
_EXTRA_PUNCT = frozenset("°′″")
_ARTICLES = frozenset({"the", "a", "an"})


def _lowered(s: str):
    # str.lower() leaves uncased uppercase letters (double-struck, script,
    # roman numerals) alone; map those through NFKC so none survive.
    for ch in s.lower():
        if not ch.isupper():
            yield ch
            continue
        for sub in unicodedata.normalize("NFKC", ch).lower():
            if not sub.isupper():
                yield sub


def normalize_text(s: str) -> str:
    """Lowercase, remove punctuation, and fix whitespace.

    Digits are preserved. Dashes and slashes turn into spaces; all other
    punctuation is deleted in place. Runs of whitespace collapse to one
    space and the result is trimmed.
    """
    out = []
    for ch in _lowered(s):
        cat = unicodedata.category(ch)
        if cat == "Pd" or ch in _SLASHES:
            out.append(" ")
        elif cat.startswith("P") or ch in _EXTRA_PUNCT:
            continue
        else:
            out.append(ch)
    return " ".join("".join(out).split())


def normalize_answer(s: str) -> str:
    """normalize_text plus whole-word removal of "the", "a", "an".

    May produce the empty string (e.g. for the input "an"); matching
    layers treat an empty normalized answer as never matching.
    """
    return " ".join(t for t in normalize_text(s).split() if t not in _ARTICLES)
