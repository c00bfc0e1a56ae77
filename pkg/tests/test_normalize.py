import unicodedata

from hypothesis import given
from hypothesis import strategies as st

from riddle_arena.normalize import normalize_answer, normalize_text


def test_lowercase_and_punctuation():
    assert normalize_text("Who am I?") == "who am i"


def test_whitespace_fix():
    assert normalize_text("  wave \t propagation ") == "wave propagation"


def test_hyphen_becomes_space():
    assert normalize_text("X-ray") == "x ray"


def test_slash_becomes_space():
    assert normalize_text("AC/DC current") == "ac dc current"


def test_digits_preserved():
    assert normalize_text("H2O at 100°C") == "h2o at 100c"


def test_unicode_punctuation_removed():
    assert normalize_text("it’s a “wave” — really") == "its a wave really"


def test_answer_removes_articles():
    assert normalize_answer("The Polarization.") == "polarization"
    assert normalize_answer("a  Wave") == "wave"


def test_answer_can_become_empty():
    assert normalize_answer("an") == ""


def test_articles_only_removed_as_whole_words():
    assert normalize_answer("theta angle") == "theta angle"


def test_articles_kept_in_clue_text():
    assert normalize_text("the wave") == "the wave"


text_inputs = st.text(
    alphabet=st.characters(max_codepoint=0x2FFF),
    max_size=80,
)


@given(text_inputs)
def test_normalize_text_idempotent(s):
    once = normalize_text(s)
    assert normalize_text(once) == once


@given(text_inputs)
def test_normalized_invariants(s):
    out = normalize_text(s)
    assert out == out.strip()
    assert "  " not in out
    assert not any(c.isupper() for c in out)
    # punctuation = Unicode categories P* plus degree/prime symbols
    assert not any(unicodedata.category(c).startswith("P") for c in out)
    assert not any(c in "°′″" for c in out)


@given(text_inputs)
def test_answer_tokens_subset_of_text_tokens(s):
    assert set(normalize_answer(s).split()) <= set(normalize_text(s).split())
