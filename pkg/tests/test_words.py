from fractions import Fraction

from hypothesis import given, strategies as st

from tiospec import words as W

symbols = st.one_of(st.sampled_from(["a", "b", "c"]), st.fractions(0, 5, max_denominator=4))
raw_words = st.lists(symbols, max_size=8)


def test_canon_merges_and_drops_zero():
    assert W.word(1, 2, "a", 0, Fraction(1, 2)) == (3, "a", Fraction(1, 2))
    assert W.word(0) == ()


@given(raw_words)
def test_canon_is_idempotent_and_canonical(items):
    w = W.canon(items)
    assert W.canon(w) == w
    assert all(not (W.is_delay(a) and W.is_delay(b)) for a, b in zip(w, w[1:]))
    assert all(x > 0 for x in w if W.is_delay(x))


@given(raw_words, raw_words, raw_words)
def test_concat_is_associative(a, b, c):
    assert W.concat(W.concat(a, b), c) == W.concat(a, W.concat(b, c))


@given(raw_words, raw_words)
def test_duration_and_actions_are_additive(a, b):
    w = W.concat(a, b)
    assert W.duration(w) == W.duration(W.canon(a)) + W.duration(W.canon(b))
    assert W.actions(w) == W.actions(W.canon(a)) + W.actions(W.canon(b))


@given(raw_words)
def test_prefixes(items):
    w = W.canon(items)
    for p in W.prefixes(w):
        assert W.is_prefix(p, w)


def test_timed_prefix_cuts_last_delay():
    assert W.is_prefix(("a", 1), ("a", 3, "b"))
    assert not W.is_prefix(("a", 4), ("a", 3, "b"))
    assert not W.is_prefix(("b",), ("a",))


@given(raw_words)
def test_projection_removes_hidden_actions(items):
    w = W.canon(items)
    p = W.project(w, {"a"})
    assert set(W.actions(p)) <= {"a"} and W.duration(p) == W.duration(w)


@given(raw_words)
def test_json_and_text_round_trip(items):
    w = W.canon(items)
    assert W.from_json(W.to_json(w)) == w
    assert W.parse(W.to_text(w)) == w


def test_parse_text():
    assert W.parse("start, 4, finish") == ("start", 4, "finish")
    assert W.parse("ε") == ()
