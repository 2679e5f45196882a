import pytest
from hypothesis import given, strategies as st

from stallings.errors import InvalidInput
from stallings.words import Word, ball_size, concat, invert, reduce, reduced_words, shortlex_less, sphere_size

from conftest import reduced_letters, words
from oracles import all_reduced, free_group_ball


def W(s, n=2):
    return Word.parse(s, n)


@pytest.mark.parametrize("raw,expected", [("aA", "1"), ("abBA", "1"), ("abAB", "abAB"), ("", "1"), ("1", "1")])
def test_reduce_examples(raw, expected):
    assert str(W(raw)) == expected


@pytest.mark.parametrize("u,v,expected", [("ab", "BA", "1"), ("ab", "a", "aba"), ("ab", "Bc", "ac")])
def test_concat_examples(u, v, expected):
    assert str(concat(W(u, 3), W(v, 3))) == expected


@pytest.mark.parametrize("w,expected", [("ab", "BA"), ("1", "1"), ("aBa", "AbA")])
def test_invert_examples(w, expected):
    assert str(invert(W(w))) == expected


@pytest.mark.parametrize("u,v", [("1", "a"), ("b", "aa"), ("a", "A"), ("A", "b"), ("ab", "aB")])
def test_shortlex_examples(u, v):
    assert shortlex_less(W(u), W(v))
    assert not shortlex_less(W(v), W(u))


def test_bad_input():
    with pytest.raises(InvalidInput):
        W("ac")
    with pytest.raises(InvalidInput):
        Word((1, -1), 2)
    with pytest.raises(InvalidInput):
        reduce([3], 2)
    with pytest.raises(InvalidInput):
        concat(W("a", 2), W("a", 3))
    with pytest.raises(InvalidInput):
        Word((), 0)


def test_reduced_words_enumeration_matches_oracle():
    ours = list(reduced_words(2, 4))
    assert sorted(ours) == sorted(all_reduced(2, 4))
    assert ours == sorted(ours, key=lambda t: Word(t, 2))
    for i in range(6):
        assert ball_size(2, i) == free_group_ball(2, i)
        assert ball_size(3, i) == free_group_ball(3, i)
    assert sphere_size(2, 3) == 36


def test_text_round_trip():
    for t in reduced_words(3, 3):
        w = Word(t, 3)
        assert Word.parse(str(w), 3) == w


@given(reduced_letters(3, 16))
def test_reduce_idempotent(t):
    w = reduce(t, 3)
    assert reduce(w.letters, 3) == w


@given(words(), words(), words())
def test_concat_associative_with_identity(u, v, w):
    e = Word.identity(2)
    assert (u * v) * w == u * (v * w)
    assert u * e == u == e * u
    assert len(u * v) <= len(u) + len(v)


@given(words())
def test_inverse(w):
    assert (w * ~w).is_identity() and (~w * w).is_identity()
    assert len(~w) == len(w)


@given(st.lists(words(max_size=5), min_size=1, max_size=12, unique=True))
def test_shortlex_is_strict_total_order(ws):
    for u in ws:
        assert not shortlex_less(u, u)
        for v in ws:
            if u != v:
                assert shortlex_less(u, v) != shortlex_less(v, u)
            for w in ws:
                if shortlex_less(u, v) and shortlex_less(v, w):
                    assert shortlex_less(u, w)
