
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topocycles.words import (
    AscRay,
    ChordRay,
    DescRay,
    Distinct,
    EquivalentUpTo,
    Letter,
    NotReduced,
    ReducedUpTo,
    Single,
    SymbolicWord,
    all_reductions,
    cancellation_split,
    equivalent,
    fig1_word,
    format_word,
    inverse,
    inverse_system_element,
    is_permanent,
    is_reduced,
    is_reduced_symbolic,
    letter_use_bound,
    multiply,
    n_inv,
    n_plus,
    N_word,
    oracle_deleted_positions,
    parse_symbolic,
    parse_word,
    permanent_positions,
    reduce,
    replay_reduction,
    restrict,
    restrict_finite,
    rho_word,
    subdivide_k,
)

letters = st.builds(Letter, st.integers(0, 2), st.booleans())
word_st = st.lists(letters, max_size=10).map(tuple)


def w(text):
    return parse_word(text)


def test_reduce_examples():
    assert reduce(w("+1 -1 +1")) == w("+1")
    assert reduce(()) == ()
    x = w("+0 +2 -1 +2")
    assert reduce(x + inverse(x)) == ()


def test_all_reductions_examples():
    assert sorted(all_reductions(w("+1 -1"))) == [(), ((0, 1),)]
    assert all_reductions(w("+0 +1")) == [()]
    deleted = {frozenset(p for pair in red for p in pair) for red in all_reductions(w("+1 -1 +1"))}
    assert deleted == {frozenset(), frozenset({0, 1}), frozenset({1, 2})}


def test_permanence_examples():
    assert permanent_positions(w("+0 +1 -0")) == [True, True, True]
    assert permanent_positions(w("+1 -1")) == [False, False]
    # every position is deletable, yet the word does not reduce to empty
    assert permanent_positions(w("+1 -1 +1")) == [False, False, False]
    assert not is_permanent(w("+1 -1 +1"), 0)


@settings(max_examples=300, deadline=None)
@given(word_st)
def test_reduce_properties(x):
    r = reduce(x)
    assert reduce(r) == r and is_reduced(r) and len(r) <= len(x)
    assert permanent_positions(x) == [s not in oracle_deleted_positions(x) for s in range(len(x))]
    assert all(permanent_positions(r))


@settings(max_examples=200, deadline=None)
@given(word_st, st.sets(st.integers(0, 2)))
def test_restriction_coherence(x, I):
    for red in all_reductions(x)[:20]:
        partial = replay_reduction(x, red)
        assert reduce(restrict_finite(partial, I)) == reduce(restrict_finite(x, I))


@settings(max_examples=200, deadline=None)
@given(word_st, word_st, word_st)
def test_group_laws(a, b, c):
    a, b, c = reduce(a), reduce(b), reduce(c)
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
    assert multiply(a, ()) == a and multiply(a, inverse(a)) == ()


def test_symbolic_restrictions():
    assert restrict(rho_word, {0, 1}) == w("+0 +1 -0 -1")
    for n in range(6):
        ups = " ".join(f"+{i}" for i in range(n + 1))
        downs = " ".join(f"-{i}" for i in range(n, -1, -1))
        assert restrict(fig1_word, range(n + 1)) == w(f"{ups} {downs}")
    assert restrict(rho_word, ()) == ()


def test_equivalent():
    assert equivalent(fig1_word, (), 20) == EquivalentUpTo(20)
    assert equivalent(rho_word, rho_word, 7) == EquivalentUpTo(7)
    # the first prefix set that separates the doubled ray word from the empty word
    assert equivalent(rho_word, (), 20) == Distinct(1, w("+0 +1 -0 -1"), ())


def test_is_reduced_symbolic():
    assert is_reduced_symbolic(rho_word, 12) == ReducedUpTo(12)
    v = is_reduced_symbolic(fig1_word, 5)
    assert isinstance(v, NotReduced) and v.depth == 5
    single = SymbolicWord.from_finite(w("+3"))
    assert is_reduced_symbolic(single, 9) == ReducedUpTo(9)


def test_cancellation_split_examples():
    assert cancellation_split(w("+1 +2"), w("-2 +3")) == (w("+1"), w("+2"), w("+3"))
    x = w("+0 -1 +2")
    assert cancellation_split(x, inverse(x)) == ((), x, ())
    assert cancellation_split(w("+0"), w("+1")) == (w("+0"), (), w("+1"))
    with pytest.raises(ValueError):
        cancellation_split(w("+0 -0"), ())


def test_inverse_system_and_bounds():
    assert inverse_system_element(fig1_word, 6) == [()] * 7
    seq = inverse_system_element(rho_word, 6)
    assert all(len(a) < len(b) for a, b in zip(seq[1:], seq[2:]))
    assert set(letter_use_bound(rho_word, 6).values()) == {1}
    x = SymbolicWord.from_finite(w("+0 +1 +0 +1"))
    assert set(letter_use_bound(x, 3).values()) == {2}
    assert letter_use_bound(SymbolicWord(ChordRay()), 3) == {}


def test_interval_counts():
    for k in range(8):
        assert n_plus(rho_word, k) == 1
        assert n_inv(rho_word, k) == 1 == N_word(rho_word, k)
        assert n_inv(SymbolicWord.from_finite(w("+0 +1 +2 -1")), k) == 0
    # the folded word is its own inverse, so the signed count vanishes
    assert n_plus(fig1_word, 0) == 1
    with pytest.warns(UserWarning):
        assert N_word(fig1_word, 0) == 0


def test_interval_starting_in_singles():
    # +0 +1 then the ray from chord 2 on is one interval for k = 0 and 1
    x = SymbolicWord(ChordRay(), (Single(Letter(0)), Single(Letter(1)), AscRay(2, True)))
    assert [n_plus(x, k) for k in range(4)] == [1, 1, 1, 1]
    y = SymbolicWord(ChordRay(), (Single(Letter(1)), AscRay(3, True)))
    assert [n_plus(y, k) for k in range(5)] == [0, 0, 0, 1, 1]


def test_subdivide_k():
    ray = ChordRay()
    assert subdivide_k(SymbolicWord(ray, (AscRay(0, True), Single(Letter(4, False))))) == 5
    assert subdivide_k(SymbolicWord(ray, (DescRay(2, True),))) == 3
    assert subdivide_k(SymbolicWord(ray, (AscRay(1, True),))) == 0
    assert subdivide_k(SymbolicWord(ray)) == 0


def test_symbolic_text_round_trip():
    x = SymbolicWord(ChordRay(1, 2, "+"), (AscRay(0, True), Single(Letter(3, False)), DescRay(2, False)))
    assert parse_symbolic(x.to_text()) == x
    assert format_word(w("+0 -12")) == "+0 -12"
    with pytest.raises(ValueError):
        parse_word("0")
