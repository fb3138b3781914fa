from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from hendo.coxeter import CapExceeded, build_system

from oracles import brute_double_cosets, length, subword_bruhat

TAGS = ["A1", "A2", "A3", "B2", "B3", "G2", "2F4", "SU4", "SU5"]
ORDERS = {"A1": 2, "A2": 6, "A3": 24, "B2": 8, "B3": 48, "G2": 12, "2F4": 16, "SU4": 8, "SU5": 8}


def subsets(W):
    return [c for k in range(W.rank + 1) for c in combinations(range(W.rank), k)]


@pytest.mark.parametrize("tag", TAGS)
def test_orders_and_word_round_trip(tag):
    W = build_system(tag)
    assert W.size == ORDERS[tag]
    assert all(W.index_of_word(W.words[w]) == w for w in range(W.size))
    assert len({tuple(w) for w in W.words}) == W.size


@pytest.mark.parametrize("tag", TAGS)
def test_longest_element(tag):
    W = build_system(tag)
    assert max(range(W.size), key=lambda w: length(W, w)) == W.w0
    assert all(W.bruhat_leq(w, W.w0) for w in range(W.size))


def test_unequal_weights_for_2F4():
    W = build_system("2F4")
    assert W.size == 16 and sorted(W.weights) == [2, 4]


@pytest.mark.parametrize("tag", ["A2", "B2", "G2", "2F4", "A3"])
def test_bruhat_order_matches_subwords(tag):
    W = build_system(tag)
    for w in range(W.size):
        below = subword_bruhat(W, w)
        assert {y for y in range(W.size) if W.bruhat_leq(y, w)} == below


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(TAGS), st.data())
def test_length_and_weight_additivity(tag, data):
    W = build_system(tag)
    a = data.draw(st.integers(0, W.size - 1))
    b = data.draw(st.integers(0, W.size - 1))
    ab = W.mul(a, b)
    assert length(W, ab) <= length(W, a) + length(W, b)
    additive = length(W, ab) == length(W, a) + length(W, b)
    assert additive == (W.L[ab] == W.L[a] + W.L[b])
    assert W.L[a] == sum(W.weights[s] for s in W.words[a])


@pytest.mark.parametrize("tag", ["A2", "B2", "G2", "A3"])
def test_exchange_condition(tag):
    W = build_system(tag)
    for w in range(W.size):
        word = W.words[w]
        for s in range(W.rank):
            sw = W.lmul[w][s]
            if length(W, sw) < length(W, w):
                # deleting one letter of the reduced word of w gives sw
                assert any(W.index_of_word(word[:k] + word[k + 1:]) == sw
                           for k in range(len(word)))


@pytest.mark.parametrize("tag", ["A1", "A2", "B2", "G2", "A3"])
def test_double_cosets_against_brute_force(tag):
    W = build_system(tag)
    for I in subsets(W):
        for J in subsets(W):
            mine = sorted(frozenset(b) for _, b in W.double_cosets(I, J))
            ref = sorted(map(frozenset, brute_double_cosets(W, I, J)))
            assert mine == ref


def test_double_coset_total_for_A1():
    W = build_system("A1")
    assert sum(len(W.double_cosets(I, J)) for I in subsets(W) for J in subsets(W)) == 5


def test_infinite_group_hits_the_cap():
    with pytest.raises(CapExceeded):
        build_system(None, matrix=[[1, 3, 3], [3, 1, 3], [3, 3, 1]], cap=10)


def test_unknown_type_is_rejected():
    with pytest.raises(ValueError):
        build_system("Q9")
