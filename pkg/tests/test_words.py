from __future__ import annotations

import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from bgdc.words import (
    FormalSum,
    Node,
    deconcatenations,
    gen_jacobi_constraints,
    left_bracket_sum,
    left_bracketing,
    lie_normalize,
    ordered_partitions,
    shuffle,
    tree_from_str,
    tree_letters,
    tree_to_str,
    word_expand,
    word_from_str,
    word_inner,
    word_to_str,
)


@st.composite
def trees(draw, max_letters=6):
    k = draw(st.integers(1, max_letters))
    letters = draw(st.permutations(list(range(1, k + 1))))

    def build(ls):
        if len(ls) == 1:
            return ls[0]
        cut = draw(st.integers(1, len(ls) - 1))
        return Node(build(ls[:cut]), build(ls[cut:]))

    return build(list(letters))


@st.composite
def word_pairs(draw, max_total=6):
    total = draw(st.integers(2, max_total))
    letters = draw(st.permutations(list(range(1, total + 1))))
    cut = draw(st.integers(1, total - 1))
    return tuple(letters[:cut]), tuple(letters[cut:])


def test_shuffle_small():
    assert dict(shuffle((1, 2), (3,)).items()) == {(1, 2, 3): 1, (1, 3, 2): 1, (3, 1, 2): 1}
    assert dict(shuffle((1,), (1,)).items()) == {(1, 1): 2}
    assert dict(shuffle((), (4, 5)).items()) == {(4, 5): 1}


@given(word_pairs())
def test_shuffle_count_and_symmetry(pair):
    P, Q = pair
    sh = shuffle(P, Q)
    assert sum(c for _, c in sh.items()) == comb(len(P) + len(Q), len(P))
    assert sh == shuffle(Q, P)
    for w, _ in sh.items():
        assert [x for x in w if x in P] == list(P)


def test_shuffle_associative():
    A, B, C = (1, 2), (3,), (4, 5)
    left, right = FormalSum(), FormalSum()
    for w, c in shuffle(A, B).items():
        left.iadd(shuffle(w, C), c)
    for w, c in shuffle(B, C).items():
        right.iadd(shuffle(A, w), c)
    assert left == right


def test_deconcatenations():
    assert deconcatenations((1, 2, 3)) == [((1,), (2, 3)), ((1, 2), (3,))]
    assert deconcatenations((7,)) == []


@pytest.mark.parametrize("n", range(2, 7))
def test_partition_counts(n):
    P = tuple(range(1, n + 1))
    ordered = ordered_partitions(P)
    unordered = ordered_partitions(P, unordered=True)
    assert len(ordered) == 2**n - 2
    assert len(unordered) == 2 ** (n - 1) - 1
    assert all(1 in Q for Q, _ in unordered)
    assert {frozenset(Q) for Q, _ in ordered} == {frozenset(x) for Q, R in unordered for x in (Q, R)}


def test_partitions_keep_order():
    for Q, R in ordered_partitions((3, 1, 2)):
        assert sorted(Q + R) == [1, 2, 3]
        assert list(Q) == [x for x in (3, 1, 2) if x in Q]


def test_word_expand_bracket():
    assert dict(word_expand(Node(1, 2)).items()) == {(1, 2): 1, (2, 1): -1}
    expanded = word_expand(Node(Node(1, 2), 3))
    assert dict(expanded.items()) == {(1, 2, 3): 1, (2, 1, 3): -1, (3, 1, 2): -1, (3, 2, 1): 1}


@settings(max_examples=60)
@given(trees(), st.data())
def test_lie_elements_annihilate_shuffles(t, data):
    # a Lie polynomial pairs to zero with every proper shuffle
    letters = tree_letters(t)
    if len(letters) < 2:
        return
    perm = data.draw(st.permutations(list(letters)))
    cut = data.draw(st.integers(1, len(perm) - 1))
    assert word_inner(shuffle(tuple(perm[:cut]), tuple(perm[cut:])), word_expand(t)) == 0


@settings(max_examples=80)
@given(trees())
def test_lie_normalize_round_trip(t):
    coeffs = lie_normalize(t, 1)
    assert all(w[0] == 1 for w, _ in coeffs.items())
    rebuilt = word_expand(left_bracket_sum(coeffs))
    assert rebuilt == word_expand(t)


@settings(max_examples=80)
@given(trees())
def test_lie_normalize_matches_word_coefficients(t):
    # coefficient of l[1P] equals the coefficient of the word 1P in the expansion
    expanded = word_expand(t)
    coeffs = lie_normalize(t, 1)
    for P in itertools.permutations([x for x in tree_letters(t) if x != 1]):
        w = (1,) + P
        assert coeffs[w] == expanded[w]


def test_lie_normalize_rejects_repeats_and_missing_anchor():
    with pytest.raises(ValueError):
        lie_normalize(Node(1, 1), 1)
    with pytest.raises(ValueError):
        lie_normalize(Node(2, 3), 1)


def test_jacobi_order_two_is_antisymmetry():
    (con,) = gen_jacobi_constraints(2, [1, 2])
    assert dict(con.trees().items()) == {Node(1, 2): 1, Node(2, 1): 1}


def test_jacobi_order_three_contains_jacobi():
    # Q=1, R=23: l[1 l[23]] = [[1,2],3] - [[1,3],2]
    cons = {(c.Q, c.R): c for c in gen_jacobi_constraints(3, [1, 2, 3])}
    first = cons[((1,), (2, 3))].first
    assert dict(first.items()) == {left_bracketing((1, 2, 3)): 1, left_bracketing((1, 3, 2)): -1}


@pytest.mark.parametrize("k", range(2, 6))
def test_jacobi_constraints_are_lie_identities(k):
    for con in gen_jacobi_constraints(k, range(1, k + 1)):
        assert not word_expand(con.trees())


def test_serialization():
    assert word_to_str((1, 2, 3)) == "123"
    assert word_to_str((1, 10)) == "1,10"
    assert word_from_str("1,10") == (1, 10)
    assert word_from_str("312") == (3, 1, 2)
    t = Node(Node(1, 12), 3)
    assert tree_from_str(tree_to_str(t)) == t
    with pytest.raises(ValueError):
        tree_from_str("[1,2")
