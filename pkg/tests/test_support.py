import random

from hypothesis import given
from hypothesis import strategies as st

from markov_order.counting import Window, count_block
from markov_order.sequence import split_index
from markov_order.support import (
    max_useful_length,
    support_first_half,
    support_intersection,
    support_second_half,
)


def test_first_half_examples(alt11):
    assert support_first_half(alt11, 10, 1).blocks == {(0, 1), (1, 0)}
    assert support_first_half(alt11, 10, 0).blocks == {(0,), (1,)}
    assert support_first_half(alt11, 10, 5).blocks == frozenset()


def test_second_half_examples(alt11, alt41):
    assert support_second_half(alt11, 10, 0, 0.5).blocks == frozenset()
    assert support_second_half(alt41, 40, 0, 0.5).blocks == {(0,), (1,)}
    assert support_second_half(alt41, 40, 0, 0.01).blocks == frozenset()


def test_intersection_examples(alt41):
    assert support_intersection(alt41, 40, 0, 0.5).blocks == {(0,), (1,)}
    # first half all zeros, second half all ones: no common 2-block
    seq = [0] * 20 + [1] * 21
    assert support_intersection(seq, 40, 1, 0.5).blocks == frozenset()
    assert support_intersection([0, 1, 0], 2, 0, 0.1).blocks == frozenset()


def test_second_half_threshold_is_strict():
    # n = 16, gamma = 0.5 -> threshold exactly 4
    seq = [0, 1] * 4 + [0] + [1, 0] * 4
    h = split_index(16)
    assert count_block(seq, Window(h, 16), (1,)) == 4
    assert (1,) not in support_second_half(seq, 16, 0, 0.5)
    assert (0,) in support_second_half(seq, 16, 0, 0.5)


def test_level_monotonicity_randomized():
    rng = random.Random(7)
    for _ in range(1000):
        A = rng.randint(1, 4)
        seq = [rng.randrange(A) for _ in range(rng.randint(2, 120))]
        n = len(seq) - 1
        gamma = rng.choice([0.3, 0.5, 0.7])
        k = rng.randint(0, 6)
        upper = support_second_half(seq, n, k + 1, gamma)
        if len(upper):
            assert len(support_second_half(seq, n, k, gamma))
        L = max_useful_length(seq, n, gamma)
        assert len(support_second_half(seq, n, L, gamma)) == 0
        if L:
            assert len(support_second_half(seq, n, L - 1, gamma))


@given(st.lists(st.integers(0, 2), min_size=2, max_size=80), st.integers(0, 4))
def test_first_half_membership_is_count_positive(seq, k):
    n = len(seq) - 1
    h = split_index(n)
    support = support_first_half(seq, n, k)
    blocks = {tuple(seq[s : s + k + 1]) for s in range(len(seq) - k)}
    for b in blocks:
        in_first = h - 1 >= k and count_block(seq, Window(0, h - 1), b) >= 1
        assert (b in support) == in_first


@given(st.lists(st.integers(0, 3), min_size=2, max_size=80), st.integers(0, 3))
def test_supports_deterministic(seq, k):
    n = len(seq) - 1
    assert support_intersection(seq, n, k, 0.4) == support_intersection(seq, n, k, 0.4)
