import pytest
from hypothesis import given, strategies as st

from rowmerge.binmath import (
    BitWord,
    and_,
    apply_bit_permutation,
    circular_shift,
    dominates,
    index_set,
    ones,
    or_,
    shift_permutation,
    support,
    zero_support,
    zeros,
)


@st.composite
def words(draw, width=None):
    n = width or draw(st.integers(1, 12))
    return BitWord(draw(st.integers(0, (1 << n) - 1)), n)


@st.composite
def word_pairs(draw):
    n = draw(st.integers(1, 12))
    return draw(words(n)), draw(words(n))


def test_ones():
    assert ones(BitWord(0b101, 3)) == 2
    assert ones(BitWord(0, 4)) == 0
    assert ones(BitWord(0b1111111, 7)) == 7


def test_supports():
    assert support(BitWord(0b110, 3)) == (1, 2)
    assert zero_support(BitWord(0b110, 3)) == (0,)
    assert support(BitWord(0b101, 3)) == (0, 2)
    assert support(BitWord(0, 3)) == ()


def test_and_or():
    a, b = BitWord(0b101, 3), BitWord(0b011, 3)
    assert and_(a, b) == BitWord(0b001, 3)
    assert or_(a, b) == BitWord(0b111, 3)
    assert and_(a, BitWord(0, 3)).value == 0


def test_width_mismatch():
    with pytest.raises(ValueError):
        BitWord(1, 3) & BitWord(1, 4)


def test_construction_bounds():
    with pytest.raises(ValueError):
        BitWord(8, 3)
    with pytest.raises(ValueError):
        BitWord(0, 31)


def test_dominates():
    assert dominates((4, 5), (0, 1))
    assert not dominates((0, 3), (1, 2))
    assert not dominates((1, 2), (0, 3))
    assert dominates((), (1, 2)) and dominates((1,), ())


def test_circular_shift_examples():
    assert circular_shift(BitWord(0b0011, 4), 1).value == 0b0110
    assert circular_shift(BitWord(73, 7), 0).value == 73
    assert circular_shift(BitWord(73, 7), 1).value == 19
    with pytest.raises(ValueError):
        circular_shift(BitWord(1, 4), 4)


def test_permutation_examples():
    b = BitWord(0b001, 3)
    assert apply_bit_permutation(b, (0, 1, 2)) == b
    assert apply_bit_permutation(b, (2, 1, 0)).value == 0b100
    with pytest.raises(ValueError):
        apply_bit_permutation(b, (0, 0, 1))


def test_index_set_sorted_unique():
    assert index_set([5, 1, 5, 3]) == (1, 3, 5)


@given(words())
def test_ones_plus_zeros(b):
    assert ones(b) + zeros(b) == b.width
    assert set(support(b)) | set(zero_support(b)) == set(range(b.width))
    assert not set(support(b)) & set(zero_support(b))


@given(word_pairs())
def test_and_or_counts(p):
    a, b = p
    assert ones(a & b) <= min(ones(a), ones(b))
    assert ones(a | b) == ones(a) + ones(b) - ones(a & b)


@given(words(), st.randoms(use_true_random=False))
def test_permutation_preserves_ones(b, rnd):
    perm = list(range(b.width))
    rnd.shuffle(perm)
    assert ones(apply_bit_permutation(b, perm)) == ones(b)


@given(words(), st.data())
def test_shift_matches_permutation_and_cycles(b, data):
    theta = data.draw(st.integers(0, b.width - 1))
    assert circular_shift(b, theta) == apply_bit_permutation(b, shift_permutation(theta, b.width))
    c = b
    for _ in range(b.width):
        c = circular_shift(c, 1 % b.width)
    assert c == b


@given(st.sets(st.integers(0, 20)), st.sets(st.integers(0, 20)))
def test_dominates_both_ways_only_when_empty(a, b):
    A, B = index_set(a), index_set(b)
    if dominates(A, B) and dominates(B, A):
        assert not A or not B
