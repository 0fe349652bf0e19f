"""Bit-index algebra on n-bit binary representations of row indices.

Bit 0 is the least significant bit.  Index sets are plain tuples sorted in
ascending order, so ``A[i]`` is the i-th smallest element.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_WIDTH = 30

IndexSet = tuple


def index_set(members: Iterable[int]) -> tuple[int, ...]:
    """Return ``members`` as a strictly ascending tuple (duplicates dropped)."""
    out = tuple(sorted(set(int(m) for m in members)))
    if out and out[0] < 0:
        raise ValueError("index sets hold non-negative integers")
    return out


def popcount(x: int) -> int:
    return int(x).bit_count()


def bits_of(x: int) -> tuple[int, ...]:
    """Positions of the 1-bits of ``x`` in ascending order."""
    out = []
    pos = 0
    while x:
        if x & 1:
            out.append(pos)
        x >>= 1
        pos += 1
    return tuple(out)


def from_bits(positions: Iterable[int]) -> int:
    v = 0
    for p in positions:
        v |= 1 << p
    return v


@dataclass(frozen=True, order=True)
class BitWord:
    """An n-bit word ``value`` carrying its width explicitly."""

    value: int
    width: int

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"width must lie in [1, {MAX_WIDTH}], got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} bits")

    def bit(self, pos: int) -> int:
        return (self.value >> pos) & 1

    def ones(self) -> int:
        return popcount(self.value)

    def zeros(self) -> int:
        return self.width - self.ones()

    def support(self) -> tuple[int, ...]:
        return bits_of(self.value)

    def zero_support(self) -> tuple[int, ...]:
        return bits_of(~self.value & ((1 << self.width) - 1))

    def _check(self, other: "BitWord") -> None:
        if self.width != other.width:
            raise ValueError(f"width mismatch: {self.width} vs {other.width}")

    def __and__(self, other: "BitWord") -> "BitWord":
        self._check(other)
        return BitWord(self.value & other.value, self.width)

    def __or__(self, other: "BitWord") -> "BitWord":
        self._check(other)
        return BitWord(self.value | other.value, self.width)

    def __str__(self) -> str:
        return format(self.value, f"0{self.width}b")


def ones(b: BitWord) -> int:
    return b.ones()


def zeros(b: BitWord) -> int:
    return b.zeros()


def support(b: BitWord) -> tuple[int, ...]:
    return b.support()


def zero_support(b: BitWord) -> tuple[int, ...]:
    return b.zero_support()


def and_(b1: BitWord, b2: BitWord) -> BitWord:
    return b1 & b2


def or_(b1: BitWord, b2: BitWord) -> BitWord:
    return b1 | b2


def dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff every element of ``a`` exceeds every element of ``b``.

    Vacuously true when either set is empty.
    """
    if not a or not b:
        return True
    return min(a) > max(b)


def circular_shift(b: BitWord, theta: int) -> BitWord:
    """Left-circular shift: output bit ``v`` is input bit ``(v - theta) mod n``."""
    n = b.width
    if not 0 <= theta < n:
        raise ValueError(f"shift must lie in [0, {n}), got {theta}")
    mask = (1 << n) - 1
    v = b.value
    return BitWord(((v << theta) | (v >> (n - theta))) & mask, n)


def shift_value(value: int, theta: int, n: int) -> int:
    return circular_shift(BitWord(value, n), theta % n).value


def _check_perm(perm: Sequence[int], n: int) -> None:
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise ValueError(f"not a permutation of [0, {n}): {list(perm)}")


def permute_value(value: int, perm: Sequence[int]) -> int:
    """Move bit ``l`` of ``value`` to position ``perm[l]`` (no validation)."""
    out = 0
    for src, dst in enumerate(perm):
        if (value >> src) & 1:
            out |= 1 << dst
    return out


def apply_bit_permutation(b: BitWord, perm: Sequence[int]) -> BitWord:
    _check_perm(perm, b.width)
    return BitWord(permute_value(b.value, perm), b.width)


def shift_permutation(theta: int, n: int) -> tuple[int, ...]:
    """The bit permutation realising ``circular_shift(., theta)``."""
    return tuple((l + theta) % n for l in range(n))


def compose(outer: Sequence[int], inner: Sequence[int]) -> tuple[int, ...]:
    """Permutation applying ``inner`` first, then ``outer``."""
    return tuple(outer[inner[l]] for l in range(len(inner)))


def level_set(n: int, p: int) -> tuple[int, ...]:
    """All row indices in [0, 2^n) whose binary representation has ``p`` ones."""
    return tuple(t for t in range(1 << n) if popcount(t) == p)
