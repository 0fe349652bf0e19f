"""Rows of the polarization matrix G = G_2^{(x)n}, masks and projections.

Row ``g_j`` has a one at position ``p`` exactly when the 1-bits of ``p`` are
a subset of the 1-bits of ``j``.  Rows are produced either as uint8 arrays or
as packed Python integers (bit ``p`` of the integer is position ``p``), the
latter being what the weight routines XOR and popcount.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from rowmerge.binmath import MAX_WIDTH, bits_of

KERNEL = np.array([[1, 0], [1, 1]], dtype=np.uint8)
_G_HAT = (np.array([1, 0], dtype=np.uint8), np.array([1, 1], dtype=np.uint8))


def _check_row(n: int, j: int) -> None:
    if not 1 <= n <= MAX_WIDTH:
        raise ValueError(f"n must lie in [1, {MAX_WIDTH}], got {n}")
    if not 0 <= j < (1 << n):
        raise ValueError(f"row index {j} out of range for n={n}")


def _kron_bits(levels_desc: Sequence[int]) -> np.ndarray:
    out = np.ones(1, dtype=np.uint8)
    for b in levels_desc:
        out = np.kron(out, _G_HAT[b])
    return out


def row(n: int, j: int) -> np.ndarray:
    """Row ``j`` of G for N = 2^n as a 0/1 uint8 vector."""
    _check_row(n, j)
    return _kron_bits([(j >> l) & 1 for l in range(n - 1, -1, -1)])


@lru_cache(maxsize=None)
def row_int(n: int, j: int) -> int:
    """Row ``j`` packed into an int; built by the region recursion r_l = [r_0..r_{l-1}]."""
    _check_row(n, j)
    r = 1
    for l in range(n):
        if (j >> l) & 1:
            r |= r << (1 << l)
    return r


def rows_int(n: int) -> tuple[int, ...]:
    return tuple(row_int(n, j) for j in range(1 << n))


def unpack(x: int, length: int) -> np.ndarray:
    """Packed int -> 0/1 uint8 vector of ``length`` entries."""
    raw = x.to_bytes((length + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:length].copy()


def pack(bits: Iterable[int]) -> int:
    arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def mask(n: int, level: int) -> tuple[int, ...]:
    """Positions ``k`` in [0, 2^n) with bit ``level`` set."""
    if not 0 <= level < n:
        raise ValueError(f"level must lie in [0, {n}), got {level}")
    return tuple(k for k in range(1 << n) if (k >> level) & 1)


def mask_complement(n: int, level: int) -> tuple[int, ...]:
    if not 0 <= level < n:
        raise ValueError(f"level must lie in [0, {n}), got {level}")
    return tuple(k for k in range(1 << n) if not (k >> level) & 1)


def projection(n: int, j: int, levels: Iterable[int]) -> np.ndarray:
    """Kronecker product of the kernels of row ``j`` with the factors at ``levels`` removed.

    Removing every level gives the length-1 vector ``[1]``.
    """
    _check_row(n, j)
    removed = set(levels)
    if any(not 0 <= l < n for l in removed):
        raise ValueError(f"levels must be a subset of [0, {n})")
    kept = [l for l in range(n - 1, -1, -1) if l not in removed]
    return _kron_bits([(j >> l) & 1 for l in kept])


def restrict(v: np.ndarray, positions: Sequence[int]) -> np.ndarray:
    """Sub-vector of ``v`` at ``positions`` (ascending)."""
    return np.asarray(v)[np.asarray(sorted(positions), dtype=np.int64)]


def region_positions(n: int, ones_at: Iterable[int], zeros_at: Iterable[int]) -> tuple[int, ...]:
    """Positions in the intersection of M_l (l in ``ones_at``) and M_l^c (l in ``zeros_at``)."""
    on = 0
    for l in ones_at:
        on |= 1 << l
    off = 0
    for l in zeros_at:
        off |= 1 << l
    return tuple(k for k in range(1 << n) if k & on == on and k & off == 0)


def dense_matrix(n: int) -> np.ndarray:
    """The full N x N matrix; debugging aid limited to n <= 6."""
    if n > 6:
        raise ValueError("dense G is only materialised for n <= 6")
    g = np.ones((1, 1), dtype=np.uint8)
    for _ in range(n):
        g = np.kron(g, KERNEL)
    return g


def dump_text(n: int) -> str:
    """G as text, one row of 0/1 characters per line."""
    g = dense_matrix(n)
    return "\n".join("".join(str(int(x)) for x in r) for r in g) + "\n"


def weight(n: int, j: int) -> int:
    _check_row(n, j)
    return 1 << len(bits_of(j))
