"""Hamming weights of row sums and code weight spectra."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from rowmerge.binmath import popcount
from rowmerge.codec import SCLDecoder, encode, expand_messages
from rowmerge.polarmat import row_int

FORMULA_MAX_ROWS = 25
EXHAUSTIVE_MAX_K = 26


def _rows(n: int, rows: Iterable[int]) -> tuple[int, ...]:
    out = tuple(sorted(set(int(r) for r in rows)))
    if any(not 0 <= r < (1 << n) for r in out):
        raise ValueError(f"row indices must lie in [0, 2^{n})")
    return out


def weight_xor(n: int, rows: Iterable[int]) -> int:
    """Popcount of the XOR of the given rows of G."""
    acc = 0
    for j in _rows(n, rows):
        acc ^= row_int(n, j)
    return acc.bit_count()


def weight_formula(n: int, rows: Iterable[int]) -> int:
    """Weight of the row sum from the common-ones counts of every sub-subset.

    i1(g_T) = sum_{w} (-2)^(w-1) sum_{|S|=w, S in T} 2^{i1(AND_{j in S} b_j)}

    The AND of every subset is built by doubling over the members; terms are
    tallied by (size, ones) so the signed sum is taken in exact integers.
    """
    T = _rows(n, rows)
    if not T:
        raise ValueError("weight of an empty row set is undefined here")
    if len(T) > FORMULA_MAX_ROWS:
        raise ValueError(f"{len(T)} rows exceed the formula limit {FORMULA_MAX_ROWS}; use weight_xor")
    t = len(T)
    ands = np.empty(1 << t, dtype=np.uint32)
    sizes = np.empty(1 << t, dtype=np.uint8)
    ands[0] = (1 << n) - 1
    sizes[0] = 0
    for idx, b in enumerate(T):
        half = 1 << idx
        np.bitwise_and(ands[:half], b, out=ands[half : 2 * half])
        np.add(sizes[:half], 1, out=sizes[half : 2 * half])
    ones = np.bitwise_count(ands[1:]).astype(np.int64)
    hist = np.bincount(sizes[1:].astype(np.int64) * (n + 1) + ones, minlength=(t + 1) * (n + 1))
    total = 0
    for key in np.flatnonzero(hist):
        w, o = divmod(int(key), n + 1)
        total += int(hist[key]) * (-2) ** (w - 1) * (1 << o)
    return total


def weight_lower_bound(n: int, rows: Iterable[int]) -> int:
    """max over bit levels l of the weight of the rows whose bit l is 0."""
    T = _rows(n, rows)
    best = 0
    for l in range(n):
        sub = [j for j in T if not (j >> l) & 1]
        if sub:
            best = max(best, weight_xor(n, sub))
    return best


def subset_xor_table(packed: Sequence[int]) -> list[int]:
    """XOR of every subset of ``packed``; entry ``mask`` combines members set in ``mask``."""
    table = [0]
    for r in packed:
        table += [x ^ r for x in table]
    return table


@dataclass
class WeightReport:
    min_weight: int
    counts: dict[int, int] = field(default_factory=dict)
    exact: bool = True

    @classmethod
    def from_counts(cls, counts: dict[int, int], exact: bool) -> "WeightReport":
        counts = {int(w): int(c) for w, c in sorted(counts.items()) if c}
        if not counts:
            raise ValueError("no codewords observed")
        return cls(min(counts), counts, exact)

    def to_dict(self) -> dict:
        return {
            "min_weight": self.min_weight,
            "exact": self.exact,
            "counts": [{"weight": w, "count": c} for w, c in sorted(self.counts.items())],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "WeightReport":
        return cls(int(d["min_weight"]), {int(e["weight"]): int(e["count"]) for e in d["counts"]}, bool(d["exact"]))

    def merge(self, other: "WeightReport") -> "WeightReport":
        c = Counter(self.counts)
        c.update(other.counts)
        return WeightReport.from_counts(dict(c), self.exact and other.exact)


def _packed_words(x: int, N: int) -> np.ndarray:
    nbytes = max(8, N // 8)
    return np.frombuffer(x.to_bytes(nbytes, "little"), dtype=np.uint64)


def _xor_table_np(rows: np.ndarray) -> np.ndarray:
    table = np.zeros((1 << len(rows), rows.shape[1]), dtype=np.uint64)
    for idx, r in enumerate(rows):
        half = 1 << idx
        np.bitwise_xor(table[:half], r, out=table[half : 2 * half])
    return table


def spectrum_exhaustive(spec) -> WeightReport:
    """Weight distribution over all 2^k - 1 nonzero messages."""
    k = spec.k
    if k > EXHAUSTIVE_MAX_K:
        raise ValueError(f"exhaustive spectrum limited to k <= {EXHAUSTIVE_MAX_K}, got {k}")
    if k == 0:
        raise ValueError("code has no information bits")
    rows = np.stack([_packed_words(r, spec.N) for r in spec.generator_rows()])
    k_lo = min(k, 16)
    lo = _xor_table_np(rows[:k_lo])
    hi = _xor_table_np(rows[k_lo:])
    hist = np.zeros(spec.N + 1, dtype=np.int64)
    for h in hi:
        w = np.bitwise_count(lo ^ h).sum(axis=1, dtype=np.int64)
        hist += np.bincount(w, minlength=spec.N + 1)
    hist[0] -= 1  # the zero message
    return WeightReport.from_counts({w: int(c) for w, c in enumerate(hist) if c}, exact=True)


def sampled_min_weight(spec, count: int, seed: int = 0, batch: int = 1 << 14) -> WeightReport:
    """Weights of ``count`` sampled codewords.

    Half the messages are sparse (1 to 4 ones), the rest uniform.  Any weight
    found is an upper bound on the minimum distance.
    """
    rng = np.random.default_rng(seed)
    counts: Counter = Counter()
    done = 0
    while done < count:
        b = min(batch, count - done)
        msgs = (rng.random((b, spec.k)) < 0.5).astype(np.uint8)
        sparse = b // 2
        msgs[:sparse] = 0
        nnz = rng.integers(1, 5, size=sparse)
        for row, z in enumerate(nnz):
            msgs[row, rng.choice(spec.k, size=min(z, spec.k), replace=False)] = 1
        w = encode(spec, msgs).sum(axis=1, dtype=np.int64)
        nonzero = msgs.any(axis=1)
        counts.update(w[nonzero].tolist())
        done += b
    return WeightReport.from_counts(dict(counts), exact=False)


def min_weight_list_search(
    spec,
    list_size: int,
    trials: int = 10,
    seed: int = 0,
    jitter: float = 0.01,
) -> WeightReport:
    """Low-weight codewords from SCL lists around noiseless observations.

    Trial 0 decodes the all-zero codeword seen without noise; later trials
    centre on a random codeword with a small multiplicative jitter on the
    LLR magnitudes, which changes how ties are pruned.  Every distinct
    nonzero difference between a listed codeword and the centre is
    tallied, so ``counts`` are lower bounds on the true multiplicities and
    ``min_weight`` is an upper bound on the minimum distance.
    """
    if list_size < 2:
        raise ValueError("list search needs list_size >= 2")
    rng = np.random.default_rng(seed)
    dec = SCLDecoder(spec, list_size)
    seen: dict[bytes, int] = {}
    for trial in range(max(1, trials)):
        if trial == 0:
            center = np.zeros(spec.N, dtype=np.uint8)
            mag = np.ones(spec.N)
        else:
            center = encode(spec, rng.integers(0, 2, spec.k, dtype=np.uint8))
            mag = 1.0 + jitter * rng.random(spec.N)
        llr = np.where(center == 0, mag, -mag)
        out = dec.decode(llr[None, :])
        diffs = out.codewords[0] ^ center
        for row in diffs:
            w = int(row.sum())
            if w:
                seen.setdefault(np.packbits(row).tobytes(), w)
    if not seen:
        raise RuntimeError("list search found no nonzero codeword; increase list_size")
    return WeightReport.from_counts(dict(Counter(seen.values())), exact=False)


def coset_min_weight(spec, word: np.ndarray, list_size: int) -> int:
    """Smallest weight found in ``word + C`` by list-decoding ``C`` around ``word``.

    With unit LLRs the path metric of a listed codeword is its Hamming
    distance to ``word``, so the best path is the lightest coset member the
    list reaches.  An upper bound on the true coset minimum.
    """
    word = np.asarray(word, dtype=np.uint8)
    llr = np.where(word == 0, 1.0, -1.0)
    out = SCLDecoder(spec, list_size).decode(llr[None, :])
    return int((out.codewords[0] ^ word).sum(axis=1).min())


def union_bound_term(d: int, a_d: int, rate: float, ebno_db: float) -> float:
    """A_d Q(sqrt(2 d R Eb/N0)) for BPSK on AWGN."""
    from scipy.special import erfc

    ebno = 10 ** (ebno_db / 10)
    return a_d * 0.5 * float(erfc(np.sqrt(d * rate * ebno)))


__all__ = [
    "WeightReport",
    "coset_min_weight",
    "expand_messages",
    "min_weight_list_search",
    "popcount",
    "sampled_min_weight",
    "spectrum_exhaustive",
    "subset_xor_table",
    "union_bound_term",
    "weight_formula",
    "weight_lower_bound",
    "weight_xor",
]
