"""Executable property suites behind ``rowmerge verify``.

Each check returns a :class:`Check` record; a failing check carries the
first counterexample found.  The heavy harnesses work on packed uint64 rows
and subset-XOR tables so that millions of row sums stay cheap.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from rowmerge.binmath import level_set, popcount
from rowmerge.codebuilder import CodeSpec, build
from rowmerge.codec import SCLDecoder, encode, ml_oracle, polar_transform
from rowmerge.mergerules import canonicalize, ensemble, enumerate_triples, MergeTriple
from rowmerge.polarmat import row_int
from rowmerge.weightcalc import (
    _packed_words,
    spectrum_exhaustive,
    weight_formula,
    weight_lower_bound,
    weight_xor,
)

GROUP = 16


@dataclass
class Check:
    name: str
    passed: bool
    cases: int
    detail: str = ""
    counterexample: dict | None = None
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def _timed(fn: Callable[[], Check]) -> Check:
    t0 = time.perf_counter()
    c = fn()
    c.seconds = round(time.perf_counter() - t0, 3)
    return c


def higher_rows(n: int, ell: int) -> tuple[int, ...]:
    """Rows whose index has more than ``ell`` ones."""
    return tuple(j for p in range(ell + 1, n + 1) for j in level_set(n, p))


def packed(n: int, rows: Iterable[int]) -> np.ndarray:
    rows = list(rows)
    words = max(1, (1 << n) // 64)
    if not rows:
        return np.zeros((0, words), dtype=np.uint64)
    return np.stack([_packed_words(row_int(n, r), 1 << n) for r in rows])


def packed_sum(n: int, rows: Iterable[int]) -> np.ndarray:
    acc = 0
    for r in rows:
        acc ^= row_int(n, r)
    return _packed_words(acc, 1 << n)


def _xor_table(words: np.ndarray) -> np.ndarray:
    table = np.zeros((1 << len(words), words.shape[1]), dtype=np.uint64)
    for idx, r in enumerate(words):
        half = 1 << idx
        np.bitwise_xor(table[:half], r, out=table[half : 2 * half])
    return table


def _weights(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).sum(axis=-1, dtype=np.int64)


class RowSums:
    """Weights of ``offset + sum(T)`` for subsets T of a fixed row pool."""

    def __init__(self, n: int, pool: Sequence[int]):
        self.n = n
        self.pool = tuple(pool)
        self.words = packed(n, self.pool)
        self.groups = [
            (lo, _xor_table(self.words[lo : lo + GROUP])) for lo in range(0, len(self.pool), GROUP)
        ]

    def all_weights(self, offset: np.ndarray) -> np.ndarray:
        """Weight for every subset, indexed by the subset bitmask (pool of at most 24 rows)."""
        if len(self.pool) > 24:
            raise ValueError("pool too large for exhaustive subsets")
        return _weights(_xor_table(self.words) ^ offset)

    def min_small(self, offset: np.ndarray, max_size: int) -> tuple[int, tuple[int, ...], int]:
        """(min weight, argmin T, subsets tried) over all T with |T| <= max_size."""
        best, arg, tried = int(_weights(offset[None])[0]), (), 1
        for s in range(1, max_size + 1):
            combos = np.array(list(itertools.combinations(range(len(self.pool)), s)), dtype=np.int64)
            for chunk in np.array_split(combos, max(1, len(combos) // 65536)):
                acc = np.bitwise_xor.reduce(self.words[chunk], axis=1) ^ offset
                w = _weights(acc)
                i = int(w.argmin())
                if w[i] < best:
                    best, arg = int(w[i]), tuple(self.pool[c] for c in chunk[i])
                tried += len(chunk)
        return best, arg, tried

    def min_random(
        self, offset: np.ndarray, count: int, rng: np.random.Generator, batch: int = 1 << 15
    ) -> tuple[int, tuple[int, ...]]:
        """Min weight over ``count`` random T; inclusion density varies per sample."""
        best, arg = 1 << 62, ()
        densities = np.array([0.03, 0.08, 0.15, 0.3, 0.5])
        done = 0
        while done < count:
            b = min(batch, count - done)
            p = densities[rng.integers(0, len(densities), b)]
            member = rng.random((b, len(self.pool))) < p[:, None]
            acc = np.broadcast_to(offset, (b, offset.shape[0])).copy()
            for lo, table in self.groups:
                part = member[:, lo : lo + GROUP]
                idx = part.astype(np.int64) @ (1 << np.arange(part.shape[1], dtype=np.int64))
                acc ^= table[idx]
            w = _weights(acc)
            i = int(w.argmin())
            if w[i] < best:
                best, arg = int(w[i]), tuple(np.asarray(self.pool)[member[i]].tolist())
            done += b
        return best, arg


# ---------------------------------------------------------------- weights


def check_formula_exhaustive(n: int, max_size: int = 4) -> Check:
    cases = 0
    for s in range(1, max_size + 1):
        for T in itertools.combinations(range(1 << n), s):
            cases += 1
            a, b = weight_formula(n, T), weight_xor(n, T)
            if a != b:
                return Check(f"formula_vs_xor[n={n}]", False, cases, counterexample={"T": T, "formula": a, "xor": b})
    return Check(f"formula_vs_xor[n={n}]", True, cases, f"all T with |T| <= {max_size}")


def check_formula_random(n: int, count: int = 10_000, max_size: int = 10, seed: int = 0) -> Check:
    rng = np.random.default_rng(seed)
    for c in range(count):
        s = int(rng.integers(1, max_size + 1))
        T = rng.choice(1 << n, size=s, replace=False).tolist()
        a, b = weight_formula(n, T), weight_xor(n, T)
        if a != b:
            return Check(f"formula_vs_xor_random[n={n}]", False, c + 1, counterexample={"T": T, "formula": a, "xor": b})
    return Check(f"formula_vs_xor_random[n={n}]", True, count, f"random T with |T| <= {max_size}")


def check_lower_bound_exhaustive(n: int) -> Check:
    """weight_lower_bound(T) <= weight(T) for every subset of all 2^n rows (n <= 4)."""
    N = 1 << n
    if N > 16:
        raise ValueError("exhaustive lower-bound check is limited to n <= 4")
    sums = RowSums(n, range(N))
    w = sums.all_weights(np.zeros(sums.words.shape[1], dtype=np.uint64))
    masks = np.arange(1 << N, dtype=np.int64)
    bound = np.zeros_like(w)
    for l in range(n):
        zero_rows = sum(1 << j for j in range(N) if not (j >> l) & 1)
        bound = np.maximum(bound, w[masks & zero_rows])
    bad = np.flatnonzero(bound > w)
    # spot-check the vectorised bound against the scalar routine
    for m in masks[:: max(1, len(masks) // 512)][1:]:
        T = [j for j in range(N) if (m >> j) & 1]
        if weight_lower_bound(n, T) != bound[m]:
            return Check(f"lower_bound[n={n}]", False, int(m), "vectorised bound disagrees", {"T": T})
    if len(bad):
        m = int(bad[0])
        T = [j for j in range(N) if (m >> j) & 1]
        return Check(f"lower_bound[n={n}]", False, 1 << N, counterexample={"T": T, "bound": int(bound[m]), "weight": int(w[m])})
    return Check(f"lower_bound[n={n}]", True, (1 << N) - 1, "all non-empty subsets")


def check_lower_bound_random(n: int, count: int = 10_000, seed: int = 0) -> Check:
    rng = np.random.default_rng(seed)
    for c in range(count):
        T = rng.choice(1 << n, size=int(rng.integers(1, min(12, 1 << n) + 1)), replace=False).tolist()
        lb, w = weight_lower_bound(n, T), weight_xor(n, T)
        if lb > w:
            return Check(f"lower_bound_random[n={n}]", False, c + 1, counterexample={"T": T, "bound": lb, "weight": w})
    return Check(f"lower_bound_random[n={n}]", True, count)


def check_permutation_invariance(n: int, count: int = 1000, seed: int = 0) -> Check:
    from rowmerge.binmath import permute_value

    rng = np.random.default_rng(seed)
    for c in range(count):
        T = rng.choice(1 << n, size=int(rng.integers(1, min(8, 1 << n) + 1)), replace=False).tolist()
        perm = rng.permutation(n).tolist()
        a = weight_xor(n, T)
        b = weight_xor(n, [permute_value(j, perm) for j in T])
        if a != b:
            return Check(f"permutation_invariance[n={n}]", False, c + 1, counterexample={"T": T, "perm": perm})
    return Check(f"permutation_invariance[n={n}]", True, count)


def check_triangle(count: int = 10_000, length: int = 256, seed: int = 0) -> Check:
    rng = np.random.default_rng(seed)
    top = np.iinfo(np.uint64).max
    u = rng.integers(0, top, size=(count, length // 64), dtype=np.uint64, endpoint=True)
    v = rng.integers(0, top, size=(count, length // 64), dtype=np.uint64, endpoint=True)
    bad = np.flatnonzero(_weights(u ^ v) + _weights(v) < _weights(u))
    return Check("triangle_inequality", not len(bad), count, f"{length}-bit words")


def check_single_row_distance(count: int = 20, seed: int = 0, max_n: int = 5, max_k: int = 16) -> Check:
    """Exhaustive spectra of plain polar-like codes against 2^(min ones of an information index)."""
    rng = np.random.default_rng(seed)
    for c in range(count):
        n = int(rng.integers(2, max_n + 1))
        N = 1 << n
        k = int(rng.integers(1, min(max_k, N) + 1))
        info = sorted(rng.choice(N, size=k, replace=False).tolist())
        spec = CodeSpec.polar_like(n, info)
        got = spectrum_exhaustive(spec).min_weight
        want = 1 << min(popcount(j) for j in info)
        if got != want:
            return Check("polar_like_distance", False, c + 1, counterexample={"n": n, "info": info, "got": got, "want": want})
    return Check("polar_like_distance", True, count, f"random specs, n <= {max_n}, k <= {max_k}")


def suite_weights(ns: Sequence[int], seed: int = 0) -> list[Check]:
    out = []
    for n in ns:
        if n <= 5:
            out.append(_timed(lambda: check_formula_exhaustive(n)))
        else:
            out.append(_timed(lambda: check_formula_random(n, seed=seed)))
        if n <= 4:
            out.append(_timed(lambda: check_lower_bound_exhaustive(n)))
        else:
            out.append(_timed(lambda: check_lower_bound_random(n, count=2000, seed=seed)))
        out.append(_timed(lambda: check_permutation_invariance(n, seed=seed)))
    out.append(_timed(lambda: check_triangle(seed=seed)))
    out.append(_timed(lambda: check_single_row_distance(seed=seed)))
    return out


# ---------------------------------------------------------------- merged rows


def _offset_check(
    name: str,
    n: int,
    offsets: Sequence[tuple[dict, np.ndarray]],
    pool: Sequence[int],
    bound: Callable[[dict], int],
    max_size: int | None,
    random_count: int,
    seed: int,
) -> Check:
    """min over T of weight(offset + sum T) >= bound, for every labelled offset.

    ``max_size=None`` means every subset of the pool.
    """
    sums = RowSums(n, pool)
    rng = np.random.default_rng(seed)
    cases = 0
    worst = None
    for label, off in offsets:
        need = bound(label)
        if max_size is None:
            w = sums.all_weights(off)
            i = int(w.argmin())
            got, arg = int(w[i]), tuple(p for b, p in enumerate(sums.pool) if (i >> b) & 1)
            cases += len(w)
        else:
            got, arg, tried = sums.min_small(off, max_size)
            cases += tried
            if random_count:
                rgot, rarg = sums.min_random(off, random_count, rng)
                cases += random_count
                if rgot < got:
                    got, arg = rgot, rarg
        if worst is None or got - need < worst:
            worst = got - need
        if got < need:
            return Check(name, False, cases, counterexample={**label, "T": list(arg), "weight": got, "bound": need})
    return Check(name, True, cases, f"{len(offsets)} offsets, smallest margin {worst}")


def check_disjoint_triples(n: int = 6, ell: int = 2, max_size: int = 3, random_count: int = 100_000, seed: int = 0) -> Check:
    triples = [t for t in enumerate_triples(n, ell) if t.kind == "disjoint"]
    offsets = [({"triple": list(t.members)}, packed_sum(n, t.members)) for t in triples]
    return _offset_check(
        f"disjoint_triples[n={n},l={ell}]", n, offsets, higher_rows(n, ell),
        lambda _: 1 << (ell + 1), max_size, random_count, seed,
    )


def check_intersecting_triples(
    n: int = 7, ell: int = 3, max_size: int = 3, random_count: int = 10_000, seed: int = 0
) -> Check:
    triples = [t for t in enumerate_triples(n, ell) if t.kind == "intersecting"]
    offsets = [({"triple": list(t.members)}, packed_sum(n, t.members)) for t in triples]
    return _offset_check(
        f"intersecting_triples[n={n},l={ell}]", n, offsets, higher_rows(n, ell),
        lambda _: 1 << (ell + 1), max_size, random_count, seed,
    )


def ensemble_offsets(base: MergeTriple) -> list[tuple[dict, np.ndarray]]:
    """One offset per non-empty subset D of the full shift ensemble of ``base``."""
    ens = ensemble(base, base.kappa + 1)
    out = []
    for r in range(1, len(ens.triples) + 1):
        for D in itertools.combinations(range(len(ens.triples)), r):
            rows = [x for d in D for x in ens.triples[d].members]
            out.append(({"shifts": [ens.shifts[d] for d in D]}, packed_sum(base.n, rows)))
    return out


def check_ensemble(
    base: MergeTriple, max_size: int = 3, random_count: int = 1_000_000, seed: int = 0
) -> Check:
    n, ell = base.n, base.ell
    name = f"shift_ensemble[{base.i},{base.j},{base.k}]"
    return _offset_check(
        name, n, ensemble_offsets(base), higher_rows(n, ell),
        lambda _: 1 << (ell + 1), max_size, random_count, seed,
    )


def suite_merged_rows(seed: int = 0, random_scale: float = 1.0) -> list[Check]:
    base, _ = canonicalize(MergeTriple(7, 73, 70, 112))
    r = lambda x: max(1, int(x * random_scale))
    return [
        _timed(lambda: check_disjoint_triples(random_count=r(100_000), seed=seed)),
        _timed(lambda: check_intersecting_triples(random_count=r(10_000), seed=seed)),
        _timed(lambda: check_ensemble(base, random_count=r(1_000_000), seed=seed)),
    ]


def pair_offsets(n: int, ell: int, disjoint_only: bool) -> list[tuple[dict, np.ndarray]]:
    lv = level_set(n, ell)
    out = []
    for i, j in itertools.combinations(lv, 2):
        if disjoint_only and i & j:
            continue
        out.append(({"pair": [i, j], "w": popcount(i & j)}, packed_sum(n, (i, j))))
    return out


def check_pairs(n: int = 5, ell: int = 2, disjoint_only: bool = True) -> Check:
    """Every subset T of the heavier rows added to a same-weight pair (i, j)."""
    if disjoint_only:
        name, bound = f"disjoint_pairs[n={n},l={ell}]", lambda lab: (1 << (ell + 1)) - 2
    else:
        name, bound = f"general_pairs[n={n},l={ell}]", lambda lab: (1 << (ell + 1)) - (1 << (lab["w"] + 1))
    offsets = pair_offsets(n, ell, disjoint_only)
    if not offsets:
        return Check(name, True, 0, "no pairs at this size")
    return _offset_check(name, n, offsets, higher_rows(n, ell), bound, None, 0, 0)


def suite_pairs(ns: Sequence[int] = (5,), ell: int = 2) -> list[Check]:
    out = []
    for n in ns:
        out.append(_timed(lambda: check_pairs(n, ell, True)))
        out.append(_timed(lambda: check_pairs(n, ell, False)))
    return out


# ---------------------------------------------------------------- codec


def toy_spec() -> CodeSpec:
    """A (16, 6) code with three dynamic frozen positions."""
    info = (3, 5, 6, 7, 11, 13)
    dynamic = {9: 5, 14: 13, 15: 11}
    static = tuple(x for x in range(16) if x not in info and x not in dynamic)
    return CodeSpec(4, info, static, dynamic, 4)


def awgn_llr(codewords: np.ndarray, rate: float, ebno_db: float, rng) -> np.ndarray:
    s2 = 1.0 / (2 * rate * 10 ** (ebno_db / 10))
    y = 1.0 - 2.0 * codewords + rng.normal(0.0, np.sqrt(s2), codewords.shape)
    return 2.0 * y / s2


def check_ml_agreement(spec: CodeSpec | None = None, frames: int = 100, ebno_db: float = 2.0, seed: int = 0) -> Check:
    spec = spec or toy_spec()
    rng = np.random.default_rng(seed)
    msgs = rng.integers(0, 2, (frames, spec.k), dtype=np.uint8)
    llr = awgn_llr(encode(spec, msgs), spec.rate, ebno_db, rng)
    out = SCLDecoder(spec, 1 << spec.k).decode(llr)
    for f in range(frames):
        ml = ml_oracle(spec, llr[f])
        if not np.array_equal(out.codewords[f, 0], ml.codeword):
            return Check("scl_equals_ml", False, f + 1, counterexample={"frame": f, "llr": llr[f].tolist()})
    return Check("scl_equals_ml", True, frames, f"({spec.N},{spec.k}) code, L = 2^k, {ebno_db} dB")


def check_roundtrip(spec: CodeSpec, count: int = 1000, list_size: int = 4, seed: int = 0, label: str = "") -> Check:
    rng = np.random.default_rng(seed)
    msgs = rng.integers(0, 2, (count, spec.k), dtype=np.uint8)
    llr = np.where(encode(spec, msgs) == 0, 10.0, -10.0)
    out = SCLDecoder(spec, list_size).decode(llr)
    bad = np.flatnonzero((out.messages[:, 0] != msgs).any(axis=1))
    name = f"noiseless_roundtrip[{label or f'{spec.N},{spec.k}'}]"
    if len(bad):
        return Check(name, False, count, counterexample={"message": msgs[bad[0]].tolist()})
    return Check(name, True, count)


def check_linearity(spec: CodeSpec, count: int = 1000, seed: int = 0) -> Check:
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, (count, spec.k), dtype=np.uint8)
    b = rng.integers(0, 2, (count, spec.k), dtype=np.uint8)
    ok = np.array_equal(encode(spec, a ^ b), encode(spec, a) ^ encode(spec, b))
    return Check(f"encode_linearity[{spec.N},{spec.k}]", ok, count)


def check_injectivity(spec: CodeSpec) -> Check:
    from rowmerge.codec import all_messages

    if spec.k > 16:
        raise ValueError("injectivity check enumerates 2^k codewords; k <= 16")
    cw = encode(spec, all_messages(spec.k))
    distinct = len(np.unique(np.packbits(cw, axis=1), axis=0))
    return Check(f"encode_injective[{spec.N},{spec.k}]", distinct == 1 << spec.k, 1 << spec.k)


def check_dynamic_constraints(spec: CodeSpec, frames: int = 200, list_size: int = 8, seed: int = 0) -> Check:
    rng = np.random.default_rng(seed)
    msgs = rng.integers(0, 2, (frames, spec.k), dtype=np.uint8)
    llr = awgn_llr(encode(spec, msgs), spec.rate, 1.0, rng)
    out = SCLDecoder(spec, list_size).decode(llr)
    name = f"dynamic_frozen_respected[{spec.N},{spec.k}]"
    for pos, src in spec.dynamic_frozen.items():
        if (out.u[..., pos] != out.u[..., src]).any():
            return Check(name, False, frames, counterexample={"pos": pos, "src": src})
    if (out.u[..., list(spec.static_frozen)] != 0).any():
        return Check(name, False, frames, "static frozen bit set")
    if not np.array_equal(polar_transform(out.u), out.codewords):
        return Check(name, False, frames, "codeword differs from u G")
    return Check(name, True, frames * out.u.shape[1])


def suite_codec(seed: int = 0) -> list[Check]:
    toy = toy_spec()
    big = [build(7, 3, 2, 1)[0], build(7, 4, 1, 0)[0]]
    out = [
        _timed(lambda: check_ml_agreement(toy, seed=seed)),
        _timed(lambda: check_injectivity(toy)),
        _timed(lambda: check_linearity(toy, seed=seed)),
        _timed(lambda: check_roundtrip(toy, seed=seed)),
        _timed(lambda: check_dynamic_constraints(toy, seed=seed)),
    ]
    for spec in big:
        out.append(_timed(lambda: check_linearity(spec, seed=seed)))
        out.append(_timed(lambda: check_roundtrip(spec, seed=seed)))
        out.append(_timed(lambda: check_dynamic_constraints(spec, seed=seed)))
    return out


SUITES = ("weights", "theorems", "appendix", "codec")


def run_suite(name: str, ns: Sequence[int] | None = None, seed: int = 0) -> list[Check]:
    if name == "weights":
        return suite_weights(ns or range(2, 8), seed)
    if name == "theorems":
        return suite_merged_rows(seed)
    if name == "appendix":
        return suite_pairs(ns or (5,))
    if name == "codec":
        return suite_codec(seed)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
