"""Validity rules for merged row triples, their canonical form and shift ensembles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

from rowmerge.binmath import (
    bits_of,
    dominates,
    from_bits,
    level_set,
    permute_value,
    popcount,
    shift_permutation,
)


class TripleClass(str, Enum):
    DISJOINT = "disjoint"
    INTERSECTING = "intersecting"
    INVALID = "invalid"


@dataclass(frozen=True)
class Classification:
    kind: TripleClass
    reason: str = ""

    def __bool__(self) -> bool:
        return self.kind is not TripleClass.INVALID


def check_triple(n: int, i: int, j: int, k: int) -> Classification:
    """Classify ``(i, j, k)`` against the disjoint and intersecting merge conditions.

    The first violated clause is reported in ``reason``.
    """
    if len({i, j, k}) != 3:
        return Classification(TripleClass.INVALID, "indices are not distinct")
    if any(not 0 <= x < (1 << n) for x in (i, j, k)):
        return Classification(TripleClass.INVALID, f"index outside [0, 2^{n})")
    ell = popcount(i)
    if popcount(j) != ell:
        return Classification(TripleClass.INVALID, "i1(b_i) != i1(b_j)")
    if ell < 2:
        return Classification(TripleClass.INVALID, "i1(b_i) < 2")
    ij, ik, jk = i & j, i & k, j & k
    if ij == ik == jk == 0:
        if popcount(k) != 2:
            return Classification(TripleClass.INVALID, "disjoint triple needs i1(b_k) = 2")
        return Classification(TripleClass.DISJOINT)
    if not ij == ik == jk:
        return Classification(TripleClass.INVALID, "pairwise common 1-bits are neither all empty nor all equal")
    w = popcount(ij)
    if popcount(k) != w + 2:
        return Classification(TripleClass.INVALID, f"intersecting triple needs i1(b_k) = |W| + 2 = {w + 2}")
    if ell < popcount(k):
        return Classification(TripleClass.INVALID, "intersecting triple needs l >= i1(b_k)")
    return Classification(TripleClass.INTERSECTING)


@dataclass(frozen=True)
class MergeTriple:
    """A validated row triple; ``i < j`` is enforced on construction."""

    n: int
    i: int
    j: int
    k: int
    kind: TripleClass = field(init=False)

    def __post_init__(self):
        c = check_triple(self.n, self.i, self.j, self.k)
        if not c:
            raise ValueError(f"invalid triple ({self.i}, {self.j}, {self.k}) at n={self.n}: {c.reason}")
        if self.i > self.j:
            i, j = self.j, self.i
            object.__setattr__(self, "i", i)
            object.__setattr__(self, "j", j)
        object.__setattr__(self, "kind", c.kind)

    @property
    def ell(self) -> int:
        return popcount(self.i)

    @property
    def common(self) -> tuple[int, ...]:
        return bits_of(self.i & self.j)

    @property
    def union(self) -> int:
        return self.i | self.j | self.k

    @property
    def t0(self) -> int:
        return self.n - popcount(self.union)

    @property
    def t1(self) -> int:
        return popcount(self.i & self.j & self.k)

    @property
    def kappa(self) -> int:
        return self.t0 * (self.t1 > 0) + self.t1

    @property
    def members(self) -> tuple[int, int, int]:
        return (self.i, self.j, self.k)

    @property
    def design_d(self) -> int:
        return 1 << (self.ell + 1)

    def permuted(self, perm: Sequence[int]) -> "MergeTriple":
        return MergeTriple(self.n, *(permute_value(x, perm) for x in self.members))

    def to_dict(self, shifts: Iterable[int] = ()) -> dict:
        return {
            "n": self.n,
            "i": self.i,
            "j": self.j,
            "k": self.k,
            "class": self.kind.value,
            "W": list(self.common),
            "t0": self.t0,
            "t1": self.t1,
            "kappa": self.kappa,
            "shifts": list(shifts),
        }


def canonical_violations(n: int, i: int, j: int, k: int) -> list[str]:
    """Names of the canonical-form clauses (orderings of bit groups) that fail."""
    mask = (1 << n) - 1
    union = i | j | k
    common = i & j & k
    w_ij = i & j
    i_x, j_x, k_x = bits_of(i & ~w_ij), bits_of(j & ~w_ij), bits_of(k & ~w_ij)
    bad = []
    if not dominates(bits_of(union), bits_of(~union & mask)):
        bad.append("union ones above union zeros")
    if not dominates(bits_of(common), bits_of(union & ~common)):
        bad.append("common ones above the rest of the union")
    if not (dominates(k_x, j_x) and dominates(k_x, i_x)):
        bad.append("k extras above i and j extras")
    if dominates(i_x, j_x) or dominates(j_x, i_x):
        bad.append("i and j extras interleaved")
    return bad


def is_canonical(t: MergeTriple) -> bool:
    return not canonical_violations(t.n, t.i, t.j, t.k)


def canonicalize(t: MergeTriple) -> tuple[MergeTriple, tuple[int, ...]]:
    """Relabel bit positions so the triple takes the canonical form.

    Returns the relabelled triple and the permutation ``perm`` (bit ``l``
    moves to ``perm[l]``).  A triple already in canonical form is returned
    with the identity.  Otherwise the lexicographically smallest canonical
    ``(i, j, k)`` is produced: union zeros at the bottom, the common bits on
    top, the extra bits of ``k`` just below them, and the extras of ``i`` and
    ``j`` interleaved in the remaining slots.
    """
    n = t.n
    if is_canonical(t):
        return t, tuple(range(n))
    w = t.i & t.j
    zeros = bits_of(~t.union & ((1 << n) - 1))
    i_x, j_x, k_x = bits_of(t.i & ~w), bits_of(t.j & ~w), bits_of(t.k & ~w)
    e = len(i_x)
    if e < 2:
        raise ValueError("cannot interleave the extras of i and j: each has a single extra bit")
    base = len(zeros)
    slots = list(range(base, base + 2 * e))
    i_slots = slots[: e - 1] + [slots[e]]
    j_slots = [slots[e - 1]] + slots[e + 1 :]
    k_slots = list(range(base + 2 * e, base + 2 * e + len(k_x)))
    w_slots = list(range(base + 2 * e + len(k_x), n))
    perm = [0] * n
    for src, dst in zip(
        list(zeros) + list(i_x) + list(j_x) + list(k_x) + list(bits_of(w)),
        list(range(base)) + i_slots + j_slots + k_slots + w_slots,
    ):
        perm[src] = dst
    out = t.permuted(perm)
    assert is_canonical(out), out
    return out, tuple(perm)


def canonicalize_exhaustive(t: MergeTriple) -> MergeTriple:
    """Lexicographically smallest canonical relabelling by trying all n! permutations."""
    best = None
    for perm in itertools.permutations(range(t.n)):
        vals = [permute_value(x, perm) for x in t.members]
        i, j = sorted(vals[:2])
        if canonical_violations(t.n, i, j, vals[2]):
            continue
        key = (i, j, vals[2])
        if best is None or key < best:
            best = key
    if best is None:
        raise ValueError("no canonical relabelling exists")
    return MergeTriple(t.n, *best)


@dataclass(frozen=True)
class TripleEnsemble:
    base: MergeTriple
    shifts: tuple[int, ...]
    triples: tuple[MergeTriple, ...]

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(x for t in self.triples for x in t.members)

    def to_dict(self) -> dict:
        d = self.base.to_dict(self.shifts)
        d["triples"] = [list(t.members) for t in self.triples]
        return d


def ensemble(t: MergeTriple, m: int) -> TripleEnsemble:
    """The first ``m`` left-circular shifts of a canonical triple."""
    if not is_canonical(t):
        raise ValueError("ensemble needs a triple in canonical form; call canonicalize first")
    if m < 1:
        raise ValueError("m must be at least 1")
    if m > t.kappa + 1:
        raise ValueError(f"m={m} exceeds kappa + 1 = {t.kappa + 1} (t0={t.t0}, t1={t.t1})")
    triples = tuple(t.permuted(shift_permutation(theta, t.n)) for theta in range(m))
    members = [x for tr in triples for x in tr.members]
    if len(set(members)) != len(members):
        raise ValueError("shifted triples overlap")
    return TripleEnsemble(t, tuple(range(m)), triples)


def enumerate_triples(n: int, ell: int) -> list[MergeTriple]:
    """All valid triples with ``i < j`` in N_ell, ascending in ``(i, j, k)``."""
    if n > 12:
        raise ValueError("enumeration is limited to n <= 12")
    if ell < 2 or ell > n:
        return []
    full = (1 << n) - 1
    out = []
    level = level_set(n, ell)
    for a, i in enumerate(level):
        for j in level[a + 1 :]:
            w = i & j
            free = bits_of(full & ~(i | j))
            cands = []
            for pair in itertools.combinations(free, 2):
                k = w | from_bits(pair)
                if check_triple(n, i, j, k):
                    cands.append(k)
            out.extend(MergeTriple(n, i, j, k) for k in sorted(cands))
    return out


def select_pairs(
    n: int,
    ell: int,
    overlap: int,
    excluded: Iterable[int] = (),
    budget: int | None = None,
    accept: Callable[[list[tuple[int, int]], tuple[int, int]], bool] | None = None,
) -> list[tuple[int, int]]:
    """Greedy pairing of rows t in N_{ell+1} with rows v in N_ell, v > t.

    Sweeps t in descending order and takes the largest unused admissible v
    with ``i1(b_t & b_v) == overlap``.  When ``accept`` is given, a candidate
    is kept only if ``accept(pairs_so_far, candidate)`` is true; otherwise the
    next smaller v is tried.  At most ``budget`` pairs are returned.
    """
    if ell < 1:
        return []
    banned = set(excluded)
    used: set[int] = set()
    pairs = []
    ts = [t for t in level_set(n, ell + 1) if t not in banned]
    vs = [v for v in level_set(n, ell) if v not in banned]
    for t in reversed(ts):
        if budget is not None and len(pairs) >= budget:
            break
        for v in reversed(vs):
            if v <= t:
                break
            if v in used or popcount(t & v) != overlap:
                continue
            if accept is not None and not accept(pairs, (t, v)):
                continue
            used.add(v)
            pairs.append((t, v))
            break
    return pairs
