"""Code construction: RM-rule information set, merged triples and merged pairs."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Sequence

from rowmerge.binmath import compose, permute_value, popcount
from rowmerge.mergerules import (
    MergeTriple,
    TripleEnsemble,
    canonicalize,
    ensemble,
    enumerate_triples,
    select_pairs,
)
from rowmerge.polarmat import row_int, unpack


class BuildError(ValueError):
    """The requested code cannot be built (no admissible triple, m too large)."""


@dataclass(frozen=True)
class CodeSpec:
    """A pre-transformed polar-like code.

    ``dynamic_frozen`` maps a frozen position to the information position it
    copies (u'_pos = u'_src), which is the row-merging pre-transform: row
    ``src`` of T has ones at ``src`` and at every position copying it.
    """

    n: int
    info_set: tuple[int, ...]
    static_frozen: tuple[int, ...]
    dynamic_frozen: dict[int, int] = field(default_factory=dict)
    design_d: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "info_set", tuple(sorted(self.info_set)))
        object.__setattr__(self, "static_frozen", tuple(sorted(self.static_frozen)))
        object.__setattr__(self, "dynamic_frozen", dict(sorted(self.dynamic_frozen.items())))
        parts = list(self.info_set) + list(self.static_frozen) + list(self.dynamic_frozen)
        if sorted(parts) != list(range(self.N)):
            raise ValueError("info_set, static_frozen and dynamic_frozen must partition [0, N)")
        info = set(self.info_set)
        for pos, src in self.dynamic_frozen.items():
            if src not in info:
                raise ValueError(f"dynamic frozen {pos} copies {src}, which is not an information position")
            if src >= pos:
                raise ValueError(f"dynamic frozen {pos} must copy an earlier position, got {src}")

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def k(self) -> int:
        return len(self.info_set)

    @property
    def rate(self) -> float:
        return self.k / self.N

    @property
    def pretransform(self) -> list[tuple[int, int]]:
        """Off-diagonal ones (row, col) of T, col > row."""
        return sorted((src, pos) for pos, src in self.dynamic_frozen.items())

    def dense_pretransform(self):
        import numpy as np

        t = np.eye(self.N, dtype=np.uint8)
        for a, b in self.pretransform:
            t[a, b] = 1
        return t

    def generator_rows(self) -> list[int]:
        """Packed merged rows, one per information position in ascending order."""
        merged = {a: row_int(self.n, a) for a in self.info_set}
        for pos, src in self.dynamic_frozen.items():
            merged[src] ^= row_int(self.n, pos)
        return [merged[a] for a in self.info_set]

    @classmethod
    def polar_like(cls, n: int, info_set: Sequence[int], design_d: int | None = None) -> "CodeSpec":
        info = sorted(set(info_set))
        frozen = sorted(set(range(1 << n)) - set(info))
        if design_d is None:
            design_d = 1 << min(popcount(a) for a in info) if info else 0
        return cls(n, tuple(info), tuple(frozen), {}, design_d)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "info_set": list(self.info_set),
            "static_frozen": list(self.static_frozen),
            "dynamic_frozen": [{"pos": p, "src": s} for p, s in self.dynamic_frozen.items()],
            "design_d": self.design_d,
            "meta": self.meta,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "CodeSpec":
        return cls(
            n=int(d["n"]),
            info_set=tuple(d["info_set"]),
            static_frozen=tuple(d["static_frozen"]),
            dynamic_frozen={int(e["pos"]): int(e["src"]) for e in d.get("dynamic_frozen", [])},
            design_d=int(d.get("design_d", 0)),
            meta=dict(d.get("meta", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> "CodeSpec":
        return cls.from_dict(json.loads(text))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(indent=1) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "CodeSpec":
        return cls.from_json(Path(path).read_text())


def rm_info_set(n: int, r: int) -> tuple[int, ...]:
    """Rows whose binary representation has at least n - r ones."""
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n, got r={r}, n={n}")
    return tuple(j for j in range(1 << n) if popcount(j) >= n - r)


def rm_k(n: int, r: int) -> int:
    return sum(comb(n, p) for p in range(n - r, n + 1))


@dataclass
class BuildReport:
    n: int
    r: int
    m: int
    overlap: int
    base: MergeTriple | None
    triples: list[tuple[int, int, int]]
    pairs: list[tuple[int, int]]
    permutation: tuple[int, ...]
    k: int
    d: int

    @property
    def table_entry(self) -> tuple[int, int, int]:
        return (self.m, self.k, self.d)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "m": self.m,
            "overlap": self.overlap,
            "base": self.base.to_dict(range(self.m)) if self.base else None,
            "triples": [list(t) for t in self.triples],
            "pairs": [list(p) for p in self.pairs],
            "permutation": list(self.permutation),
            "table_entry": list(self.table_entry),
        }


def _spread_key(members: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(members))


def best_permutation(triples: Sequence[MergeTriple]) -> tuple[int, ...]:
    """Bit relabelling maximising the smallest triple member.

    Ties go to the larger sorted member tuple, then to the smaller
    permutation.  Exhaustive, so limited to n <= 8; wider codes keep the
    identity.
    """
    n = triples[0].n
    identity = tuple(range(n))
    if n > 8:
        return identity
    members = [x for t in triples for x in t.members]
    best_key, best_perm = None, identity
    for perm in itertools.permutations(range(n)):
        key = _spread_key([permute_value(x, perm) for x in members])
        if best_key is None or key > best_key:
            best_key, best_perm = key, perm
    return best_perm


def admissible_bases(n: int, ell: int, m: int) -> list[MergeTriple]:
    """Distinct canonical triples at level ``ell`` whose ensemble admits ``m`` shifts."""
    seen = {}
    for t in enumerate_triples(n, ell):
        try:
            c, _ = canonicalize(t)
        except ValueError:
            continue
        if c.kappa + 1 >= m:
            seen[c.members] = c
    return [seen[key] for key in sorted(seen)]


def max_extra_bits(n: int, r: int) -> int:
    """Largest m for which ``build(n, r, m)`` succeeds (0 if no triple exists)."""
    ell = n - r - 1
    bases = admissible_bases(n, ell, 1) if n <= 12 else []
    return max((b.kappa + 1 for b in bases), default=0)


def _assemble(n: int, info_base, triples, pairs, design_d: int, meta: dict) -> CodeSpec:
    info = set(info_base)
    dynamic: dict[int, int] = {}
    for members in triples:
        a, b, c = sorted(members)
        info.add(a)
        dynamic[b] = a
        dynamic[c] = a
    for t, v in pairs:
        dynamic[v] = t
    static = set(range(1 << n)) - info - set(dynamic)
    return CodeSpec(n, tuple(info), tuple(static), dynamic, design_d, meta)


def distance_guard(n: int, info_base, triples, design_d: int, list_size: int):
    """Acceptance test for a candidate pair: no coset word lighter than ``design_d``.

    Merging (t, v) replaces g_t by g_t + g_v, so every new codeword lies in
    g_t + g_v + C', where C' is the current code with t frozen.
    """
    from rowmerge.weightcalc import coset_min_weight

    def accept(pairs, cand) -> bool:
        t, v = cand
        reduced = _assemble(n, set(info_base) - {t}, triples, pairs, design_d, {})
        word = unpack(row_int(n, t) ^ row_int(n, v), 1 << n)
        return coset_min_weight(reduced, word, list_size) >= design_d

    return accept


DEFAULT_GUARD_LIST = 1024


def build(
    n: int,
    r: int,
    m: int,
    overlap: int = 0,
    pair_budget: int | None = None,
    guard_list_size: int = DEFAULT_GUARD_LIST,
) -> tuple[CodeSpec, BuildReport]:
    """Construct the code RM(n, r) + m merged triples + merged pairs.

    ``pair_budget=None`` keeps every pair the greedy selection accepts.
    Each candidate pair is screened by a list search of size
    ``guard_list_size`` for codewords lighter than the design distance;
    ``guard_list_size=0`` switches the screen off (plain greedy).
    """
    if overlap not in (0, 1):
        raise ValueError("overlap must be 0 or 1")
    if m < 0:
        raise ValueError("m must be non-negative")
    ell = n - r - 1
    rm = rm_info_set(n, r)
    chosen: TripleEnsemble | None = None
    perm = tuple(range(n))
    triples: list[MergeTriple] = []
    if m >= 1:
        if not enumerate_triples(n, ell):
            raise BuildError(f"no admissible triple for n={n}, r={r} (level {ell})")
        bases = admissible_bases(n, ell, m)
        if not bases:
            best = max_extra_bits(n, r)
            raise BuildError(f"m={m} exceeds kappa + 1 = {best} for every canonical triple at n={n}, r={r}")
        best_key = None
        for base in bases:
            ens = ensemble(base, m)
            p = best_permutation(ens.triples)
            key = _spread_key([permute_value(x, p) for x in ens.members])
            if best_key is None or key > best_key:
                best_key, chosen, perm = key, ens, p
        triples = [t.permuted(perm) for t in chosen.triples]

    d = 1 << (n - r)
    members = {x for t in triples for x in t.members}
    triple_sets = [t.members for t in triples]
    accept = distance_guard(n, rm, triple_sets, d, guard_list_size) if guard_list_size else None
    pairs = select_pairs(n, ell, overlap, excluded=members, budget=pair_budget, accept=accept) if ell >= 1 else []

    meta = {
        "r": r,
        "m": m,
        "overlap": overlap,
        "triples": [sorted(t.members) for t in triples],
        "pairs": [list(p) for p in pairs],
        "permutation": list(perm),
    }
    spec = _assemble(n, rm, triple_sets, pairs, d, meta)
    report = BuildReport(
        n=n,
        r=r,
        m=m,
        overlap=overlap,
        base=chosen.base if chosen else None,
        triples=[tuple(sorted(t.members)) for t in triples],
        pairs=pairs,
        permutation=perm,
        k=spec.k,
        d=d,
    )
    return spec, report


@dataclass(frozen=True)
class Exhaustive:
    pass


@dataclass(frozen=True)
class Sampled:
    count: int
    seed: int = 0


@dataclass(frozen=True)
class ListSearch:
    list_size: int
    trials: int = 10
    seed: int = 0


def validate(spec: CodeSpec, effort):
    """Weight report for ``spec`` at the requested effort level."""
    from rowmerge import weightcalc

    if isinstance(effort, Exhaustive):
        if spec.k > weightcalc.EXHAUSTIVE_MAX_K:
            raise ValueError(
                f"exhaustive spectrum needs k <= {weightcalc.EXHAUSTIVE_MAX_K}, got k={spec.k}; "
                "use Sampled or ListSearch"
            )
        return weightcalc.spectrum_exhaustive(spec)
    if isinstance(effort, Sampled):
        if effort.count < 1:
            raise ValueError("Sampled count must be positive")
        return weightcalc.sampled_min_weight(spec, effort.count, seed=effort.seed)
    if isinstance(effort, ListSearch):
        return weightcalc.min_weight_list_search(spec, effort.list_size, effort.trials, seed=effort.seed)
    raise TypeError(f"unknown effort {effort!r}")


__all__ = [
    "BuildError",
    "Exhaustive",
    "ListSearch",
    "Sampled",
    "validate",
    "BuildReport",
    "CodeSpec",
    "admissible_bases",
    "best_permutation",
    "build",
    "compose",
    "max_extra_bits",
    "rm_info_set",
    "rm_k",
]
