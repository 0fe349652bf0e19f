"""Encoding c = u T G and successive-cancellation list decoding.

Decoding runs in the pre-transformed (u') domain: static frozen positions
are forced to 0, a dynamic frozen position copies the path's earlier
decision at its source, and information positions fork.  The decoder is
vectorised over a batch of frames and over the list, so one call handles
``(frames, N)`` LLRs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LLR_CLAMP = 40.0


def polar_transform(u: np.ndarray) -> np.ndarray:
    """x = u G over the last axis (length 2^n), butterfly in place on a copy."""
    x = np.array(u, dtype=np.uint8, copy=True)
    lead = x.shape[:-1]
    N = x.shape[-1]
    h = 1
    while h < N:
        v = x.reshape(*lead, N // (2 * h), 2, h)
        v[..., 0, :] ^= v[..., 1, :]
        h *= 2
    return x


def expand_messages(spec, msgs: np.ndarray) -> np.ndarray:
    """Messages (..., k) -> pre-transformed u' vectors (..., N)."""
    msgs = np.asarray(msgs, dtype=np.uint8)
    if msgs.shape[-1] != spec.k:
        raise ValueError(f"message length {msgs.shape[-1]} != k = {spec.k}")
    u = np.zeros(msgs.shape[:-1] + (spec.N,), dtype=np.uint8)
    u[..., list(spec.info_set)] = msgs
    if spec.dynamic_frozen:
        pos = list(spec.dynamic_frozen)
        src = list(spec.dynamic_frozen.values())
        u[..., pos] = u[..., src]
    return u


def encode(spec, msg) -> np.ndarray:
    """Codeword(s) for message(s) of length k; accepts a single vector or a batch."""
    return polar_transform(expand_messages(spec, msg))


def hard_penalty(llr: np.ndarray, bits: np.ndarray) -> np.ndarray:
    """|llr| where the bit disagrees with the sign of llr (llr >= 0 favours 0)."""
    return np.where((llr < 0) != (bits != 0), np.abs(llr), 0.0)


def codeword_metric(llr: np.ndarray, codewords: np.ndarray) -> np.ndarray:
    """Soft discrepancy: sum of |llr| over positions contradicting the hard decision."""
    return hard_penalty(llr, codewords).sum(axis=-1)


@dataclass
class DecodeResult:
    message: np.ndarray
    codeword: np.ndarray
    path_metric: float
    list_rank: int


@dataclass
class BatchDecode:
    """Decoder output for a batch, paths sorted best first along axis 1."""

    messages: np.ndarray  # (F, P, k)
    codewords: np.ndarray  # (F, P, N)
    metrics: np.ndarray  # (F, P)
    u: np.ndarray  # (F, P, N)


def _gather(a: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Per-frame path gather: out[f, p] = a[f, idx[f, p]]."""
    F, P = a.shape[:2]
    flat = (idx + (np.arange(F) * P)[:, None]).ravel()
    return a.reshape(F * P, *a.shape[2:]).take(flat, axis=0).reshape(F, idx.shape[1], *a.shape[2:])


class SCLDecoder:
    """Batched SCL decoder for one code and one list size."""

    def __init__(self, spec, list_size: int = 32):
        if list_size < 1:
            raise ValueError("list size must be at least 1")
        self.spec = spec
        self.L = int(list_size)
        N = spec.N
        kind = np.zeros(N, dtype=np.int8)  # 0 static, 1 info, 2 dynamic
        kind[list(spec.info_set)] = 1
        kind[list(spec.dynamic_frozen)] = 2
        self.kind = kind
        self.src = dict(spec.dynamic_frozen)
        self._info_prefix = np.concatenate([[0], np.cumsum(kind == 1)])

    def _subtree_has_info(self, lo: int, size: int) -> bool:
        return self._info_prefix[lo + size] > self._info_prefix[lo]

    def _frozen_subtree(self, lam: np.ndarray, lo: int):
        # Decisions are fixed here, and with min-sum updates the leaf penalties
        # of a subtree add up to the penalty of its codeword against lam, so
        # the leaves need not be visited one by one.
        size = lam.shape[-1]
        F, P = lam.shape[:2]
        u = np.zeros((F, P, size), dtype=np.uint8)
        for i in range(lo, lo + size):
            if self.kind[i] == 2:
                u[:, :, i - lo] = self.u[:, :, self.src[i]]
        self.u[:, :, lo : lo + size] = u
        x = polar_transform(u) if u.any() else u
        self.pm = self.pm + hard_penalty(lam, x).sum(axis=-1)
        return x, None

    def decode(self, llr: np.ndarray) -> BatchDecode:
        llr = np.clip(np.atleast_2d(np.asarray(llr, dtype=np.float64)), -LLR_CLAMP, LLR_CLAMP)
        F, N = llr.shape
        if N != self.spec.N:
            raise ValueError(f"expected {self.spec.N} LLRs per frame, got {N}")
        self.pm = np.zeros((F, 1))
        self.u = np.zeros((F, 1, N), dtype=np.uint8)
        x, _ = self._node(llr[:, None, :], 0)
        order = np.argsort(self.pm, axis=1, kind="stable")
        pm = np.take_along_axis(self.pm, order, axis=1)
        u = _gather(self.u, order)
        x = _gather(x, order)
        msgs = u[..., list(self.spec.info_set)]
        return BatchDecode(msgs, x, pm, u)

    def _node(self, lam: np.ndarray, lo: int):
        """Decode leaves [lo, lo + size); returns (partial codeword, ancestry into lam's paths)."""
        size = lam.shape[-1]
        if size == 1:
            return self._leaf(lam[..., 0], lo)
        if not self._subtree_has_info(lo, size):
            return self._frozen_subtree(lam, lo)
        h = size // 2
        a, b = lam[..., :h], lam[..., h:]
        left = np.copysign(np.minimum(np.abs(a), np.abs(b)), a * b)
        xl, anc_l = self._node(left, lo)
        if anc_l is not None:
            a = _gather(a, anc_l)
            b = _gather(b, anc_l)
        right = b + np.where(xl == 0, a, -a)
        xr, anc_r = self._node(right, lo + h)
        if anc_r is not None:
            xl = _gather(xl, anc_r)
            anc = anc_r if anc_l is None else _gather(anc_l, anc_r)
        else:
            anc = anc_l
        return np.concatenate([xl ^ xr, xr], axis=-1), anc

    def _leaf(self, lam: np.ndarray, i: int):
        kind = self.kind[i]
        if kind != 1:
            if kind == 0:
                bit = np.zeros(lam.shape, dtype=np.uint8)
            else:
                bit = self.u[:, :, self.src[i]]
            self.pm = self.pm + hard_penalty(lam, bit)
            self.u[:, :, i] = bit
            return bit[..., None], None
        F, P = lam.shape
        mag = np.abs(lam)
        neg = lam < 0
        # candidate 2p is (path p, bit 0), 2p + 1 is (path p, bit 1)
        cand = np.empty((F, 2 * P))
        cand[:, 0::2] = self.pm + np.where(neg, mag, 0.0)
        cand[:, 1::2] = self.pm + np.where(neg, 0.0, mag)
        keep = min(2 * P, self.L)
        if keep == 2 * P:
            sel = np.broadcast_to(np.arange(2 * P), (F, 2 * P))
        else:
            sel = np.argsort(cand, axis=1, kind="stable")[:, :keep]
        parent = sel // 2
        bit = (sel % 2).astype(np.uint8)
        self.pm = np.take_along_axis(cand, sel, axis=1)
        self.u = _gather(self.u, parent)
        self.u[:, :, i] = bit
        return bit[..., None], parent


def decode_scl(spec, llr, list_size: int = 32) -> list[DecodeResult]:
    """SCL-decode a single frame; results best first."""
    out = SCLDecoder(spec, list_size).decode(np.asarray(llr)[None, :])
    return [
        DecodeResult(out.messages[0, p], out.codewords[0, p], float(out.metrics[0, p]), p)
        for p in range(out.metrics.shape[1])
    ]


def decode_sc(spec, llr) -> DecodeResult:
    return decode_scl(spec, llr, 1)[0]


ML_MAX_K = 20


def all_messages(k: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Messages for integers in [start, stop); bit i of the integer is message bit i."""
    stop = (1 << k) if stop is None else stop
    ints = np.arange(start, stop, dtype=np.int64)
    return ((ints[:, None] >> np.arange(k)) & 1).astype(np.uint8)


def ml_oracle(spec, llr) -> DecodeResult:
    """Exhaustive soft-decision ML decoding; ties go to the smallest message integer."""
    if spec.k > ML_MAX_K:
        raise ValueError(f"ML oracle limited to k <= {ML_MAX_K}, got {spec.k}")
    llr = np.clip(np.asarray(llr, dtype=np.float64), -LLR_CLAMP, LLR_CLAMP)
    best = None
    chunk = 1 << 14
    for start in range(0, 1 << spec.k, chunk):
        msgs = all_messages(spec.k, start, min(start + chunk, 1 << spec.k))
        metric = codeword_metric(llr, encode(spec, msgs))
        idx = int(np.argmin(metric))
        if best is None or metric[idx] < best[0]:
            best = (float(metric[idx]), msgs[idx])
    metric, msg = best
    return DecodeResult(msg, encode(spec, msg), metric, 0)
