"""Monte Carlo frame error rates for BPSK over AWGN with SCL decoding.

Frames are generated in fixed-size blocks.  Block ``b`` draws its messages
and unit-variance noise from a Philox stream keyed by ``(seed, b)``, so a
frame's sample does not depend on the worker count or on the SNR point
(every grid point reuses the same messages and noise shape, scaled by its
own sigma).  A grid point stops at the first block boundary where the
running error count reaches ``min_errors``; blocks are always tallied in
order, so the stopping point is the same however the blocks were spread
over workers.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import beta

from rowmerge.codebuilder import CodeSpec
from rowmerge.codec import SCLDecoder, encode

log = logging.getLogger(__name__)

CSV_HEADER = ("ebno_db", "frames", "errors", "fer", "fer_low", "fer_high", "list_size", "seed", "elapsed_s")
WORKERS_ENV = "ROWMERGE_WORKERS"
DEFAULT_LIST = 32
DEFAULT_MIN_ERRORS = 200
DEFAULT_MAX_FRAMES = 1_000_000
BLOCK = 256


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def noise_sigma(ebno_db: float, rate: float) -> float:
    return float(np.sqrt(1.0 / (2.0 * rate * 10 ** (ebno_db / 10))))


def fer_confidence(errors: int, frames: int, level: float = 0.95) -> tuple[float, float]:
    """Clopper-Pearson interval for a binomial proportion."""
    if not 0 <= errors <= frames:
        raise ValueError("need 0 <= errors <= frames")
    if frames == 0:
        return 0.0, 1.0
    a = (1 - level) / 2
    low = 0.0 if errors == 0 else float(beta.ppf(a, errors, frames - errors + 1))
    high = 1.0 if errors == frames else float(beta.ppf(1 - a, errors + 1, frames - errors))
    return low, high


@dataclass
class SimConfig:
    spec: CodeSpec
    ebno_db_grid: Sequence[float]
    list_size: int = DEFAULT_LIST
    min_errors: int = DEFAULT_MIN_ERRORS
    max_frames: int = DEFAULT_MAX_FRAMES
    seed: int = 0
    workers: int = field(default_factory=default_workers)
    block_size: int = BLOCK

    def __post_init__(self):
        self.ebno_db_grid = [float(x) for x in self.ebno_db_grid]
        if not self.ebno_db_grid:
            raise ValueError("empty Eb/N0 grid")
        if self.min_errors < 1 or self.max_frames < 1 or self.list_size < 1:
            raise ValueError("min_errors, max_frames and list_size must be positive")
        if self.workers < 1 or self.block_size < 1:
            raise ValueError("workers and block_size must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass
class SimResult:
    ebno_db: float
    frames: int
    errors: int
    list_size: int
    seed: int
    elapsed_seconds: float = 0.0
    capped: bool = False  # stopped by max_frames before min_errors

    @property
    def fer(self) -> float:
        return self.errors / self.frames if self.frames else 0.0

    @property
    def interval(self) -> tuple[float, float]:
        return fer_confidence(self.errors, self.frames)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fer"] = self.fer
        d["fer_low"], d["fer_high"] = self.interval
        return d


def block_sample(spec: CodeSpec, seed: int, block: int, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Messages and unit-variance noise for one block of frames."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))
    msgs = rng.integers(0, 2, size=(size, spec.k), dtype=np.uint8)
    noise = rng.standard_normal((size, spec.N))
    return msgs, noise


_worker_state: dict = {}


def _init_worker(spec_json: str, list_size: int) -> None:
    spec = CodeSpec.from_json(spec_json)
    _worker_state["spec"] = spec
    _worker_state["decoder"] = SCLDecoder(spec, list_size)


def _run_block(args) -> int:
    seed, block, size, used, sigma = args
    spec = _worker_state["spec"]
    msgs, noise = block_sample(spec, seed, block, size)
    msgs, noise = msgs[:used], noise[:used]
    x = 1.0 - 2.0 * encode(spec, msgs)
    y = x + sigma * noise
    llr = 2.0 * y / sigma**2
    out = _worker_state["decoder"].decode(llr)
    return int((out.messages[:, 0, :] != msgs).any(axis=1).sum())


def _simulate_point(cfg: SimConfig, ebno_db: float, submit) -> SimResult:
    sigma = noise_sigma(ebno_db, cfg.spec.rate)
    bs = cfg.block_size
    n_blocks = -(-cfg.max_frames // bs)
    frames = errors = 0
    block = 0
    t0 = time.perf_counter()
    while block < n_blocks and errors < cfg.min_errors:
        wave = range(block, min(n_blocks, block + cfg.workers))
        jobs = [(cfg.seed, b, bs, min(bs, cfg.max_frames - b * bs), sigma) for b in wave]
        for job, e in zip(jobs, submit(jobs)):
            if errors >= cfg.min_errors:
                break  # later blocks of this wave are discarded
            frames += job[3]
            errors += e
        block = wave.stop
    elapsed = time.perf_counter() - t0
    capped = errors < cfg.min_errors
    log.info("Eb/N0 %.3f dB: %d/%d frame errors (%.1f s)", ebno_db, errors, frames, elapsed)
    return SimResult(ebno_db, frames, errors, cfg.list_size, cfg.seed, elapsed, capped)


def run(cfg: SimConfig) -> list[SimResult]:
    spec_json = cfg.spec.to_json()
    if cfg.workers == 1:
        _init_worker(spec_json, cfg.list_size)
        return [_simulate_point(cfg, s, lambda jobs: map(_run_block, jobs)) for s in cfg.ebno_db_grid]
    with ProcessPoolExecutor(cfg.workers, initializer=_init_worker, initargs=(spec_json, cfg.list_size)) as pool:
        return [_simulate_point(cfg, s, lambda jobs: pool.map(_run_block, jobs)) for s in cfg.ebno_db_grid]


def to_csv(results: Sequence[SimResult], timing: bool = False) -> str:
    """CSV text; ``elapsed_s`` is left empty unless ``timing`` so reruns compare byte for byte."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in results:
        low, high = r.interval
        w.writerow([
            repr(r.ebno_db),
            r.frames,
            r.errors,
            f"{r.fer:.6e}",
            f"{low:.6e}",
            f"{high:.6e}",
            r.list_size,
            r.seed,
            f"{r.elapsed_seconds:.3f}" if timing else "",
        ])
    return buf.getvalue()


def to_json(results: Sequence[SimResult], timing: bool = False) -> str:
    rows = []
    for r in results:
        d = r.to_dict()
        if not timing:
            d.pop("elapsed_seconds")
        rows.append(d)
    return json.dumps(rows, indent=2)


__all__ = [
    "CSV_HEADER",
    "SimConfig",
    "SimResult",
    "block_sample",
    "default_workers",
    "fer_confidence",
    "noise_sigma",
    "run",
    "to_csv",
    "to_json",
]
