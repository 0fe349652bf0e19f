"""Acceptance criteria, one test per criterion (criterion 8 also has a supplement).

Run ``pytest tests/test_acceptance.py -v`` to get the PASS/FAIL summary
section at the end of the report.
"""

import time

import numpy as np
import pytest

from rowmerge.checks import (
    check_ensemble,
    check_formula_exhaustive,
    check_formula_random,
    check_lower_bound_exhaustive,
    check_ml_agreement,
    check_pairs,
    check_roundtrip,
    check_single_row_distance,
)
from rowmerge.cli import main, table1_rows
from rowmerge.mergerules import MergeTriple, canonicalize
from rowmerge.simulator import SimConfig, run
from rowmerge.weightcalc import min_weight_list_search

# frames per grid point for the FER criterion: three times what 200 errors
# need at the lower envelope edge (200 / 1.5e-2)
FER_FRAME_CAP = 40_000


@pytest.fixture
def detail(record_property):
    def note(text):
        record_property("detail", text)
        print(text)

    return note


def _all_pass(checks):
    failed = [c for c in checks if not c.passed]
    return not failed, failed


def test_criterion_1_formula_matches_xor(detail):
    t0 = time.perf_counter()
    checks = [check_formula_exhaustive(n) for n in range(2, 6)]
    checks += [check_formula_random(n, count=10_000, max_size=10, seed=n) for n in (6, 7)]
    dt = time.perf_counter() - t0
    ok, failed = _all_pass(checks)
    detail(f"{sum(c.cases for c in checks)} row sets, {dt:.1f} s")
    assert ok, failed
    assert dt < 60


def test_criterion_2_lower_bound_n4(detail):
    t0 = time.perf_counter()
    c = check_lower_bound_exhaustive(4)
    dt = time.perf_counter() - t0
    detail(f"{c.cases} subsets, {dt:.1f} s")
    assert c.passed, c.counterexample
    assert c.cases == 2**16 - 1 and dt < 60


def test_criterion_3_pair_bounds_n5(detail):
    t0 = time.perf_counter()
    checks = [check_pairs(5, 2, disjoint_only=True), check_pairs(5, 2, disjoint_only=False)]
    dt = time.perf_counter() - t0
    detail(f"{checks[0].cases} + {checks[1].cases} sums, {dt:.1f} s")
    for c in checks:
        assert c.passed, c.counterexample
        assert c.cases % 65536 == 0
    assert dt < 600


def test_criterion_4_shift_ensemble_n7(detail):
    base, _ = canonicalize(MergeTriple(7, 73, 70, 112))
    assert base.kappa == 1
    t0 = time.perf_counter()
    c = check_ensemble(base, max_size=3, random_count=1_000_000, seed=2024)
    dt = time.perf_counter() - t0
    detail(f"{c.cases} sums, {c.detail}, {dt:.1f} s")
    assert c.passed, c.counterexample
    assert dt < 900


def test_criterion_5_table_entries(code66, code100, detail):
    spec66, rep66 = code66
    spec100, rep100 = code100
    assert spec66.k == 66 and spec100.k == 100
    d66 = min_weight_list_search(spec66, 50_000).min_weight
    d100 = min_weight_list_search(spec100, 50_000).min_weight
    rows = {(r["n"], r["r"]): r for r in table1_rows()}
    detail(f"list search d: {d66} and {d100}; (6,2) status {rows[(6, 2)]['status']}")
    assert (d66, d100) == (16, 8)
    # the n = 6 entry is investigative: it must be reported, not reproduced
    assert rows[(6, 2)]["status"] == "mismatch" and rows[(6, 2)]["achieved"] is None


def test_criterion_6_polar_like_distance(detail):
    t0 = time.perf_counter()
    c = check_single_row_distance(count=20, seed=6, max_n=5, max_k=16)
    dt = time.perf_counter() - t0
    detail(f"{c.cases} codes, {dt:.1f} s")
    assert c.passed, c.counterexample
    assert dt < 120


def test_criterion_7_decoder(code66, code100, detail):
    checks = [check_ml_agreement(frames=100, ebno_db=2.0, seed=7)]
    checks += [check_roundtrip(s, count=1000, seed=7) for s, _ in (code66, code100)]
    detail(", ".join(f"{c.name}={'ok' if c.passed else 'FAIL'}" for c in checks))
    ok, failed = _all_pass(checks)
    assert ok, failed


def _fer_envelope(results):
    """(ok, reasons) for the four-point envelope on a result list."""
    first, last = results[0], results[-1]
    reasons = []
    if not 1.5e-2 <= first.fer <= 1.5e-1:
        reasons.append(f"FER {first.fer:.3g} at {first.ebno_db} dB outside [1.5e-2, 1.5e-1]")
    if first.errors < 200:
        reasons.append(f"only {first.errors} errors at {first.ebno_db} dB")
    fers = [r.fer for r in results]
    if any(b >= a for a, b in zip(fers, fers[1:])):
        reasons.append(f"not strictly decreasing: {fers}")
    if not last.fer * 50 <= first.fer:
        reasons.append(f"ratio {first.fer / max(last.fer, 1e-300):.3g} below 50")
    return not reasons, reasons


def _fer_run(spec, grid):
    t0 = time.perf_counter()
    res = run(SimConfig(spec, grid, list_size=32, min_errors=200, max_frames=FER_FRAME_CAP, seed=8))
    return res, time.perf_counter() - t0


def _fmt(res):
    return "; ".join(f"{r.ebno_db} dB {r.errors}/{r.frames}" for r in res)


def test_criterion_8_fer_envelope(code66, detail):
    res, dt = _fer_run(code66[0], [4.443, 4.943, 5.443, 5.943])
    ok, reasons = _fer_envelope(res)
    detail(f"{_fmt(res)} ({dt:.0f} s)")
    assert dt < 1800
    assert ok, reasons


def test_criterion_8_supplement_grid_shifted_down_2_943_db(code66, detail):
    # Same envelope on the grid 2.943 dB lower.  Reported next to the
    # criterion above, not as a replacement for it.
    res, dt = _fer_run(code66[0], [1.5, 2.0, 2.5, 3.0])
    ok, reasons = _fer_envelope(res)
    detail(f"{_fmt(res)} ({dt:.0f} s)")
    assert ok, reasons


def test_criterion_9_simulate_is_byte_identical(code66, tmp_path, detail):
    spec_path = tmp_path / "c66.json"
    code66[0].save(spec_path)
    outs = []
    for name in ("a.csv", "b.csv"):
        argv = ["simulate", "--spec", str(spec_path), "--snr", "1.5,2.5", "--list", "8",
                "--min-errors", "50", "--max-frames", "5000", "--seed", "99", "--workers", "2",
                "--csv-out", str(tmp_path / name)]
        assert main(argv) == 0
        outs.append((tmp_path / name).read_bytes())
    detail(f"{len(outs[0])} bytes each")
    assert outs[0] == outs[1]
