"""Command-line front end: ``rowmerge {construct,analyze,verify,simulate,table1}``."""

from __future__ import annotations

import argparse
import json
import logging
import secrets
import sys
from pathlib import Path

from rowmerge import checks, simulator
from rowmerge.codebuilder import (
    BuildError,
    CodeSpec,
    DEFAULT_GUARD_LIST,
    Exhaustive,
    ListSearch,
    build,
    max_extra_bits,
    rm_k,
    validate,
)

# Reference (m, k, d) entries for the RM(n, r) grid; None marks an empty cell.
REFERENCE_TABLE = {
    (6, 2): (1, 23, 16),
    (6, 3): None,
    (6, 4): None,
    (6, 5): None,
    (7, 2): None,
    (7, 3): (2, 66, 16),
    (7, 4): (1, 100, 8),
    (7, 5): None,
}
# overlap used for the merged pairs of each reference code
REFERENCE_OVERLAP = {(7, 3): 1, (7, 4): 0}


def parse_range(text: str) -> list[int]:
    """'5' -> [5]; '2..5' -> [2, 3, 4, 5]; '2,4' -> [2, 4]."""
    out: list[int] = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def parse_grid(text: str) -> list[float]:
    """Comma list of values, or ``start:stop:step`` with stop included."""
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        if step <= 0:
            raise argparse.ArgumentTypeError("grid step must be positive")
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 10) for i in range(count)]
    return [float(x) for x in text.split(",") if x]


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(63)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _load_spec(path: str) -> CodeSpec:
    return CodeSpec.load(path)


def cmd_construct(args) -> int:
    try:
        spec, report = build(args.n, args.r, args.m, args.overlap, args.pair_budget, args.guard_list)
    except BuildError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = {"report": report.to_dict(), "k": spec.k, "design_d": spec.design_d}
    if args.out:
        spec.save(args.out)
        out["spec_path"] = str(args.out)
    else:
        out["spec"] = spec.to_dict()
    print(json.dumps(out, indent=2))
    return 0


def cmd_analyze(args) -> int:
    spec = _load_spec(args.spec)
    if args.mode == "exhaustive":
        effort = Exhaustive()
    else:
        effort = ListSearch(args.list_size, args.trials, _seed(args))
    try:
        rep = validate(spec, effort)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(rep.to_json(indent=2))
    return 0


def cmd_verify(args) -> int:
    ns = parse_range(args.n) if args.n else None
    results = checks.run_suite(args.suite, ns, seed=args.seed or 0)
    ok = all(c.passed for c in results)
    print(json.dumps({"suite": args.suite, "passed": ok, "checks": [c.to_dict() for c in results]}, indent=2))
    return 0 if ok else 1


def cmd_simulate(args) -> int:
    spec = _load_spec(args.spec)
    cfg = simulator.SimConfig(
        spec=spec,
        ebno_db_grid=args.snr,
        list_size=args.list,
        min_errors=args.min_errors,
        max_frames=args.max_frames,
        seed=_seed(args),
        workers=args.workers or simulator.default_workers(),
    )
    results = simulator.run(cfg)
    text = simulator.to_csv(results, timing=args.timing)
    if args.csv_out:
        Path(args.csv_out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.json_out:
        Path(args.json_out).write_text(simulator.to_json(results, timing=args.timing))
    for r in results:
        if r.capped:
            print(f"warning: {r.ebno_db} dB stopped at max_frames with {r.errors} errors", file=sys.stderr)
    return 0


def table1_rows(list_size: int = 0, seed: int = 0) -> list[dict]:
    rows = []
    for (n, r), ref in REFERENCE_TABLE.items():
        m = max_extra_bits(n, r)
        entry = None
        found_d = None
        if m:
            entry = (m, rm_k(n, r) + m, 1 << (n - r))
            if list_size:
                spec, _ = build(n, r, m, REFERENCE_OVERLAP.get((n, r), 0))
                found_d = validate(spec, ListSearch(list_size, 10, seed)).min_weight
        rows.append({
            "n": n,
            "r": r,
            "achieved": list(entry) if entry else None,
            "reference": list(ref) if ref else None,
            "status": "match" if entry == ref else "mismatch",
            "list_search_d": found_d,
        })
    return rows


def cmd_table1(args) -> int:
    rows = table1_rows(args.list_size, args.seed or 0)
    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    fmt = lambda e: "-" if e is None else "(" + ",".join(map(str, e)) + ")"
    print(f"{'n':>2} {'r':>2}  {'achieved':<12} {'reference':<12} status")
    for row in rows:
        line = f"{row['n']:>2} {row['r']:>2}  {fmt(row['achieved']):<12} {fmt(row['reference']):<12} {row['status']}"
        if row["list_search_d"] is not None:
            line += f"  (list search d={row['list_search_d']})"
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rowmerge", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a merged-row code")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--m", type=int, default=1)
    c.add_argument("--overlap", type=int, choices=(0, 1), default=0)
    c.add_argument("--pair-budget", type=int, default=None)
    c.add_argument("--guard-list", type=int, default=DEFAULT_GUARD_LIST,
                   help="list size of the distance screen on merged pairs (0 disables it)")
    c.add_argument("--out", type=Path)
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", help="weight spectrum of a code")
    a.add_argument("spec")
    a.add_argument("--mode", choices=("exhaustive", "list"), default="list")
    a.add_argument("--list-size", type=int, default=50_000)
    a.add_argument("--trials", type=int, default=10)
    a.add_argument("--seed", type=int)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("--suite", choices=checks.SUITES, required=True)
    v.add_argument("--n", help="width or range, e.g. 5 or 2..5")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="FER over AWGN with BPSK")
    s.add_argument("--spec", required=True)
    s.add_argument("--snr", type=parse_grid, required=True, help="Eb/N0 grid in dB: 'a,b,c' or 'start:stop:step'")
    s.add_argument("--list", type=int, default=simulator.DEFAULT_LIST)
    s.add_argument("--min-errors", type=int, default=simulator.DEFAULT_MIN_ERRORS)
    s.add_argument("--max-frames", type=int, default=simulator.DEFAULT_MAX_FRAMES)
    s.add_argument("--seed", type=int)
    s.add_argument("--workers", type=int, help=f"default: ${simulator.WORKERS_ENV} or 1")
    s.add_argument("--csv-out")
    s.add_argument("--json-out")
    s.add_argument("--timing", action="store_true", help="fill the elapsed_s column")
    s.set_defaults(func=cmd_simulate)

    t = sub.add_parser("table1", help="achievable (m, k, d) over the RM grid against the reference entries")
    t.add_argument("--list-size", type=int, default=0, help="also list-search d for each achievable entry")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_table1)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
