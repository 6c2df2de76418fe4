"""Command-line front end: build, query, verify, bench, info.

Exit codes: 0 success, 1 verification failure, 2 usage or domain errors,
3 malformed or incompatible index files.  The seed for randomized verbs
comes from --seed, then the RFQ_SEED environment variable, then 0.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
import time

import numpy as np

from .config import IndexConfig, space_preset
from .errors import ConfigError, DomainError, FormatError, RangeError, RfqError
from .indexfile import IndexBundle
from .verify import inject_fault, verify_index


def _read_input(path: str, fmt: str):
    """Returns (values list | None, tokens list | None)."""
    if fmt == "tokens":
        with open(path, "r", encoding="utf-8") as fh:
            toks = fh.read().split()
        return None, toks
    with open(path, "rb") as fh:
        data = fh.read()
    if fmt == "bytes":
        return list(data), None
    if fmt == "u32le":
        if len(data) % 4:
            raise DomainError(f"u32le input length {len(data)} not a multiple of 4")
        return np.frombuffer(data, dtype="<u4").astype(np.int64).tolist(), None
    raise DomainError(f"unknown input format {fmt!r}")


def _assemble_config(args) -> IndexConfig:
    cfg = space_preset() if args.space_preset else IndexConfig()
    overrides = {}
    for name in ("trade", "chunk_len", "verify_mode", "arity", "family_min_n", "build_check"):
        v = getattr(args, name)
        if v is not None:
            overrides[name] = v
    if args.compressed:
        overrides["compressed"] = True
    if args.full_family_range:
        overrides["full_family_range"] = True
    return cfg.with_(**overrides) if overrides else cfg


def _seed_of(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("RFQ_SEED")
    return int(env) if env else 0


def _space_lines(rep: dict) -> list[str]:
    n = rep["n"]
    lines = [
        f"n {n}",
        f"sigma {rep['sigma']}",
        f"entropy_h0 {rep['entropy_h0']:.4f} bits/symbol",
    ]
    for key in ("sequence_bits", "listing_bits", "candidate_bits", "anchor_bits",
                "anchor_prev_bits", "distinct_bits"):
        lines.append(f"{key} {rep[key]}")
    lines.append(f"total_bits {rep['total_bits']}")
    lines.append(f"bits_per_symbol {rep['total_bits'] / n:.3f}")
    return lines


def _cmd_build(args) -> int:
    values, tokens = _read_input(args.input, args.format)
    cfg = _assemble_config(args)
    t0 = time.perf_counter()
    if tokens is not None:
        bundle = IndexBundle.from_tokens(tokens, cfg)
    else:
        bundle = IndexBundle.from_values(values, cfg)
    build_s = time.perf_counter() - t0
    out = args.output or args.input + ".rfq"
    bundle.save(out)
    rep = bundle.size_report()
    rep["build_seconds"] = round(build_s, 3)
    rep["output"] = out
    if args.json:
        print(json.dumps(rep))
    else:
        for line in _space_lines(rep):
            print(line)
        print(f"build_seconds {rep['build_seconds']}")
        print(f"wrote {out}")
    return 0


def _cmd_query(args) -> int:
    bundle = IndexBundle.load(args.index)
    if args.kind in ("majority", "minority") and args.tau is None:
        raise DomainError(f"{args.kind} queries need --tau")
    if args.kind == "majority":
        res = bundle.query_majorities(args.lo, args.hi, args.tau, verify=args.verify_mode)
        pairs = res
        diag = bundle.majority.diagnostics
    elif args.kind == "minority":
        hit = bundle.query_minority(args.lo, args.hi, args.tau, strategy=args.strategy)
        pairs = [] if hit is None else [hit]
        diag = bundle.minority.diagnostics
    elif args.kind == "mode":
        pairs = [bundle.query_mode(args.lo, args.hi)]
        diag = bundle.majority.diagnostics
    else:
        raise DomainError(f"unknown query kind {args.kind!r}")
    if args.json:
        print(json.dumps({
            "result": [[sym, occ] for sym, occ in pairs],
            "diagnostics": diag.as_dict(),
        }))
    else:
        for sym, occ in pairs:
            print(f"{sym} {occ}")
    return 0


def _cmd_verify(args) -> int:
    bundle = IndexBundle.load(args.index)
    seed = _seed_of(args)
    if args.inject_fault:
        witness = inject_fault(bundle, seed=seed)
        if witness is None:
            print("fault injection: no single-flag candidate found; removal masked")
            return 1
        if args.json:
            print(json.dumps(witness, default=str))
        else:
            t, b = witness["family"]
            print(f"removed candidate flag at position {witness['removed_bit']} "
                  f"(tier {t}, scale {b})")
            print(f"witness query: majorities [{witness['lo']}, {witness['hi']}] "
                  f"tau={witness['tau']} ({witness['verify']})")
            print(f"corrupted index: {witness['got']}")
            print(f"oracle:          {witness['want']}")
        return 0
    report = verify_index(bundle, queries=args.queries, seed=seed)
    if args.json:
        print(json.dumps({
            "queries": report.queries,
            "mismatches": report.mismatches[:10],
            "elapsed_s": report.elapsed_s,
            "seed": report.seed,
            "ok": report.ok,
        }, default=str))
    else:
        print(report.summary())
        for mm in report.mismatches[:5]:
            print(f"  {mm}")
    return 0 if report.ok else 1


def _cmd_bench(args) -> int:
    bundle = IndexBundle.load(args.index)
    n = bundle.seq.n
    rng = np.random.default_rng(_seed_of(args))
    taus = [float(t) for t in args.taus.split(",")] if args.kind != "mode" else [0.0]
    print("tau,len,kind,median_ns,candidates,selects,ranks,partial_ranks")
    for tau in taus:
        rows = []
        for _ in range(args.queries):
            lo = int(rng.integers(1, n + 1))
            hi = int(rng.integers(lo, n + 1))
            if args.kind == "majority":
                bundle.majority.query_majorities(lo, hi, tau)
                d = bundle.majority.diagnostics
            elif args.kind == "minority":
                bundle.minority.query_minority(lo, hi, tau)
                d = bundle.minority.diagnostics
            else:
                bundle.majority.query_mode(lo, hi)
                d = bundle.majority.diagnostics
            rows.append((hi - lo + 1, d.elapsed_ns, d.candidates, d.ops.selects,
                         d.ops.ranks, d.ops.partial_ranks))
        med = [statistics.median(col) for col in zip(*rows)]
        print(f"{tau},{med[0]:.0f},{args.kind},{med[1]:.0f},{med[2]:.1f},"
              f"{med[3]:.1f},{med[4]:.1f},{med[5]:.1f}")
    return 0


def _cmd_info(args) -> int:
    bundle = IndexBundle.load(args.index)
    rep = bundle.size_report()
    cfg = bundle.config
    rep["config"] = {
        "trade": cfg.trade, "chunk_len": cfg.chunk_len, "verify_mode": cfg.verify_mode,
        "compressed": cfg.compressed, "arity": cfg.arity,
        "family_min_n": cfg.family_min_n, "full_family_range": cfg.full_family_range,
    }
    rep["majority_families"] = len(bundle.majority.candidate_flags)
    rep["minority_families"] = len(bundle.minority.distinct_flags)
    domain = "tokens" if bundle.tokens is not None else (
        "ints" if bundle.originals is not None else "dense")
    rep["symbol_domain"] = domain
    if args.json:
        print(json.dumps(rep))
    else:
        for line in _space_lines(rep):
            print(line)
        for k in ("majority_families", "minority_families", "symbol_domain"):
            print(f"{k} {rep[k]}")
        print(f"config {rep['config']}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rfq",
        description="Compressed index for range majority/minority/mode queries "
                    "with the frequency threshold chosen at query time.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="index a sequence file")
    b.add_argument("input")
    b.add_argument("-o", "--output", default=None)
    b.add_argument("--format", choices=("bytes", "u32le", "tokens"), default="bytes")
    b.add_argument("--trade", type=int, default=None,
                   help="space/time knob g; 1 stores everything, larger g shrinks "
                        "the index and slows queries by about g^2")
    b.add_argument("--chunk-len", type=int, default=None)
    b.add_argument("--verify-mode", choices=("check_lemma", "rank"), default=None)
    b.add_argument("--compressed", action="store_true")
    b.add_argument("--arity", type=int, default=None)
    b.add_argument("--family-min-n", type=int, default=None)
    b.add_argument("--full-family-range", action="store_true")
    b.add_argument("--build-check", choices=("auto", "always", "never"), default=None)
    b.add_argument("--space-preset", action="store_true",
                   help="start from the small-footprint configuration")
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=_cmd_build)

    q = sub.add_parser("query", help="run one query against a built index")
    q.add_argument("index")
    q.add_argument("kind", choices=("majority", "minority", "mode"))
    q.add_argument("lo", type=int)
    q.add_argument("hi", type=int)
    q.add_argument("--tau", type=float, default=None)
    q.add_argument("--verify-mode", choices=("check_lemma", "rank"), default=None)
    q.add_argument("--strategy", choices=("listing", "flags"), default="listing")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=_cmd_query)

    v = sub.add_parser("verify", help="cross-check the index against brute force")
    v.add_argument("index")
    v.add_argument("--queries", type=int, default=1000)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--inject-fault", action="store_true",
                   help="corrupt one candidate flag and show a query that notices")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=_cmd_verify)

    be = sub.add_parser("bench", help="time queries, one CSV row per tau")
    be.add_argument("index")
    be.add_argument("--taus", default="0.5,0.25,0.125,0.0625")
    be.add_argument("--queries", type=int, default=200)
    be.add_argument("--kind", choices=("majority", "minority", "mode"), default="majority")
    be.add_argument("--seed", type=int, default=None)
    be.set_defaults(func=_cmd_bench)

    i = sub.add_parser("info", help="describe a built index")
    i.add_argument("index")
    i.add_argument("--json", action="store_true")
    i.set_defaults(func=_cmd_info)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (RangeError, DomainError, ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RfqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
