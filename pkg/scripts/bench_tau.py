"""Sweep the query fraction and fit how work scales against 1/tau.

Builds one majority index over a Zipf corpus, runs a fixed set of random
ranges at tau = 2^-1 .. 2^-smax, and prints a CSV row per tau plus the
fitted log-log slope.  Sequence operations should grow linearly in 1/tau,
so the slope lands near 1.0.
"""

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from rfq import IndexConfig, build_majority_index
from rfq.corpus import zipf_string


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10**6)
    ap.add_argument("--sigma", type=int, default=256)
    ap.add_argument("--skew", type=float, default=1.1)
    ap.add_argument("--corpus-seed", type=int, default=7)
    ap.add_argument("--range-seed", type=int, default=123)
    ap.add_argument("--trade", type=int, default=8)
    ap.add_argument("--ranges", type=int, default=60)
    ap.add_argument("--smax", type=int, default=8, help="smallest tau is 2^-smax")
    ap.add_argument("--min-scale", type=float, default=15.0)
    ap.add_argument("--max-scale", type=float, default=19.0)
    ap.add_argument("--verify-mode", choices=("check_lemma", "rank"), default="rank")
    args = ap.parse_args()

    data = zipf_string(args.n, args.sigma, skew=args.skew, seed=args.corpus_seed)
    cfg = IndexConfig(trade=args.trade, verify_mode=args.verify_mode,
                      build_check="never")
    t0 = time.time()
    idx = build_majority_index(data, cfg)
    print(f"# build: {time.time() - t0:.1f}s, n={args.n}, sigma={args.sigma}, "
          f"trade={args.trade}", file=sys.stderr)

    rng = np.random.default_rng(args.range_seed)
    lens = (2 ** rng.uniform(args.min_scale, args.max_scale, size=args.ranges))
    lens = lens.astype(np.int64)
    starts = rng.integers(1, args.n - lens + 1)

    print("tau,mean_ops,mean_candidates,median_ns")
    xs, ys = [], []
    for s in range(1, args.smax + 1):
        tau = 2.0 ** -s
        ops, cands, times = [], [], []
        for lo, ln in zip(starts, lens):
            idx.query_majorities(int(lo), int(lo + ln - 1), tau)
            d = idx.diagnostics
            ops.append(d.ops.sequence_ops)
            cands.append(d.candidates)
            times.append(d.elapsed_ns)
        mean_ops = sum(ops) / len(ops)
        print(f"{tau},{mean_ops:.1f},{sum(cands) / len(cands):.1f},"
              f"{int(np.median(times))}")
        xs.append(math.log(1.0 / tau))
        ys.append(math.log(max(mean_ops, 1e-9)))
    slope = float(np.polyfit(xs, ys, 1)[0])
    print(f"# slope: {slope:.4f}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
