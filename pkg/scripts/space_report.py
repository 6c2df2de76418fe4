"""Report index size against the entropy and plain-encoding envelopes.

Builds the full bundle (majority + minority sides) over a Zipf corpus in
both storage modes and prints the component sizes plus the ratio of the
serialized index to its target budget: 3.0 * n * H0 + 2^20 bits when
compressed, 1.5 * n * ceil(lg sigma) + 2^20 bits when plain.
"""

import argparse
import math
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from rfq import space_preset
from rfq.corpus import zipf_string
from rfq.indexfile import IndexBundle


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10**6)
    ap.add_argument("--sigma", type=int, default=256)
    ap.add_argument("--skew", type=float, default=1.3)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--trade", type=int, default=None,
                    help="override the space preset's sparsification factor")
    args = ap.parse_args()

    data = zipf_string(args.n, args.sigma, skew=args.skew, seed=args.seed)
    for compressed in (False, True):
        cfg = space_preset().with_(compressed=compressed, build_check="never")
        if args.trade is not None:
            cfg = cfg.with_(trade=args.trade)
        t0 = time.time()
        bundle = IndexBundle.from_values(data, cfg)
        built = time.time() - t0
        rep = bundle.size_report()
        n, sigma, h0 = rep["n"], rep["sigma"], rep["entropy_h0"]
        total = rep["total_bits"]
        if compressed:
            cap = 3.0 * n * h0 + 2**20
            base = f"3.0*n*H0 + 2^20 (H0 = {h0:.3f})"
        else:
            cap = 1.5 * n * math.ceil(math.log2(sigma)) + 2**20
            base = f"1.5*n*ceil(lg sigma) + 2^20 (sigma = {sigma})"
        mode = "compressed" if compressed else "plain"
        print(f"[{mode}] built in {built:.1f}s")
        for key in ("sequence_bits", "listing_bits", "candidate_bits",
                    "anchor_bits", "anchor_prev_bits", "distinct_bits"):
            print(f"  {key:18s} {rep[key] / 1e6:10.3f} Mbit")
        print(f"  {'total (serialized)':18s} {total / 1e6:10.3f} Mbit")
        print(f"  budget {base}: {cap / 1e6:.3f} Mbit")
        print(f"  ratio: {total / cap:.3f} {'OK' if total <= cap else 'OVER'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
