#!/usr/bin/env python3
"""Query-scaling experiment.

Builds basis representations for ring families of growing size and tabulates
metered oracle queries against the brute-force enumeration channel, then fits
a power law in k.  The algorithmic column stays polynomial in k = log2 of the
family parameter while the brute column doubles with every step.

Usage: python scripts/bench_queries.py [--family modular|matrix2]
       [--k-min N] [--k-max N] [--backend exact|sampled] [--seed N] [--json]
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ringbox.cli import RunConfig, bench_queries  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=("modular", "matrix2"), default="modular")
    ap.add_argument("--k-min", type=int, default=4)
    ap.add_argument("--k-max", type=int, default=14)
    ap.add_argument("--backend", choices=("exact", "sampled"), default="sampled")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    cfg = RunConfig(
        command="bench-queries",
        family=args.family,
        k_min=args.k_min,
        k_max=args.k_max,
        backend=args.backend,
        seed=args.seed,
    )
    rows, exponent = bench_queries(cfg)
    if args.json:
        print(json.dumps({"rows": rows, "fitted_exponent": exponent}, indent=2))
        return
    print(f"family={args.family} backend={args.backend} seed={args.seed}")
    print(f"{'k':>3} {'add':>7} {'mul':>6} {'total':>7} {'brute':>9} {'ratio':>9}")
    for r in rows:
        ratio = r["brute_total"] / max(1, r["total"])
        print(
            f"{r['k']:>3} {r['add']:>7} {r['mul']:>6} {r['total']:>7} "
            f"{r['brute_total']:>9} {ratio:>9.1f}"
        )
    print(f"fitted exponent of total queries in k: {exponent:.3f}")


if __name__ == "__main__":
    main()
