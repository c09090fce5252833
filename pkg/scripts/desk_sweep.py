#!/usr/bin/env python3
"""Desk-ring oracle-equivalence sweep.

Runs every derived operation over random ideal specs on the desk-scale ring
suite and cross-checks each answer against brute-force enumeration.  Prints
per-ring progress and a final tally (mismatches, swap-test decisions, loop
telemetry).  This is the same sweep the acceptance tests run, packaged as a
standalone experiment.

Usage: python scripts/desk_sweep.py [--backend exact|sampled]
       [--ideals-per-ring N] [--seed N]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from tests import test_acceptance as sweep_mod  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--backend", choices=("exact", "sampled"), default="exact")
    ap.add_argument("--ideals-per-ring", type=int, default=100)
    ap.add_argument("--seed", type=int, default=20260810)
    args = ap.parse_args()

    sweep_mod.IDEALS_PER_RING = args.ideals_per_ring
    eps = 1e-6 if args.backend == "exact" else 1e-3
    t0 = time.time()
    stats = sweep_mod._run_sweep(args.backend, eps, seed=args.seed)
    print(f"backend={args.backend} ideals/ring={args.ideals_per_ring}")
    print(f"checks:        {stats['checks']}")
    print(f"mismatches:    {len(stats['mismatches'])}")
    print(f"decisions:     {stats['decisions']}")
    print(f"prime calls:   {stats['prime_calls']} (false primes {stats['false_primes']})")
    print(f"loop trouble:  rounds={stats['rounds_violations']} "
          f"doubling={stats['doubling_violations']} "
          f"tensor={stats['tensor_violations']} lemma={stats['lemma_failures']}")
    print(f"elapsed:       {time.time() - t0:.1f}s")
    if stats["mismatches"]:
        for entry in stats["mismatches"][:20]:
            print("MISMATCH", entry)
        sys.exit(1)


if __name__ == "__main__":
    main()
