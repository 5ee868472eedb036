#!/usr/bin/env python3
"""Quick wall-clock comparison of the two counting engines on the corpus."""

import argparse
import sys
import time

from cwlab.constructions import corpus_system
from cwlab.counting import fast_count, oracle_count


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--systems", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    t_fast = t_slow = 0.0
    for i in range(args.systems):
        system = corpus_system(args.seed, i)
        t0 = time.perf_counter()
        a = fast_count(system)
        t_fast += time.perf_counter() - t0
        t0 = time.perf_counter()
        b = oracle_count(system)
        t_slow += time.perf_counter() - t0
        if a != b:
            print(f"MISMATCH at index {i}: fast={a} oracle={b}")
            return 2
    print(f"{args.systems} systems: fast {t_fast:.2f}s, oracle {t_slow:.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
