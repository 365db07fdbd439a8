"""Conjecture check over the builtin corpus, one line per group.

    python3 scripts/run_corpus.py --max-order 200
"""

import argparse
import time

from semichar.config import CapExceeded
from semichar.engine import conjecture_check
from semichar.families import builtin_corpus, parse_family


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=None)
    args = ap.parse_args()

    total = time.perf_counter()
    held = 0
    specs = builtin_corpus(args.max_order)
    print(f"{'group':<12} {'|G|':>5} {'|G^|':>28}  factors")
    for spec in specs:
        G = parse_family(spec)
        try:
            v = conjecture_check(G)
        except CapExceeded as err:
            print(f"{spec:<12} {G.order:>5} {'skipped':>28}  {err}")
            continue
        held += v.holds
        flag = "" if v.holds else "  <-- VIOLATION"
        print(f"{spec:<12} {G.order:>5} {v.semichar_order:>28}  {list(v.invariant_factors)}{flag}")
    print(f"\n{held}/{len(specs)} groups satisfy |G| divides |G^|  ({time.perf_counter() - total:.1f}s)")


if __name__ == "__main__":
    main()
