"""Cycle-class construction on S_n against the formula, val_l(n!) and the exact SNF value."""

import argparse

from semichar.constructions import legendre_valuation, symmetric_cycle_semichars


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=7)
    args = ap.parse_args()

    print(f"{'n':>2} {'l':>2} {'l^e':>4} {'rank':>5} {'formula':>7} {'val_l(n!)':>9} {'exact':>6}")
    for n in range(2, args.max_n + 1):
        for l in (2, 3, 5, 7):
            if l > n:
                continue
            r = symmetric_cycle_semichars(n, l, exact=n <= 6)
            exact = "-" if r.exact_valuation is None else r.exact_valuation
            print(f"{n:>2} {l:>2} {r.extras['cycle_length']:>4} {r.independence_rank:>5} "
                  f"{r.extras['formula']:>7} {legendre_valuation(n, l):>9} {exact:>6}")


if __name__ == "__main__":
    main()
