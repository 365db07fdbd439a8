"""Per-prime constructions for GL(2, q), with Sylow facts and cyclic-subgroup counts."""

import argparse

from semichar.constructions import gl2_suite, gl2_sylow_facts


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("q", type=int, nargs="*", default=[2, 3, 4, 5])
    args = ap.parse_args()

    for q in args.q:
        facts = gl2_sylow_facts(q)
        print(f"GL(2,{q}), order {facts.order}, valuations {facts.valuations}")
        for c in facts.cyclic_counts:
            print(f"  cyclic subgroups of order {c.k}: {c.subgroups} (q(q-1)/2 = {c.expected})")
        for l, n in facts.monomial_count.items():
            print(f"  l={l}: {n} monomial matrices vs Sylow order {facts.q_part(l)}")
        for l, rep in gl2_suite(q).items():
            print("  " + rep.summary())
            for note in rep.notes:
                print(f"      {note}")
        print()


if __name__ == "__main__":
    main()
