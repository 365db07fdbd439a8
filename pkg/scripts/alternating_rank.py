"""Rank of the m/4-cycle functions on A_n[2^inf] for n = 8, 9.

The class count binom(n, 2) is compared with the F_2-rank actually realized,
and the linear relation among the functions is exhibited.
"""

import argparse

import numpy as np

from semichar.constructions import alternating_two_semichars
from semichar.zlattice import IntMatrix, nullspace_mod_p


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("n", type=int, nargs="*", default=[8])
    args = ap.parse_args()

    for n in args.n:
        r = alternating_two_semichars(n)
        print(r.summary())
        F = np.array([f.num for f in r.produced], dtype=np.int64) % 2
        # relations among the functions: left nullspace of F over F_2
        dim, rel = nullspace_mod_p(IntMatrix.from_dense(F.T.tolist()), 2)
        print(f"  {len(r.produced)} functions, {dim} independent relation(s)")
        for v in rel:
            support = sum(v)
            print(f"  relation with {support} terms; all ones: {support == len(r.produced)}")
        for note in r.notes:
            print(f"  note: {note}")


if __name__ == "__main__":
    main()
