"""Independent checks that avoid the lattice machinery entirely.

``brute_force_semichars`` finds every semicharacter of a small group by
backtracking over values f(g) in (1/ord g)Z/Z; ``abelian_type`` reads the
isomorphism type of a finite abelian group off its element-order statistics.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import lcm
from typing import Sequence

from sympy import factorint

from .groups import GroupTable


def _table(G) -> GroupTable:
    return G if isinstance(G, GroupTable) else G.table


def brute_force_semichars(G, max_order: int = 12) -> list[tuple[Fraction, ...]]:
    """All functions f: G -> Q/Z with f(gh) = f(g) + f(h) whenever gh = hg."""
    T = _table(G)
    n = T.order
    if n > max_order:
        raise ValueError(f"brute force is limited to |G| <= {max_order}")
    orders = [int(o) for o in T.orders]
    E = lcm(*orders)
    # relations (i, j, k) checked as soon as max(i, j, k) is assigned
    checks: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if T.m(i, j) == T.m(j, i):
                k = T.m(i, j)
                checks[max(i, j, k)].append((i, j, k))
    vals = [0] * n  # numerators over E
    out = []

    def extend(g: int):
        if g == n:
            out.append(tuple(Fraction(v, E) for v in vals))
            return
        step = E // orders[g]
        for a in range(orders[g]):
            vals[g] = a * step
            if all((vals[i] + vals[j] - vals[k]) % E == 0 for i, j, k in checks[g]):
                extend(g + 1)
        vals[g] = 0

    extend(0)
    return out


def _order_mod1(v: Sequence[Fraction]) -> int:
    return lcm(*[x.denominator for x in v]) if v else 1


def abelian_type(element_orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group from the multiset of element orders."""
    N = len(element_orders)
    if N == 0:
        raise ValueError("empty group")
    counts = Counter(element_orders)
    cyclic_parts: dict[int, list[int]] = {}
    for p, a in factorint(N).items():
        # s_k = log_p #{x : p^k x = 0}; the number of cyclic factors of order >= p^k is s_k - s_{k-1}
        s = [0]
        for k in range(1, a + 1):
            size = sum(c for o, c in counts.items() if (p**k) % o == 0)
            s.append(_log(size, p))
        at_least = [s[k] - s[k - 1] for k in range(1, a + 1)] + [0]
        parts = []
        for k in range(1, a + 1):
            parts += [p**k] * (at_least[k - 1] - at_least[k])
        cyclic_parts[p] = sorted(parts, reverse=True)
    width = max((len(v) for v in cyclic_parts.values()), default=0)
    factors = [1] * width
    for parts in cyclic_parts.values():
        for i, q in enumerate(parts):
            factors[i] *= q
    return tuple(sorted(f for f in factors if f > 1))


def _log(n: int, p: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise ArithmeticError("size is not a power of p")
        n //= p
        k += 1
    return k


def semichar_group_type(G) -> tuple[int, ...]:
    """Invariant factors of the semicharacter group found by brute force."""
    fns = brute_force_semichars(G)
    return abelian_type([_order_mod1(f) for f in fns])
