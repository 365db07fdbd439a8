from __future__ import annotations

import numpy as np

from ..config import DEFAULT_LIMITS, Limits
from ..engine import (
    Semicharacter,
    build_relations,
    extend_from_l_part,
    local_relations,
    semichar_group,
    verify_on_lattice,
)
from ..groups import GroupTable, l_part, power, valuation
from .report import ConstructionReport, certify


def _table(G) -> GroupTable:
    return G if isinstance(G, GroupTable) else G.table


def cyclic_sylows(G, l: int) -> list[list[int]]:
    """The cyclic l-Sylow subgroups of G as lists g^0, g^1, ... of a generator's powers.

    Raises ValueError unless some element has order equal to the l-part of |G|.
    """
    T = _table(G)
    la = l ** valuation(T.order, l)
    if la == 1:
        raise ValueError(f"{l} does not divide |G| = {T.order}")
    gens = np.nonzero(T.orders == la)[0]
    if len(gens) == 0:
        top = max(int(o) for o in T.orders if la % int(o) == 0)
        raise ValueError(f"Sylow {l}-subgroups are not cyclic: largest {l}-element order is {top} < {la}")
    seen: set[int] = set()
    out = []
    for g in gens.tolist():
        if g in seen:
            continue
        powers = [power(T, g, k) for k in range(la)]
        seen.update(x for k, x in enumerate(powers) if k % l)
        out.append(powers)
    return out


def cyclic_sylow_semichars(G, l: int, exact: bool = False,
                           limits: Limits = DEFAULT_LIMITS) -> ConstructionReport:
    """One F_l-valued function per cyclic l-Sylow subgroup, extended to all of G.

    On the i-th Sylow <g> the function sends g^k to k/l; it vanishes on the
    rest of G[l^inf]. Two distinct Sylows meet inside their l-th powers, where
    every function is already zero, so the definitions agree.
    """
    T = _table(G)
    sylows = cyclic_sylows(T, l)
    A = l_part(T, l)
    pos = A.position
    local = local_relations(T, A.members)
    produced = []
    for powers in sylows:
        num = np.zeros(len(A), dtype=np.int64)
        for k, x in enumerate(powers):
            num[pos[x]] = k % l
        f = Semicharacter(num, l)
        if not verify_on_lattice(local, f):
            raise ArithmeticError("Sylow function failed on the l-part")
        produced.append(extend_from_l_part(T, l, f, A.members))
    report = ConstructionReport(
        prime=l,
        claimed_lower_bound=len(sylows),
        target_valuation=valuation(T.order, l),
        produced=produced,
        domain=getattr(G, "name", "") or "G",
        domain_size=T.order,
        label="cyclic-sylow",
    )
    report.notes.append(f"{len(sylows)} cyclic Sylow {l}-subgroups of order {len(sylows[0])}")
    certify(report, build_relations(T))
    if exact and T.order <= limits.snf_cap:
        report.exact_valuation = valuation(semichar_group(T, limits).order, l)
    return report
