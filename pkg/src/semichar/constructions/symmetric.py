"""Semicharacters of symmetric and alternating groups built from long cycles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial, gcd, lcm, prod

import numpy as np
from sympy import isprime

from ..config import DEFAULT_LIMITS, CapExceeded, Limits
from ..engine import (
    Semicharacter,
    build_relations,
    enumerate_semichar_generators,
    extend_from_l_part,
    generated_subgroup,
    local_relations,
    pullback,
    semichar_group,
    subset_relations,
    verify_on_lattice,
)
from ..families import make_alternating, make_symmetric, symmetric_lpart
from ..groups import l_part, valuation
from ..zlattice import IntMatrix, nullspace_mod_p, quotient_group_generators, smith_normal_form
from .report import ConstructionReport, certify


def legendre_valuation(n: int, l: int) -> int:
    """val_l(n!) by summing floor(n / l^i); also checks it is below n/(l-1)."""
    if not isprime(l):
        raise ValueError(f"{l} is not prime")
    total, power = 0, l
    while power <= n:
        total += n // power
        power *= l
    if n > 0 and not total * (l - 1) < n:
        raise ArithmeticError("Legendre bound violated")
    return total


def cycle_class_count(n: int, k: int, l: int) -> int:
    """Number of k-cycles in S_n modulo pi ~ pi^i (gcd(i, l) = 1), k a power of l."""
    return comb(n, k) * factorial(k - 1) // (k - k // l)


class _CycleClasses:
    """Assigns each k-cycle a class id and the exponent i (mod l) with c = rep^i."""

    def __init__(self, k: int, l: int):
        self.k, self.l = k, l
        self.units = [i for i in range(1, k) if gcd(i, l) == 1] or [1]
        self.ids: dict[tuple[int, ...], int] = {}
        self.cache: dict[tuple[int, ...], tuple[int, int]] = {}

    def lookup(self, c: tuple[int, ...]) -> tuple[int, int]:
        hit = self.cache.get(c)
        if hit is not None:
            return hit
        k = self.k
        powers = {i: tuple(c[(j * i) % k] for j in range(k)) for i in self.units}
        i0 = min(powers, key=lambda i: powers[i])  # rep = c^i0
        rep = powers[i0]
        cid = self.ids.setdefault(rep, len(self.ids))
        exp = pow(i0, -1, k) % self.l if k > 1 else 1
        self.cache[c] = (cid, exp)
        return cid, exp


def _k_cycles(images: np.ndarray, k: int) -> list[tuple[int, ...]]:
    n = len(images)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = int(images[start])
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = int(images[x])
        if len(cyc) == k:
            out.append(tuple(cyc))
    return out


def cycle_functions(P: np.ndarray, k: int, l: int, square: bool = False) -> np.ndarray:
    """F_l-valued functions, one per class of k-cycles, on the permutations P.

    Row K at pi is the sum over k-cycles c of pi (of pi^2 when ``square``) in
    class K of the exponent of c relative to the class representative.
    """
    classes = _CycleClasses(k, l)
    if square:
        P = np.take_along_axis(P, P.astype(np.intp), axis=1)
    entries = []
    for col, images in enumerate(P):
        for c in _k_cycles(images, k):
            entries.append((*classes.lookup(c), col))
    F = np.zeros((len(classes.ids), len(P)), dtype=np.int64)
    for cid, exp, col in entries:
        F[cid, col] += exp
    return F % l


def _fl_rank(F: np.ndarray, l: int) -> int:
    if F.size == 0:
        return 0
    M = IntMatrix.from_sparse([{j: int(v) for j, v in enumerate(row) if v} for row in F], F.shape[1])
    dim, _ = nullspace_mod_p(M, l, basis=False)
    return F.shape[1] - dim


def symmetric_cycle_semichars(n: int, l: int, extend: bool | None = None, exact: bool = False,
                              limits: Limits = DEFAULT_LIMITS) -> ConstructionReport:
    """One function per class of l^e-cycles (l^e the largest l-power <= n) on S_n[l^inf].

    With ``extend`` (default for n <= 6) the functions are pushed to all of S_n
    and verified there; otherwise they are verified on the l-part alone.
    """
    if not isprime(l):
        raise ValueError(f"{l} is not prime")
    if l > n:
        raise ValueError(f"prime {l} exceeds degree {n}")
    k = 1
    while k * l <= n:
        k *= l
    if extend is None:
        extend = n <= 6
    expected = cycle_class_count(n, k, l)
    target = legendre_valuation(n, l)

    if extend:
        G = make_symmetric(n, limits)
        A = l_part(G.table, l)
        P = G.perm_array[list(A.members)]
        F = cycle_functions(P, k, l)
        local = local_relations(G.table, A.members)
        produced = []
        for row in F:
            f = Semicharacter(row, l)
            if not verify_on_lattice(local, f):
                raise ArithmeticError("cycle function failed on the l-part")
            produced.append(extend_from_l_part(G.table, l, f, A.members))
        lattice, domain, size = build_relations(G.table), f"S{n}", G.order
    else:
        S = symmetric_lpart(n, l, limits=limits)
        F = cycle_functions(S.perms, k, l)
        produced = [Semicharacter(row, l) for row in F]
        lattice, domain, size = subset_relations(S), f"S{n}[{l}^inf]", len(S)

    report = ConstructionReport(l, expected, target, produced, domain, size, label="symmetric-cycles")
    report.extras.update(cycle_length=k, class_count=len(F), formula=expected,
                         fl_rank=_fl_rank(F, l))
    if len(F) != expected:
        report.notes.append(f"class count {len(F)} differs from formula {expected}")
    certify(report, lattice)
    if exact and extend and size <= limits.snf_cap:
        report.exact_valuation = valuation(semichar_group(G, limits).order, l)
    return report


# transposition relations


@dataclass(frozen=True)
class TranspositionSystem:
    equations: int
    variables: int
    nullspace_dim: int
    basis: list[list[int]]


def transposition_relation_system(n: int) -> TranspositionSystem:
    """F_2 system: for each 4-subset, the six transpositions inside it sum to zero."""
    if n < 4:
        raise ValueError("need n >= 4")
    pairs = list(itertools.combinations(range(n), 2))
    col = {pr: i for i, pr in enumerate(pairs)}
    rows = []
    for quad in itertools.combinations(range(n), 4):
        rows.append({col[pr]: 1 for pr in itertools.combinations(quad, 2)})
    dim, basis = nullspace_mod_p(IntMatrix(len(rows), len(pairs), rows), 2)
    return TranspositionSystem(len(rows), len(pairs), dim, basis)


# alternating groups at l = 2


def _two_power_case(n: int) -> int | None:
    """m = 2^k with n in {m, m + 1} and k >= 3, else None."""
    for m in (n, n - 1):
        if m >= 8 and m & (m - 1) == 0:
            return m
    return None


def _v4_functions(G, members: tuple[int, ...]) -> list[Semicharacter]:
    """The four characters of the Klein group on {0,1,2,3}, zero elsewhere in members."""
    P = G.perm_array
    a = (1, 0, 3, 2)
    b = (2, 3, 0, 1)
    coords = {(0, 1, 2, 3): (0, 0), a: (1, 0), b: (0, 1), (3, 2, 1, 0): (1, 1)}
    out = []
    for s, t in ((0, 0), (1, 0), (0, 1), (1, 1)):
        num = np.zeros(len(members), dtype=np.int64)
        for i, g in enumerate(members):
            row = tuple(int(x) for x in P[g])
            if all(row[x] == x for x in range(4, len(row))) and row[:4] in coords:
                x, y = coords[row[:4]]
                num[i] = (s * x + t * y) % 2
        out.append(Semicharacter(num, 2))
    return out


def alternating_two_semichars(n: int, limits: Limits = DEFAULT_LIMITS) -> ConstructionReport:
    """2-valued semicharacters on A_n[2^inf] for n = 4, 5 and n in {2^k, 2^k + 1}, k >= 3."""
    m = _two_power_case(n)
    if n not in (4, 5) and m is None:
        raise ValueError(f"n = {n} is not 4, 5, 2^k or 2^k + 1 with k >= 3")
    target = valuation(factorial(n) // 2, 2)

    if m is None:
        G = make_alternating(n, limits)
        A = l_part(G.table, 2)
        local = local_relations(G.table, A.members)
        produced = []
        for f in _v4_functions(G, A.members):
            if not verify_on_lattice(local, f):
                raise ArithmeticError("Klein-group function failed on the 2-part")
            produced.append(extend_from_l_part(G.table, 2, f, A.members))
        report = ConstructionReport(2, 2, target, produced, f"A{n}", G.order, label="alternating-2")
        report.notes.append("characters of the Klein four-group on {1,2,3,4}, zero elsewhere on the 2-part")
        return certify(report, build_relations(G.table))

    if n > limits.lpart_max_n:
        raise CapExceeded(f"A{n}[2^inf] exceeds n <= {limits.lpart_max_n}")
    c = m // 4
    S = symmetric_lpart(n, 2, alternating=True, limits=limits)
    F = cycle_functions(S.perms, c, 2, square=True)
    claimed = comb(n, c) * factorial(c - 1) // (c - c // 2) if c > 1 else comb(n, c)
    produced = [Semicharacter(row, 2) for row in F]
    report = ConstructionReport(2, claimed, target, produced, f"A{n}[2^inf]", len(S), label="alternating-2")
    report.extras.update(cycle_length=c, class_count=len(F), fl_rank=_fl_rank(F, 2))
    report.notes.append(f"{c}-cycles of pi^2, one function per class")
    certify(report, subset_relations(S))
    if report.independence_rank < claimed:
        report.notes.append(
            f"the {claimed} class functions span only rank {report.independence_rank}: "
            f"f -> f~ is not injective on class functions"
            + (" (every 4-cycle of pi squares to two transpositions, so the sum of all "
               "transposition functions vanishes)" if c == 2 else ""))
    return report


# the restriction map from S_n^ to A_n^


@dataclass(frozen=True)
class KernelReport:
    n: int
    size: int
    invariant_factors: tuple[int, ...]
    elements: list[Semicharacter]  # listed only when size <= limits.kernel_list_max
    contains_sign: bool
    exponent: int
    semichar_order: int  # |S_n^|
    image_order: int     # size of the restriction image in A_n^


def restriction_kernel(n: int, limits: Limits = DEFAULT_LIMITS) -> KernelReport:
    """Kernel of restriction from semicharacters of S_n to those of A_n.

    The size is computed twice: as |S_n^| over the size of the image of a
    generating set, and directly as the dual of the lattice obtained by adding
    the unit vectors of A_n to the commuting-pair relations of S_n.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if n > 6:
        raise CapExceeded("restriction kernel needs full SNF on S_n; n <= 6")
    S = make_symmetric(n, limits)
    An = make_alternating(n, limits)
    emb = [S.index_of(p) for p in An.elements]

    gens = enumerate_semichar_generators(S, limits)
    s_order = prod(f.order for f in gens)
    image = generated_subgroup([pullback(f, emb) for f in gens])
    image_order = prod(image)
    for f in gens:
        if not verify_on_lattice(build_relations(An), pullback(f, emb)):
            raise ArithmeticError("restriction is not a semicharacter of A_n")

    lat = build_relations(S)
    rows = lat.rows() + [{a: 1} for a in emb]
    M = IntMatrix(len(rows), S.order, rows)
    sf = smith_normal_form(M, want_transforms=True, want_left=False)
    if sf.rank != S.order:
        raise ArithmeticError("kernel lattice has a free part")
    kgens = [Semicharacter(np.array([v.numerator * (d // v.denominator) for v in vec], dtype=np.int64), d)
             for vec, d in quotient_group_generators(M, sf)]
    factors = tuple(sf.nontrivial)
    size = prod(factors)
    if size * image_order != s_order:
        raise ArithmeticError(f"kernel size {size} disagrees with |S^|/|image| = {s_order}/{image_order}")

    for h in kgens:
        if not verify_on_lattice(lat, h) or any(h.num[a] for a in emb):
            raise ArithmeticError("kernel generator is not a semicharacter vanishing on A_n")
    exponent = lcm(*[f.order for f in kgens]) if kgens else 1
    if exponent > 2:
        raise ArithmeticError(f"kernel has exponent {exponent} > 2")
    sign = Semicharacter(np.array([0 if p.sign() == 1 else 1 for p in S.elements], dtype=np.int64), 2)
    # with exponent 2 the kernel is an F_2-space spanned by the generators
    span = [list(f.num) for f in kgens]
    contains_sign = bool(span) and _fl_rank(np.array(span + [list(sign.num)]), 2) == _fl_rank(np.array(span), 2)
    elements = []
    if size <= limits.kernel_list_max:
        for coeffs in itertools.product(*[range(f.order) for f in kgens]):
            h = Semicharacter.zero(S.order)
            for c, f in zip(coeffs, kgens):
                h = h + f * c
            elements.append(h)
    return KernelReport(n, size, factors, elements, contains_sign, exponent,
                        s_order, image_order)
