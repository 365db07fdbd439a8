"""Semicharacter groups via the commuting-pair relation lattice.

A semicharacter is stored additively: one residue in Q/Z per element, with all
residues sharing a denominator. The group of semicharacters of G is the dual
of Z^n modulo the span of e_i + e_j - e_k over commuting pairs g_i g_j = g_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm, prod
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

from .config import DEFAULT_LIMITS, CapExceeded, Limits
from .groups import GroupTable, l_part, local_triples, prime_divisors, valuation
from .zlattice import (
    IntMatrix,
    nullspace_mod_p,
    quotient_group_generators,
    smith_normal_form,
)


def _table(G) -> GroupTable:
    return G if isinstance(G, GroupTable) else G.table


# relation lattice


@dataclass(frozen=True, eq=False)
class RelationLattice:
    """Rows e_i + e_j - e_k, one per ordered commuting pair (i, j) with g_i g_j = g_k."""

    n: int
    triples: np.ndarray  # (rows, 3) int64

    @property
    def row_count(self) -> int:
        return len(self.triples)

    def rows(self) -> list[dict[int, int]]:
        out = []
        for i, j, k in self.triples.tolist():
            row: dict[int, int] = {}
            for c, v in ((i, 1), (j, 1), (k, -1)):
                row[c] = row.get(c, 0) + v
            out.append({c: v for c, v in row.items() if v})
        return out

    def matrix(self) -> IntMatrix:
        return IntMatrix(self.row_count, self.n, self.rows())


def build_relations(G) -> RelationLattice:
    T = _table(G)
    return RelationLattice(T.order, T.commuting_triples())


def local_relations(G, members: Sequence[int]) -> RelationLattice:
    """Relations among commuting pairs inside a subset closed under such products."""
    return RelationLattice(len(members), local_triples(_table(G), members))


def subset_relations(subset) -> RelationLattice:
    """Relations for a PermSubset (no ambient table)."""
    return RelationLattice(len(subset), subset.commuting_triples())


# semicharacters


@dataclass(frozen=True, eq=False)
class Semicharacter:
    """Additive semicharacter: value at element i is ``num[i] / den`` mod 1."""

    num: np.ndarray
    den: int

    def __post_init__(self):
        num = np.asarray(self.num, dtype=object if self.den >= 2**62 else np.int64) % self.den
        g = gcd(self.den, *[int(x) for x in np.unique(num)])
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", self.den // g)

    @classmethod
    def from_fractions(cls, values: Iterable) -> "Semicharacter":
        vals = [Fraction(v) % 1 for v in values]
        den = lcm(*[v.denominator for v in vals]) if vals else 1
        return cls(np.array([v.numerator * (den // v.denominator) for v in vals], dtype=np.int64), den)

    @classmethod
    def zero(cls, n: int) -> "Semicharacter":
        return cls(np.zeros(n, dtype=np.int64), 1)

    def __len__(self) -> int:
        return len(self.num)

    @property
    def values(self) -> list[Fraction]:
        return [Fraction(int(x), self.den) for x in self.num]

    def __getitem__(self, i: int) -> Fraction:
        return Fraction(int(self.num[i]), self.den)

    @property
    def order(self) -> int:
        return self.den

    def __add__(self, other: "Semicharacter") -> "Semicharacter":
        d = lcm(self.den, other.den)
        return Semicharacter(self.num * (d // self.den) + other.num * (d // other.den), d)

    def __mul__(self, k: int) -> "Semicharacter":
        return Semicharacter(self.num * k, self.den)

    __rmul__ = __mul__

    def __neg__(self) -> "Semicharacter":
        return self * -1

    def __eq__(self, other) -> bool:
        return (isinstance(other, Semicharacter) and self.den == other.den
                and np.array_equal(self.num, other.num))

    def restrict(self, members: Sequence[int]) -> "Semicharacter":
        return Semicharacter(self.num[np.asarray(members, dtype=np.int64)], self.den)

    def as_fl_vector(self, l: int) -> list[int]:
        """Values in (1/l)Z/Z as integers mod l."""
        if l % self.den:
            raise ValueError(f"function of order {self.den} is not F_{l}-valued")
        return [int(x) * (l // self.den) % l for x in self.num]


@dataclass(frozen=True)
class Verification:
    ok: bool
    pair: tuple[int, int] | None = None  # first commuting pair where additivity fails

    def __bool__(self):
        return self.ok


def verify_on_lattice(lat: RelationLattice, f: Semicharacter) -> Verification:
    if len(f) != lat.n:
        raise ValueError(f"function has {len(f)} values, domain has {lat.n} elements")
    if lat.row_count == 0:
        return Verification(True)
    t = lat.triples
    num = f.num
    defect = (num[t[:, 0]] + num[t[:, 1]] - num[t[:, 2]]) % f.den
    bad = np.nonzero(defect)[0]
    if len(bad):
        i, j, _ = t[bad[0]]
        return Verification(False, (int(i), int(j)))
    return Verification(True)


def verify_semicharacter(G, f: Semicharacter) -> Verification:
    """Exhaustive check of f(gh) = f(g) + f(h) mod 1 over all commuting pairs."""
    if isinstance(G, RelationLattice):
        return verify_on_lattice(G, f)
    return verify_on_lattice(build_relations(G), f)


def verify_homomorphism(G, f: Semicharacter) -> Verification:
    """The same check over all pairs, commuting or not."""
    T = _table(G)
    n = T.order
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    t = np.stack([i.ravel(), j.ravel(), T.mul.ravel().astype(np.int64)], axis=1)
    return verify_on_lattice(RelationLattice(n, t), f)


# group descriptions


def factored(n: int) -> dict[int, int]:
    return dict(sorted(factorint(n).items()))


@dataclass(frozen=True)
class SemicharGroupDesc:
    invariant_factors: tuple[int, ...]  # nontrivial only, d1 | d2 | ...
    source_order: int

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def factored_order(self) -> dict[int, int]:
        return factored(self.order)

    def l_rank(self, l: int) -> int:
        return sum(1 for d in self.invariant_factors if d % l == 0)

    def __str__(self):
        return f"order {self.order} = {_fmt_factored(self.factored_order)}, factors {list(self.invariant_factors)}"


def _fmt_factored(f: dict[int, int]) -> str:
    return " * ".join(f"{l}^{a}" if a > 1 else str(l) for l, a in f.items()) or "1"


def _quotient_desc(lat: RelationLattice, source_order: int) -> SemicharGroupDesc:
    sf = smith_normal_form(lat.matrix())
    if sf.rank != lat.n:
        raise ArithmeticError(f"relation lattice has rank {sf.rank} < {lat.n}: free part present")
    return SemicharGroupDesc(tuple(sf.nontrivial), source_order)


def semichar_group(G, limits: Limits = DEFAULT_LIMITS) -> SemicharGroupDesc:
    T = _table(G)
    if T.order > limits.snf_cap:
        raise CapExceeded(
            f"order {T.order} exceeds the full SNF cap {limits.snf_cap}; "
            "use l_torsion_rank or localized_semichar_group per prime")
    return _quotient_desc(build_relations(T), T.order)


def lattice_semichar_group(lat: RelationLattice, source_order: int | None = None) -> SemicharGroupDesc:
    """Semicharacter group of an arbitrary commuting system (e.g. an l-part)."""
    return _quotient_desc(lat, source_order if source_order is not None else lat.n)


@dataclass(frozen=True)
class ConjectureVerdict:
    holds: bool
    group_order: int
    semichar_order: int
    invariant_factors: tuple[int, ...]
    valuations: dict[int, tuple[int, int]] = field(default_factory=dict)  # l -> (val |G^|, val |G|)

    def surplus(self, l: int) -> int:
        a, b = self.valuations[l]
        return a - b


def conjecture_check(G, limits: Limits = DEFAULT_LIMITS) -> ConjectureVerdict:
    T = _table(G)
    desc = semichar_group(T, limits)
    primes = sorted(set(prime_divisors(T.order)) | set(desc.factored_order)) if T.order > 1 else \
        sorted(desc.factored_order)
    vals = {l: (valuation(desc.order, l), valuation(T.order, l)) for l in primes}
    return ConjectureVerdict(desc.order % T.order == 0, T.order, desc.order,
                             desc.invariant_factors, vals)


def lattice_generators(lat: RelationLattice) -> list[Semicharacter]:
    sf = smith_normal_form(lat.matrix(), want_transforms=True, want_left=False)
    if sf.rank != lat.n:
        raise ArithmeticError("relation lattice has a free part")
    out = []
    for vec, d in quotient_group_generators(lat.matrix(), sf):
        out.append(Semicharacter(np.array([v.numerator * (d // v.denominator) for v in vec],
                                          dtype=np.int64), d))
    return out


def enumerate_semichar_generators(G, limits: Limits = DEFAULT_LIMITS) -> list[Semicharacter]:
    """Generators of the semicharacter group, orders matching the invariant factors."""
    T = _table(G)
    if T.order > limits.transforms_cap:
        raise CapExceeded(f"order {T.order} exceeds the transforms cap {limits.transforms_cap}")
    lat = build_relations(T)
    gens = lattice_generators(lat)
    for f in gens:
        if not verify_on_lattice(lat, f):
            raise ArithmeticError("generator failed verification")
    return gens


def generated_subgroup(functions: Sequence[Semicharacter]) -> tuple[int, ...]:
    """Invariant factors of the subgroup of (Q/Z)^m generated by the functions."""
    functions = [f for f in functions if f.den > 1]
    if not functions:
        return ()
    D = lcm(*[f.den for f in functions])
    rows = [{j: int(x) * (D // f.den) for j, x in enumerate(f.num.tolist()) if x} for f in functions]
    sf = smith_normal_form(IntMatrix(len(rows), len(functions[0]), rows))
    orders = [D // gcd(D, s) for s in sf.invariant_factors]
    return tuple(sorted(o for o in orders if o > 1))


def l_torsion_rank(G, l: int, limits: Limits = DEFAULT_LIMITS) -> int:
    """dim over F_l of the l-torsion of the semicharacter group."""
    T = _table(G)
    if T.order > limits.torsion_cap:
        raise CapExceeded(f"order {T.order} exceeds the torsion cap {limits.torsion_cap}")
    dim, _ = nullspace_mod_p(build_relations(T).matrix(), l, basis=False)
    return dim


def localized_semichar_group(G, l: int, limits: Limits = DEFAULT_LIMITS) -> SemicharGroupDesc:
    """Semicharacter group of the l-part G[l^inf] (functions additive on its commuting pairs)."""
    T = _table(G)
    A = l_part(T, l)
    if len(A) > limits.snf_cap:
        raise CapExceeded(f"l-part of size {len(A)} exceeds the SNF cap {limits.snf_cap}")
    return lattice_semichar_group(local_relations(T, A.members), T.order)


def extend_from_l_part(G, l: int, f: Semicharacter, members: Sequence[int] | None = None) -> Semicharacter:
    """Extend a semicharacter of G[l^inf] to G via g -> b * f(g^m).

    Here |G| = m * l^a with l not dividing m and b*m = 1 mod l^a.
    """
    T = _table(G)
    if members is None:
        members = l_part(T, l).members
    members = list(members)
    if len(f) != len(members):
        raise ValueError("function length does not match the l-part")
    if not verify_on_lattice(local_relations(T, members), f):
        raise ValueError("function is not additive on commuting pairs of the l-part")
    a = valuation(T.order, l)
    la = l**a
    m = T.order // la
    b = pow(m, -1, la) if la > 1 else 0
    pos = np.full(T.order, -1, dtype=np.int64)
    pos[np.asarray(members, dtype=np.int64)] = np.arange(len(members))
    target = pos[T.power_map(m)]
    if (target < 0).any():
        raise ArithmeticError("g^m left the l-part")
    return Semicharacter(f.num[target] * b, f.den)


@dataclass(frozen=True)
class PrimaryDecomposition:
    ok: bool
    total: int
    local_orders: dict[int, int]


def primary_decomposition_check(G, limits: Limits = DEFAULT_LIMITS) -> PrimaryDecomposition:
    T = _table(G)
    total = semichar_group(T, limits).order
    local = {l: localized_semichar_group(T, l, limits).order for l in prime_divisors(T.order)}
    return PrimaryDecomposition(prod(local.values()) == total, total, local)


def pullback(f: Semicharacter, hom: Sequence[int]) -> Semicharacter:
    """f composed with a map G -> H given as the array of images."""
    return Semicharacter(f.num[np.asarray(hom, dtype=np.int64)], f.den)
