"""Constructors for realized groups: the families analysed for semicharacters
plus standard small groups used as a test corpus."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from math import factorial
from typing import Sequence

import numpy as np
from sympy import factorint, isprime

from .algebra.fields import FiniteField, field_make
from .algebra.matrices import MatrixFq, batch_products, encode_rows, mat_det
from .algebra.perms import Permutation, perm_parse
from .config import DEFAULT_LIMITS, CapExceeded, Limits
from .groups import GroupTable, is_prime_power


@dataclass(frozen=True, eq=False)
class RealizedGroup:
    table: GroupTable
    kind: str  # "perm" | "matrix" | "abstract"
    elements: tuple = ()
    field: FiniteField | None = None
    name: str = ""
    params: dict = dc_field(default_factory=dict)
    abelian_invariants: tuple[int, ...] | None = None

    @property
    def order(self) -> int:
        return self.table.order

    def element(self, g: int):
        return self.elements[g] if self.elements else g

    def index_of(self, x) -> int:
        return self._index[x]

    @cached_property
    def _index(self) -> dict:
        return {x: i for i, x in enumerate(self.elements)}

    @cached_property
    def perm_array(self) -> np.ndarray:
        if self.kind != "perm":
            raise TypeError("not a permutation group")
        return np.array([p.images for p in self.elements], dtype=np.int8)

    @cached_property
    def matrix_array(self) -> np.ndarray:
        if self.kind != "matrix":
            raise TypeError("not a matrix group")
        return np.array([m.entries for m in self.elements], dtype=np.int64)

    def __repr__(self):
        return f"RealizedGroup({self.name}, order={self.order}, kind={self.kind})"


def _check_cap(order: int, cap: int, what: str):
    if order > cap:
        raise CapExceeded(f"{what} has order {order} > cap {cap}")


# abelian groups


def invariant_factors(factors: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... (all > 1) of the product of cyclic groups."""
    by_prime: dict[int, list[int]] = {}
    for f in factors:
        for l, a in factorint(f).items():
            by_prime.setdefault(l, []).append(l**a)
    length = max((len(v) for v in by_prime.values()), default=0)
    out = [1] * length
    for l, powers in by_prime.items():
        powers.sort(reverse=True)
        for i, pw in enumerate(powers):
            out[length - 1 - i] *= pw
    return tuple(out)


def make_cyclic(n: int, limits: Limits = DEFAULT_LIMITS) -> RealizedGroup:
    if n < 1:
        raise ValueError("cyclic order must be >= 1")
    _check_cap(n, limits.table_cap, f"C{n}")
    ar = np.arange(n)
    mul = (ar[:, None] + ar[None, :]) % n
    labels = [f"g^{k}" for k in range(n)]
    return RealizedGroup(GroupTable.trusted(mul, labels), "abstract", name=f"C{n}",
                         params={"n": n}, abelian_invariants=invariant_factors([n]))


def make_abelian(factors: Sequence[int], limits: Limits = DEFAULT_LIMITS) -> RealizedGroup:
    factors = [int(f) for f in factors]
    if not factors or any(f < 1 for f in factors):
        raise ValueError("factors must be positive integers")
    order = int(np.prod(factors))
    _check_cap(order, limits.table_cap, f"abelian {factors}")
    coords = np.array(list(itertools.product(*[range(f) for f in factors])), dtype=np.int64)
    if coords.ndim == 1:
        coords = coords.reshape(-1, 1)
    mods = np.array(factors, dtype=np.int64)
    radix = np.array([int(np.prod(factors[i + 1:])) for i in range(len(factors))], dtype=np.int64)
    summed = (coords[:, None, :] + coords[None, :, :]) % mods
    mul = summed @ radix
    labels = ["(" + ",".join(map(str, c)) + ")" for c in coords]
    name = "x".join(f"C{f}" for f in factors)
    return RealizedGroup(GroupTable.trusted(mul, labels), "abstract", name=name,
                         params={"factors": factors}, abelian_invariants=invariant_factors(factors))


def abelian_types(order: int) -> list[tuple[int, ...]]:
    """One invariant-factor list per isomorphism type of abelian group of this order."""
    from sympy.utilities.iterables import partitions

    per_prime = []
    for l, a in sorted(factorint(order).items()):
        opts = []
        for part in partitions(a):
            parts = [k for k, mult in part.items() for _ in range(mult)]
            opts.append([l**k for k in parts])
        per_prime.append(opts)
    out = []
    for combo in itertools.product(*per_prime):
        out.append(invariant_factors([x for grp in combo for x in grp]) or (1,))
    return sorted(set(out))


# dihedral / dicyclic


def make_dihedral(n: int, limits: Limits = DEFAULT_LIMITS) -> RealizedGroup:
    """Dihedral group of order 2n: elements r^k s^e at index k + n*e."""
    if n < 1:
        raise ValueError("dihedral parameter must be >= 1")
    _check_cap(2 * n, limits.table_cap, f"D{n}")
    idx = np.arange(2 * n)
    k, e = idx % n, idx // n
    sign = np.where(e == 1, -1, 1)
    rot = (k[:, None] + sign[:, None] * k[None, :]) % n
    ref = (e[:, None] + e[None, :]) % 2
    mul = rot + n * ref
    labels = [f"r^{a}" + ("s" if b else "") for a, b in zip(k, e)]
    return RealizedGroup(GroupTable.trusted(mul, labels), "abstract", name=f"D{n}", params={"n": n})


def make_dicyclic(n: int, limits: Limits = DEFAULT_LIMITS) -> RealizedGroup:
    """Dicyclic group of order 4n: <a, x | a^(2n), x^2 = a^n, x a x^-1 = a^-1>.

    Element a^k x^e sits at index k + 2n*e; n = 2 gives the quaternion group.
    """
    if n < 1:
        raise ValueError("dicyclic parameter must be >= 1")
    m = 2 * n
    _check_cap(2 * m, limits.table_cap, f"Dic{n}")
    idx = np.arange(2 * m)
    k, e = idx % m, idx // m
    K1, E1 = k[:, None], e[:, None]
    K2, E2 = k[None, :], e[None, :]
    sign = np.where(E1 == 1, -1, 1)
    rot = K1 + sign * K2 + np.where((E1 == 1) & (E2 == 1), n, 0)
    mul = rot % m + m * ((E1 + E2) % 2)
    labels = [f"a^{a}" + ("x" if b else "") for a, b in zip(k, e)]
    name = "Q8" if n == 2 else f"Dic{n}"
    return RealizedGroup(GroupTable.trusted(mul, labels), "abstract", name=name, params={"n": n})


# permutation groups


def _perm_keys(P: np.ndarray, degree: int) -> np.ndarray:
    weights = degree ** np.arange(P.shape[-1] - 1, -1, -1, dtype=np.int64)
    return P.astype(np.int64) @ weights


def _perm_table(P: np.ndarray) -> np.ndarray:
    """Table of (s*t)(x) = t(s(x)) for the rows of P, which must be closed."""
    N, n = P.shape
    keys = _perm_keys(P, n)
    order = np.argsort(keys)
    sorted_keys = keys[order]
    mul = np.empty((N, N), dtype=np.int64)
    Pi = P.astype(np.intp)
    for i in range(N):
        prod = Pi[:, Pi[i]]  # row j is x -> s_j(s_i(x)), i.e. s_i * s_j
        pos = np.searchsorted(sorted_keys, _perm_keys(prod, n))
        mul[i] = order[pos]
    return mul


def _parity(P: np.ndarray) -> np.ndarray:
    """0 for even, 1 for odd permutations (rows of P)."""
    n = P.shape[1]
    inv = np.zeros(len(P), dtype=np.int64)
    for a in range(n):
        for b in range(a + 1, n):
            inv += P[:, a] > P[:, b]
    return inv % 2


def make_symmetric(n: int, limits: Limits = DEFAULT_LIMITS) -> RealizedGroup:
    """S_n with elements in lexicographic one-line order (identity first)."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    if n > limits.symmetric_table_max_n:
        raise CapExceeded(f"S{n} full table exceeds n <= {limits.symmetric_table_max_n}; "
                          "use symmetric_lpart for l-part work")
    P = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    return _perm_group(P, f"S{n}", {"n": n})


def make_alternating(n: int, limits: Limits = DEFAULT_LIMITS) -> RealizedGroup:
    if n < 1:
        raise ValueError("degree must be >= 1")
    if n > limits.symmetric_table_max_n:
        raise CapExceeded(f"A{n} full table exceeds n <= {limits.symmetric_table_max_n}; "
                          "use symmetric_lpart for l-part work")
    P = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    P = P[_parity(P) == 0]
    return _perm_group(P, f"A{n}", {"n": n})


def _perm_group(P: np.ndarray, name: str, params: dict) -> RealizedGroup:
    mul = _perm_table(P)
    elements = tuple(Permutation(tuple(int(x) for x in row)) for row in P)
    labels = [str(p) for p in elements]
    return RealizedGroup(GroupTable.trusted(mul, labels), "perm", elements, name=name, params=params)


@dataclass(eq=False)
class PermSubset:
    """A set of permutations of one degree, closed under products of commuting members.

    Stands in for l-parts of S_n / A_n when the full table is too large.
    """

    perms: np.ndarray  # (N, degree) int8, rows sorted by key
    name: str = ""

    def __post_init__(self):
        self.perms = np.ascontiguousarray(self.perms, dtype=np.int8)
        self.keys = _perm_keys(self.perms, self.degree)
        if np.any(np.diff(self.keys) <= 0):
            order = np.unique(self.keys, return_index=True)[1]
            self.perms = self.perms[order]
            self.keys = self.keys[order]

    @property
    def degree(self) -> int:
        return self.perms.shape[1]

    def __len__(self) -> int:
        return len(self.perms)

    def index_of(self, images) -> int:
        key = int(_perm_keys(np.asarray(images, dtype=np.int64)[None, :], self.degree)[0])
        pos = int(np.searchsorted(self.keys, key))
        if pos >= len(self.keys) or self.keys[pos] != key:
            raise KeyError(f"{images} not in subset")
        return pos

    def element(self, i: int) -> Permutation:
        return Permutation(tuple(int(x) for x in self.perms[i]))

    def commuting_triples(self, block: int = 128) -> np.ndarray:
        """(i, j, k) with p_i p_j = p_j p_i = p_k; i-major, then j."""
        P = self.perms.astype(np.intp)
        N = len(P)
        out = []
        for start in range(0, N, block):
            B = P[start:start + block]
            b = len(B)
            st = P[np.arange(N)[None, :, None], B[:, None, :]]   # apply B[i], then P[j]
            ts = B[np.arange(b)[:, None, None], P[None, :, :]]   # apply P[j], then B[i]
            mask = (st == ts).all(axis=2)
            ii, jj = np.nonzero(mask)
            prod = st[ii, jj]
            keys = _perm_keys(prod, self.degree)
            pos = np.searchsorted(self.keys, keys)
            pos_c = np.minimum(pos, N - 1)
            if not (self.keys[pos_c] == keys).all():
                raise ValueError("subset not closed under commuting products")
            out.append(np.stack([ii + start, jj, pos_c], axis=1))
        return np.concatenate(out).astype(np.int64)

    def orders(self) -> np.ndarray:
        return perm_orders(self.perms)


def perm_orders(P: np.ndarray) -> np.ndarray:
    P = P.astype(np.intp)
    N, n = P.shape
    ident = np.arange(n)
    cur = P.copy()
    out = np.zeros(N, dtype=np.int64)
    k = 1
    while (out == 0).any():
        done = (cur == ident).all(axis=1) & (out == 0)
        out[done] = k
        cur = np.take_along_axis(P, cur, axis=1)  # p^(k+1)(x) = p(p^k(x))
        k += 1
    return out


def symmetric_lpart(n: int, l: int, alternating: bool = False,
                    limits: Limits = DEFAULT_LIMITS) -> PermSubset:
    """S_n[l^inf] (or A_n[l^inf]) without building a multiplication table."""
    if not isprime(l):
        raise ValueError(f"{l} is not prime")
    if n > limits.lpart_max_n:
        raise CapExceeded(f"l-part of S{n} exceeds n <= {limits.lpart_max_n}")
    P = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    if alternating:
        P = P[_parity(P) == 0]
    ords = perm_orders(P)
    keep = np.array([is_prime_power(int(o), l) for o in ords])
    return PermSubset(P[keep], name=f"{'A' if alternating else 'S'}{n}[{l}^inf]")


# matrix groups


def _matrix_group(F: FiniteField, dim: int, mats: list[MatrixFq], name: str, params: dict) -> RealizedGroup:
    arr = np.array([m.entries for m in mats], dtype=np.int64)
    N = len(mats)
    keys = encode_rows(F, arr)
    order = np.argsort(keys)
    sorted_keys = keys[order]
    mul = np.empty((N, N), dtype=np.int64)
    right = np.arange(N)
    for i in range(N):
        prod = batch_products(F, dim, arr, np.full(N, i), right)
        pos = np.searchsorted(sorted_keys, encode_rows(F, prod))
        if not (sorted_keys[np.minimum(pos, N - 1)] == encode_rows(F, prod)).all():
            raise ValueError("matrix set is not closed under multiplication")
        mul[i] = order[pos]
    labels = [str(m) for m in mats]
    return RealizedGroup(GroupTable.trusted(mul, labels), "matrix", tuple(mats), F, name, params)


def _field_for(q: int) -> FiniteField:
    fac = factorint(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, e), = fac.items()
    return field_make(p, e)


def make_gl2(q: int, limits: Limits = DEFAULT_LIMITS) -> RealizedGroup:
    F = _field_for(q)
    order = (q * q - 1) * (q * q - q)
    _check_cap(order, limits.table_cap, f"GL(2,{q})")
    mats = [m for m in (MatrixFq(F, 2, 2, e) for e in itertools.product(range(q), repeat=4))
            if mat_det(m) != 0]
    mats.sort(key=lambda m: m.key() if m.entries != (1, 0, 0, 1) else -1)
    return _matrix_group(F, 2, mats, f"GL(2,{q})", {"q": q})


def unitriangular_matrices(F: FiniteField, n: int) -> list[MatrixFq]:
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for vals in itertools.product(range(F.q), repeat=len(slots)):
        e = [int(i == j) for i in range(n) for j in range(n)]
        for (i, j), v in zip(slots, vals):
            e[i * n + j] = v
        out.append(MatrixFq(F, n, n, tuple(e)))
    return out


def make_unitriangular(n: int, q: int, limits: Limits = DEFAULT_LIMITS) -> RealizedGroup:
    if not 1 <= n <= 6:
        raise ValueError("unitriangular dimension must be in 1..6")
    F = _field_for(q)
    order = q ** (n * (n - 1) // 2)
    _check_cap(order, limits.table_cap, f"U({n},{q})")
    return _matrix_group(F, n, unitriangular_matrices(F, n), f"U({n},{q})", {"n": n, "q": q})


def make_heisenberg(q: int, limits: Limits = DEFAULT_LIMITS) -> RealizedGroup:
    G = make_unitriangular(3, q, limits)
    return RealizedGroup(G.table, G.kind, G.elements, G.field, f"Heis({q})", {"q": q})


# products and closures


def direct_product(G: RealizedGroup, H: RealizedGroup, limits: Limits = DEFAULT_LIMITS) -> RealizedGroup:
    a, b = G.order, H.order
    _check_cap(a * b, limits.table_cap, f"{G.name} x {H.name}")
    Gm = G.table.mul.astype(np.int64)
    Hm = H.table.mul.astype(np.int64)
    mul = (Gm[:, None, :, None] * b + Hm[None, :, None, :]).reshape(a * b, a * b)
    labels = [f"({G.table.label(i)},{H.table.label(j)})" for i in range(a) for j in range(b)]
    inv = None
    if G.abelian_invariants is not None and H.abelian_invariants is not None:
        inv = invariant_factors(list(G.abelian_invariants) + list(H.abelian_invariants))
    return RealizedGroup(GroupTable.trusted(mul, labels), "abstract", name=f"{G.name}x{H.name}",
                         params={"factors": [G.name, H.name]}, abelian_invariants=inv)


def closure_from_generators(gens: Sequence, limits: Limits = DEFAULT_LIMITS, name: str = "") -> RealizedGroup:
    """Breadth-first closure; identity first, then discovery order.

    ``gens`` are all Permutations of one degree or all MatrixFq over one field
    and dimension.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    if all(isinstance(g, Permutation) for g in gens):
        kind = "perm"
        degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("generators have different degrees")
        identity = Permutation.identity(degree)
    elif all(isinstance(g, MatrixFq) for g in gens):
        kind = "matrix"
        F, dim = gens[0].field, gens[0].rows
        if any(g.field != F or g.rows != dim or g.cols != dim for g in gens):
            raise ValueError("generators have different fields or dimensions")
        if any(mat_det(g) == 0 for g in gens):
            raise ValueError("singular matrix generator")
        identity = MatrixFq.identity(F, dim)
    else:
        raise TypeError("generators must all be Permutation or all MatrixFq")

    elements = [identity]
    seen = {identity}
    i = 0
    while i < len(elements):
        x = elements[i]
        for g in gens:
            y = x * g
            if y not in seen:
                seen.add(y)
                elements.append(y)
                if len(elements) > limits.table_cap:
                    raise CapExceeded(f"closure exceeds cap {limits.table_cap}")
        i += 1

    if kind == "perm":
        P = np.array([p.images for p in elements], dtype=np.int8)
        mul = _perm_table(P)
        labels = [str(p) for p in elements]
        return RealizedGroup(GroupTable.trusted(mul, labels), "perm", tuple(elements),
                             name=name or f"<{len(gens)} perms>", params={})
    return _matrix_group(F, dim, elements, name or f"<{len(gens)} matrices>", {})


def make_sl2_3() -> RealizedGroup:
    F = field_make(3)
    gens = [MatrixFq.from_rows(F, [[0, 2], [1, 0]]), MatrixFq.from_rows(F, [[1, 1], [0, 1]])]
    return closure_from_generators(gens, name="SL(2,3)")


def perm_group(cycle_strings: Sequence[str], degree: int | None = None, name: str = "") -> RealizedGroup:
    if degree is None:
        degree = max(perm_parse(s).degree for s in cycle_strings)
    return closure_from_generators([perm_parse(s, degree) for s in cycle_strings], name=name)


# family names

_FAMILY_RE = [
    (re.compile(r"^c(\d+)$"), lambda m: make_cyclic(int(m[1]))),
    (re.compile(r"^ab(\d+(?:x\d+)*)$"), lambda m: make_abelian([int(x) for x in m[1].split("x")])),
    (re.compile(r"^d(\d+)$"), lambda m: make_dihedral(int(m[1]))),
    (re.compile(r"^dic(\d+)$"), lambda m: make_dicyclic(int(m[1]))),
    (re.compile(r"^q8$"), lambda m: make_dicyclic(2)),
    (re.compile(r"^s(\d+)$"), lambda m: make_symmetric(int(m[1]))),
    (re.compile(r"^a(\d+)$"), lambda m: make_alternating(int(m[1]))),
    (re.compile(r"^gl2-(\d+)$"), lambda m: make_gl2(int(m[1]))),
    (re.compile(r"^u(\d+)-(\d+)$"), lambda m: make_unitriangular(int(m[1]), int(m[2]))),
    (re.compile(r"^heis(\d+)$"), lambda m: make_heisenberg(int(m[1]))),
    (re.compile(r"^sl2-3$"), lambda m: make_sl2_3()),
]

FAMILY_HELP = ("c<n> | ab<n>x<m>... | d<n> (order 2n) | dic<n> (order 4n) | q8 | s<n> | a<n> | "
               "gl2-<q> | u<n>-<q> | heis<q> | sl2-3 | products joined by '*'")


def parse_family(spec: str) -> RealizedGroup:
    """Build a group from a short family name such as ``s4``, ``gl2-3`` or ``s3*c2``."""
    parts = [s.strip().lower() for s in spec.split("*")]
    groups = []
    for part in parts:
        for pattern, build in _FAMILY_RE:
            m = pattern.match(part)
            if m:
                groups.append(build(m))
                break
        else:
            raise KeyError(f"unknown family {part!r}; expected {FAMILY_HELP}")
    G = groups[0]
    for H in groups[1:]:
        G = direct_product(G, H)
    if len(groups) > 1:
        G = RealizedGroup(G.table, G.kind, G.elements, G.field, spec, G.params, G.abelian_invariants)
    return G


def family_order(spec: str) -> int | None:
    """Order of a named family without building it (None if unknown)."""
    total = 1
    for part in spec.lower().split("*"):
        part = part.strip()
        if m := re.match(r"^c(\d+)$", part):
            total *= int(m[1])
        elif m := re.match(r"^ab(\d+(?:x\d+)*)$", part):
            total *= int(np.prod([int(x) for x in m[1].split("x")]))
        elif m := re.match(r"^d(\d+)$", part):
            total *= 2 * int(m[1])
        elif m := re.match(r"^dic(\d+)$", part):
            total *= 4 * int(m[1])
        elif part == "q8":
            total *= 8
        elif m := re.match(r"^s(\d+)$", part):
            total *= factorial(int(m[1]))
        elif m := re.match(r"^a(\d+)$", part):
            n = int(m[1])
            total *= max(factorial(n) // 2, 1)
        elif m := re.match(r"^gl2-(\d+)$", part):
            q = int(m[1])
            total *= (q * q - 1) * (q * q - q)
        elif m := re.match(r"^u(\d+)-(\d+)$", part):
            n, q = int(m[1]), int(m[2])
            total *= q ** (n * (n - 1) // 2)
        elif m := re.match(r"^heis(\d+)$", part):
            total *= int(m[1]) ** 3
        elif part == "sl2-3":
            total *= 24
        else:
            return None
    return total


def builtin_corpus(max_order: int | None = None) -> list[str]:
    """Family specs of the builtin corpus, in a stable order."""
    specs: list[str] = []
    for n in range(1, 65):
        for t in abelian_types(n):
            specs.append("ab" + "x".join(map(str, t)))
    specs += [f"d{n}" for n in range(3, 33)]
    specs += [f"dic{n}" for n in range(2, 17)]
    specs += ["q8", "s3", "s4", "s5", "s6", "a4", "a5", "a6",
              "heis3", "heis5", "u3-3", "u3-5", "u4-2",
              "gl2-2", "gl2-3", "gl2-4", "gl2-5", "sl2-3",
              "s3*c2", "s3*c3", "s3*s3", "q8*c2", "q8*c3", "a4*c2", "d4*c2", "s4*c2",
              "d5*c3", "dic3*c2", "a5*c2"]
    if max_order is not None:
        specs = [s for s in specs if (family_order(s) or 0) <= max_order]
    return specs
