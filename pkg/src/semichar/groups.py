"""Finite groups as index-based multiplication tables.

Elements are the integers ``0..n-1``; ``mul[i, j]`` is the index of g_i g_j.
All helpers are pure functions of an immutable table.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np
from sympy import factorint, isprime

from .config import DEFAULT_LIMITS

log = logging.getLogger(__name__)


class GroupAxiomError(ValueError):
    """Raised when a multiplication table does not describe a group."""


def _index_dtype(n: int):
    return np.uint8 if n <= 2**8 else np.uint16 if n <= 2**16 else np.int64


@dataclass(frozen=True, eq=False)
class GroupTable:
    mul: np.ndarray
    identity: int
    inv: np.ndarray
    labels: tuple[str, ...] | None = None

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    def __len__(self) -> int:
        return self.order

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    def m(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    @classmethod
    def from_table(
        cls,
        mul,
        labels: Sequence[str] | None = None,
        check_associativity: bool | None = None,
        limits=DEFAULT_LIMITS,
    ) -> "GroupTable":
        """Validate an untrusted table: closure, identity, inverses, associativity.

        ``check_associativity=None`` applies the default policy: exhaustive
        check up to ``limits.assoc_check_max`` elements, skipped with a warning above.
        """
        mul = np.asarray(mul)
        if mul.ndim == 1:
            n = int(round(len(mul) ** 0.5))
            if n * n != len(mul):
                raise GroupAxiomError(f"flat table of length {len(mul)} is not square")
            mul = mul.reshape(n, n)
        n = mul.shape[0]
        if n < 1 or mul.shape != (n, n):
            raise GroupAxiomError(f"table must be a non-empty square array, got shape {mul.shape}")
        if not np.issubdtype(mul.dtype, np.integer):
            raise GroupAxiomError("table entries must be integers")
        if mul.min() < 0 or mul.max() >= n:
            raise GroupAxiomError("table entry outside [0, n)")
        mul = mul.astype(_index_dtype(n))
        ar = np.arange(n)

        ident = None
        for e in range(n):
            if np.array_equal(mul[e], ar) and np.array_equal(mul[:, e], ar):
                ident = e
                break
        if ident is None:
            raise GroupAxiomError("no two-sided identity element")

        hits = mul == ident
        if not (hits.sum(axis=1) == 1).all():
            bad = int(np.nonzero(hits.sum(axis=1) != 1)[0][0])
            raise GroupAxiomError(f"element {bad} has no unique inverse")
        inv = hits.argmax(axis=1)
        if not (mul[inv, ar] == ident).all():
            raise GroupAxiomError("left and right inverses differ")
        if labels is not None and len(labels) != n:
            raise GroupAxiomError("label count does not match order")

        if check_associativity is None:
            check_associativity = n <= limits.assoc_check_max
            if not check_associativity:
                log.warning("skipping O(n^3) associativity check for order %d", n)
        G = cls(mul, ident, inv.astype(_index_dtype(n)), tuple(labels) if labels else None)
        if check_associativity:
            bad = G.associativity_violation()
            if bad is not None:
                raise GroupAxiomError(f"associativity fails at {bad}")
        # Latin square property follows from associativity plus inverses,
        # but is cheap and catches tables whose associativity check was skipped.
        if not all(len(np.unique(mul[i])) == n for i in range(n)):
            raise GroupAxiomError("table rows are not permutations")
        return G

    @classmethod
    def trusted(cls, mul: np.ndarray, labels: Sequence[str] | None = None) -> "GroupTable":
        """Build from a table that is a group by construction (no checks beyond inverses)."""
        n = mul.shape[0]
        mul = np.ascontiguousarray(mul, dtype=_index_dtype(n))
        ar = np.arange(n)
        ident = next(e for e in range(n) if np.array_equal(mul[e], ar))
        inv = (mul == ident).argmax(axis=1)
        return cls(mul, ident, inv.astype(_index_dtype(n)), tuple(labels) if labels else None)

    def associativity_violation(self) -> tuple[int, int, int] | None:
        mul = self.mul.astype(np.int64)
        for a in range(self.order):
            lhs = mul[mul[a], :]  # (ab)c
            rhs = mul[a][mul]  # a(bc)
            if not np.array_equal(lhs, rhs):
                b, c = map(int, np.argwhere(lhs != rhs)[0])
                return a, b, c
        return None

    # vectorized element data

    @cached_property
    def orders(self) -> np.ndarray:
        n = self.order
        mul = self.mul.astype(np.int64)
        ar = np.arange(n)
        out = np.zeros(n, dtype=np.int64)
        cur = ar.copy()
        k = 1
        while (out == 0).any():
            done = (cur == self.identity) & (out == 0)
            out[done] = k
            cur = mul[cur, ar]
            k += 1
        return out

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.orders))

    def power_map(self, k: int) -> np.ndarray:
        """Array whose g-th entry is g^k."""
        n = self.order
        ar = np.arange(n)
        k = k % self.exponent
        result = np.full(n, self.identity, dtype=np.int64)
        base = ar.copy()
        mul = self.mul.astype(np.int64)
        while k:
            if k & 1:
                result = mul[result, base]
            base = mul[base, base]
            k >>= 1
        return result

    @cached_property
    def commute_mask(self) -> np.ndarray:
        return self.mul == self.mul.T

    @cached_property
    def is_abelian(self) -> bool:
        return bool(self.commute_mask.all())

    def commuting_triples(self) -> np.ndarray:
        """Rows (i, j, k) for every ordered commuting pair, i-major; k = index of g_i g_j."""
        i, j = np.nonzero(self.commute_mask)
        k = self.mul[i, j]
        return np.stack([i, j, k.astype(np.int64)], axis=1).astype(np.int64)

    @cached_property
    def centralizer_sizes(self) -> np.ndarray:
        return self.commute_mask.sum(axis=1)

    def __repr__(self):
        return f"GroupTable(order={self.order})"


def element_order(G: GroupTable, g: int) -> int:
    if not 0 <= g < G.order:
        raise IndexError(f"element index {g} out of range")
    return int(G.orders[g])


def power(G: GroupTable, g: int, k: int) -> int:
    if not 0 <= g < G.order:
        raise IndexError(f"element index {g} out of range")
    if k < 0:
        g, k = int(G.inv[g]), -k
    k %= int(G.orders[g])
    result, base = G.identity, g
    while k:
        if k & 1:
            result = G.m(result, base)
        base = G.m(base, base)
        k >>= 1
    return result


def commuting_pairs(G: GroupTable) -> Iterator[tuple[int, int]]:
    for i, j in zip(*np.nonzero(G.commute_mask)):
        yield int(i), int(j)


@dataclass(frozen=True)
class LPartSubset:
    prime: int
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    @cached_property
    def position(self) -> dict[int, int]:
        return {g: i for i, g in enumerate(self.members)}


def is_prime_power(n: int, l: int) -> bool:
    while n % l == 0:
        n //= l
    return n == 1


def l_part(G: GroupTable, l: int) -> LPartSubset:
    """Elements of l-power order, sorted by index."""
    if not isprime(l):
        raise ValueError(f"{l} is not prime")
    members = tuple(int(g) for g in range(G.order) if is_prime_power(int(G.orders[g]), l))
    return LPartSubset(l, members)


def local_triples(G: GroupTable, members: Sequence[int]) -> np.ndarray:
    """Commuting triples among ``members`` re-indexed to positions in ``members``.

    Raises if a product of commuting members leaves the set.
    """
    members = np.asarray(members, dtype=np.int64)
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[members] = np.arange(len(members))
    sub = G.commute_mask[np.ix_(members, members)]
    a, b = np.nonzero(sub)
    k = pos[G.mul[members[a], members[b]].astype(np.int64)]
    if (k < 0).any():
        raise ValueError("subset is not closed under products of commuting elements")
    return np.stack([a, b, k], axis=1)


def valuation(n: int, l: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    n = abs(n)
    while n % l == 0:
        n //= l
        v += 1
    return v


def prime_divisors(n: int) -> list[int]:
    return sorted(factorint(n))


def class_count(G: GroupTable) -> int:
    """Number of conjugacy classes, via sum of centralizer sizes."""
    total = int(G.centralizer_sizes.sum())
    assert total % G.order == 0
    return total // G.order
