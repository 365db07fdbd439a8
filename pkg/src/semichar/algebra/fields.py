"""Prime-power finite fields with integer-encoded elements.

An element of GF(p^e) is stored as the integer ``sum(c[i] * p**i)`` where ``c``
is its residue polynomial modulo the field modulus, constant term first.
Encodings are stable because the modulus is chosen deterministically.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np
from sympy import isprime


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a by monic m over Z/p."""
    a = _poly_trim([x % p for x in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, coef in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * coef) % p
        _poly_trim(a)
    return a


def _monic_polys(p: int, degree: int):
    # lexicographic in (c0, c1, ..., c_{d-1}), constant term most significant
    for low in itertools.product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    d = len(poly) - 1
    if d < 1:
        return False
    for k in range(1, d // 2 + 1):
        for f in _monic_polys(p, k):
            if not _poly_mod(list(poly), f, p):
                return False
    return True


class FiniteField:
    """GF(p^e) given by a monic irreducible ``modulus`` (coefficients low-to-high)."""

    def __init__(self, p: int, e: int, modulus: list[int] | tuple[int, ...]):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {e}")
        if e > 1 and not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = tuple(modulus)

    def __repr__(self):
        return f"FiniteField(p={self.p}, e={self.e}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    # encoding

    def coeffs(self, x: int) -> list[int]:
        out = []
        for _ in range(self.e):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def from_coeffs(self, c) -> int:
        c = _poly_mod(list(c), list(self.modulus), self.p) if len(c) > self.e else list(c)
        return sum((int(ci) % self.p) * self.p**i for i, ci in enumerate(c))

    def embed_int(self, n: int) -> int:
        """Image of the integer n under Z -> GF(p)."""
        return n % self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def elements(self) -> range:
        return range(self.q)

    # arithmetic

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return int(self.add_table[a, b])

    def neg(self, a: int) -> int:
        return (-a) % self.p if self.e == 1 else int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        return int(self.inv_table[a])

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result = 1
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def _slow_mul(self, a: int, b: int) -> int:
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.from_coeffs(_poly_mod(prod, list(self.modulus), self.p))

    @cached_property
    def add_table(self) -> np.ndarray:
        c = np.array([self.coeffs(x) for x in range(self.q)], dtype=np.int64)
        weights = self.p ** np.arange(self.e, dtype=np.int64)
        summed = (c[:, None, :] + c[None, :, :]) % self.p
        return (summed @ weights).astype(np.int64)

    @cached_property
    def neg_table(self) -> np.ndarray:
        c = np.array([self.coeffs(x) for x in range(self.q)], dtype=np.int64)
        return ((-c) % self.p) @ (self.p ** np.arange(self.e, dtype=np.int64))

    @cached_property
    def mul_table(self) -> np.ndarray:
        if self.e == 1:
            r = np.arange(self.q, dtype=np.int64)
            return np.outer(r, r) % self.p
        t = np.zeros((self.q, self.q), dtype=np.int64)
        for a in range(self.q):
            for b in range(a, self.q):
                t[a, b] = t[b, a] = self._slow_mul(a, b)
        return t

    @cached_property
    def inv_table(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int64)
        rows, cols = np.nonzero(self.mul_table == 1)
        inv[rows] = cols
        return inv

    # structure

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def trace(self, a: int) -> int:
        """Absolute trace to GF(p), returned as an integer in [0, p)."""
        total, x = 0, a
        for _ in range(self.e):
            total = self.add(total, x)
            x = self.frobenius(x)
        if total >= self.p:
            raise ArithmeticError("trace did not land in the prime field")
        return total

    def element_order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        k, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def primitive_element(self) -> int:
        for a in range(1, self.q):
            if self.element_order(a) == self.q - 1:
                return a
        raise ArithmeticError("no primitive element found")

    def prime_basis(self) -> list[int]:
        """The power basis 1, t, ..., t^(e-1) of GF(q) over GF(p)."""
        return [self.p**i for i in range(self.e)]


def field_make(p: int, e: int = 1) -> FiniteField:
    """GF(p^e) with the lexicographically smallest monic irreducible modulus."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= e <= 4:
        raise ValueError(f"extension degree {e} outside the supported range 1..4")
    if e == 1:
        return FiniteField(p, 1, [0, 1])
    for poly in _monic_polys(p, e):
        if poly[0] != 0 and is_irreducible(poly, p):
            return FiniteField(p, e, poly)
    raise RuntimeError(f"no irreducible polynomial of degree {e} over GF({p})")


def field_embedding(small: FiniteField, big: FiniteField) -> list[int]:
    """Images in ``big`` of every element of ``small`` under a field embedding.

    The embedding sends the class of x to the smallest root of small's modulus
    in big, extended linearly over the prime field.
    """
    if small.p != big.p or big.e % small.e:
        raise ValueError("no embedding between these fields")
    root = None
    for z in big.elements():
        acc = 0
        for coef in reversed(small.modulus):
            acc = big.add(big.mul(acc, z), coef)
        if acc == 0:
            root = z
            break
    if root is None:
        raise ArithmeticError("modulus has no root in the extension")
    powers = [big.pow(root, i) for i in range(small.e)]
    images = []
    for x in small.elements():
        acc = 0
        for c, pw in zip(small.coeffs(x), powers):
            acc = big.add(acc, big.mul(c, pw))
        images.append(acc)
    return images
