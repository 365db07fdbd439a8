"""Permutations on 0-based points, with 1-based cycle notation for text.

Composition is left-to-right: ``(s * t)(x) = t(s(x))``, so ``"(1 2)(2 3)"``
means apply ``(1 2)`` first and then ``(2 3)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import lcm

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a bijection on [0, {len(self.images)}): {self.images}")

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return Permutation(tuple(other.images[x] for x in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            result = result * base
        return result

    def order(self) -> int:
        return lcm(*cycle_type(self))

    def sign(self) -> int:
        return -1 if sum(k - 1 for k in cycle_type(self)) % 2 else 1

    def __str__(self) -> str:
        return perm_print(self)


def perm_parse(text: str, degree: int | None = None) -> Permutation:
    """Parse cycle notation such as ``"(1 2 3)(4,5)"`` (1-based points)."""
    stripped = text.strip()
    cycles: list[list[int]] = []
    pos = 0
    for m in _CYCLE_RE.finditer(stripped):
        if stripped[pos:m.start()].strip():
            raise ValueError(f"malformed cycle notation at column {pos + 1}: {text!r}")
        body = m.group(1).replace(",", " ").split()
        try:
            points = [int(tok) for tok in body]
        except ValueError:
            raise ValueError(f"non-integer point in cycle {m.group(0)!r}") from None
        if any(pt < 1 for pt in points):
            raise ValueError(f"points are 1-based, got {m.group(0)!r}")
        if len(set(points)) != len(points):
            raise ValueError(f"repeated point within cycle {m.group(0)!r}")
        cycles.append([pt - 1 for pt in points])
        pos = m.end()
    if stripped[pos:].strip() or (not cycles and stripped):
        raise ValueError(f"malformed cycle notation: {text!r}")

    needed = max((pt + 1 for cyc in cycles for pt in cyc), default=0)
    if degree is None:
        degree = max(needed, 1)
    elif degree < needed:
        raise ValueError(f"degree {degree} smaller than largest point {needed}")

    result = Permutation.identity(degree)
    for cyc in cycles:
        images = list(range(degree))
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a] = b
        result = result * Permutation(tuple(images))
    return result


def cycles(pi: Permutation) -> list[tuple[int, ...]]:
    """Disjoint cycles including fixed points, each rotated to start at its minimum."""
    seen = [False] * pi.degree
    out = []
    for start in range(pi.degree):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = pi.images[start]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = pi.images[x]
        out.append(tuple(cyc))
    return out


def cycle_type(pi: Permutation) -> list[int]:
    return sorted((len(c) for c in cycles(pi)), reverse=True)


def cycles_of_length(pi: Permutation, k: int) -> list[tuple[int, ...]]:
    return [c for c in cycles(pi) if len(c) == k]


def cycle_to_perm(cyc: tuple[int, ...], degree: int) -> Permutation:
    images = list(range(degree))
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        images[a] = b
    return Permutation(tuple(images))


def perm_print(pi: Permutation) -> str:
    """Canonical cycle notation: nontrivial cycles only, ``"()"`` for the identity."""
    parts = [
        "(" + " ".join(str(x + 1) for x in c) + ")" for c in cycles(pi) if len(c) > 1
    ]
    return "".join(parts) or "()"
