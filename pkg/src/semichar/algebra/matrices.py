"""Dense matrices over a FiniteField, entries stored row-major as encoded ints."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .fields import FiniteField


@dataclass(frozen=True)
class MatrixFq:
    field: FiniteField
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")
        if any(not 0 <= x < self.field.q for x in self.entries):
            raise ValueError("entry outside the field encoding range")

    @classmethod
    def from_rows(cls, field: FiniteField, rows) -> "MatrixFq":
        rows = [list(r) for r in rows]
        return cls(field, len(rows), len(rows[0]), tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, field: FiniteField, n: int) -> "MatrixFq":
        return cls(field, n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, field: FiniteField, rows: int, cols: int | None = None) -> "MatrixFq":
        cols = rows if cols is None else cols
        return cls(field, rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def key(self) -> int:
        """Injective integer code (base-q digits, row-major)."""
        k = 0
        for x in reversed(self.entries):
            k = k * self.field.q + x
        return k

    def __mul__(self, other: "MatrixFq") -> "MatrixFq":
        return mat_mul(self, other)

    def __add__(self, other: "MatrixFq") -> "MatrixFq":
        return mat_add(self, other)

    def __sub__(self, other: "MatrixFq") -> "MatrixFq":
        F = self.field
        return mat_add(self, MatrixFq(F, other.rows, other.cols, tuple(F.neg(x) for x in other.entries)))

    def scale(self, c: int) -> "MatrixFq":
        F = self.field
        return MatrixFq(F, self.rows, self.cols, tuple(F.mul(c, x) for x in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __str__(self):
        return "[" + ", ".join(str(r) for r in self.to_rows()) + "]"


def mat_add(a: MatrixFq, b: MatrixFq) -> MatrixFq:
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise ValueError("dimension mismatch")
    F = a.field
    return MatrixFq(F, a.rows, a.cols, tuple(F.add(x, y) for x, y in zip(a.entries, b.entries)))


def mat_mul(a: MatrixFq, b: MatrixFq) -> MatrixFq:
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    F = a.field
    out = []
    for i in range(a.rows):
        for j in range(b.cols):
            acc = 0
            for t in range(a.cols):
                x, y = a.entries[i * a.cols + t], b.entries[t * b.cols + j]
                if x and y:
                    acc = F.add(acc, F.mul(x, y))
            out.append(acc)
    return MatrixFq(F, a.rows, b.cols, tuple(out))


def mat_pow(a: MatrixFq, k: int) -> MatrixFq:
    if k < 0:
        a, k = mat_inv(a), -k
    result = MatrixFq.identity(a.field, a.rows)
    while k:
        if k & 1:
            result = mat_mul(result, a)
        a = mat_mul(a, a)
        k >>= 1
    return result


def mat_trace(a: MatrixFq) -> int:
    if a.rows != a.cols:
        raise ValueError("trace of a non-square matrix")
    acc = 0
    for i in range(a.rows):
        acc = a.field.add(acc, a[i, i])
    return acc


def _row_reduce(a: MatrixFq):
    """Gauss-Jordan on [a | I]; returns (det, inverse-or-None)."""
    F, n = a.field, a.rows
    m = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(a.to_rows())]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0, None
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = F.neg(det)
        pv = m[col][col]
        det = F.mul(det, pv)
        pinv = F.inv(pv)
        m[col] = [F.mul(pinv, x) for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[r], m[col])]
    return det, MatrixFq.from_rows(F, [row[n:] for row in m])


def mat_det(a: MatrixFq) -> int:
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    return _row_reduce(a)[0]


def mat_inv(a: MatrixFq) -> MatrixFq:
    if a.rows != a.cols:
        raise ValueError("inverse of a non-square matrix")
    det, inv = _row_reduce(a)
    if inv is None:
        raise ZeroDivisionError("singular matrix has no inverse")
    return inv


def all_matrices(field: FiniteField, n: int):
    for entries in itertools.product(range(field.q), repeat=n * n):
        yield MatrixFq(field, n, n, entries)


def batch_products(field: FiniteField, n: int, mats: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Row-major entry arrays of ``mats[left[t]] @ mats[right[t]]`` for all t.

    ``mats`` has shape (N, n*n) with encoded field entries.
    """
    add, mul = field.add_table, field.mul_table
    A, B = mats[left], mats[right]
    out = np.zeros((len(left), n * n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            acc = np.zeros(len(left), dtype=np.int64)
            for t in range(n):
                acc = add[acc, mul[A[:, i * n + t], B[:, t * n + j]]]
            out[:, i * n + j] = acc
    return out


def encode_rows(field: FiniteField, entries: np.ndarray) -> np.ndarray:
    """Vectorized ``MatrixFq.key`` for an (N, n*n) entry array."""
    weights = np.array([field.q**k for k in range(entries.shape[1])], dtype=object)
    if field.q ** entries.shape[1] < 2**62:
        return entries.astype(np.int64) @ weights.astype(np.int64)
    return entries.astype(object) @ weights
