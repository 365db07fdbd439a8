"""Exact integer lattice algebra: Smith normal form and nullspaces mod a prime.

Matrices are stored as sparse rows (``dict`` column -> nonzero int). Relation
matrices coming from groups have at most three nonzeros per row and a unit in
almost every row, so elimination runs in two phases: a sparse pass that pivots
on entries equal to +-1, then a dense Smith reduction of whatever is left.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


@dataclass
class IntMatrix:
    rows: int
    cols: int
    data: list[dict[int, int]]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError("row count does not match storage")
        for row in self.data:
            for c in row:
                if not 0 <= c < self.cols:
                    raise ValueError(f"column {c} outside [0, {self.cols})")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = [{j: int(x) for j, x in enumerate(r) if x} for r in rows]
        return cls(len(rows), cols, data)

    @classmethod
    def from_sparse(cls, rows: Iterable[dict[int, int]], cols: int) -> "IntMatrix":
        data = [{c: int(v) for c, v in r.items() if v} for r in rows]
        return cls(len(data), cols, data)

    def dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, row in enumerate(self.data):
            for j, v in row.items():
                out[i][j] = v
        return out

    def matvec_mod1(self, v: Sequence[Fraction]) -> list[Fraction]:
        return [sum((a * v[j] for j, a in row.items()), Fraction(0)) % 1 for row in self.data]


@dataclass
class SmithForm:
    """``invariant_factors`` is d1 | d2 | ... | dr (all positive, ones included).

    When transforms were requested, ``U @ M @ V`` is the rows x cols matrix with
    the factors on its leading diagonal. ``U`` is omitted when only the column
    transform was asked for.
    """

    invariant_factors: list[int]
    rows: int
    cols: int
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def nontrivial(self) -> list[int]:
        return [d for d in self.invariant_factors if d != 1]

    def quotient_order(self) -> int | None:
        """Order of Z^cols / rowspace, None when infinite."""
        if self.rank < self.cols:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out


def _axpy(dst: dict[int, int], a: int, src: dict[int, int]):
    """dst += a * src, dropping zeros."""
    for k, v in src.items():
        nv = dst.get(k, 0) + a * v
        if nv:
            dst[k] = nv
        else:
            dst.pop(k, None)


class _Eliminator:
    """Shared state for sparse elimination over Z (modulus=None) or Z/l."""

    def __init__(self, data: list[dict[int, int]], cols: int, modulus: int | None = None,
                 track_left: bool = False, track_right: bool = False):
        self.mod = modulus
        if modulus is None:
            self.rows = [dict(r) for r in data]
        else:
            self.rows = [{c: v % modulus for c, v in r.items() if v % modulus} for r in data]
        self.cols = cols
        self.col_rows: list[set[int]] = [set() for _ in range(cols)]
        for i, r in enumerate(self.rows):
            for c in r:
                self.col_rows[c].add(i)
        self.U = [{i: 1} for i in range(len(self.rows))] if track_left else None
        self.V = [{j: 1} for j in range(cols)] if track_right else None
        self.row_done = [False] * len(self.rows)
        self.col_done = [False] * cols
        self.pivots: list[tuple[int, int]] = []  # (row, col)

    def _norm(self, v: int) -> int:
        return v % self.mod if self.mod is not None else v

    def _is_unit(self, v: int) -> bool:
        return v in (1, -1) if self.mod is None else v % self.mod != 0

    def _row_axpy(self, t: int, a: int, r: int):
        row_t, row_r = self.rows[t], self.rows[r]
        for k, v in row_r.items():
            nv = row_t.get(k, 0) + a * v
            if self.mod is not None:
                nv %= self.mod
            if nv:
                if k not in row_t:
                    self.col_rows[k].add(t)
                row_t[k] = nv
            elif k in row_t:
                del row_t[k]
                self.col_rows[k].discard(t)
        if self.U is not None:
            _axpy(self.U[t], a, self.U[r])
            if self.mod is not None:
                self.U[t] = {k: v % self.mod for k, v in self.U[t].items() if v % self.mod}

    def pivot(self, r: int, c: int, full: bool = True):
        """Clear column c from every other row using row r.

        With ``full=False`` rows already retired as pivots are left alone.
        """
        s = self.rows[r][c]
        if self.mod is None:
            sinv = s  # s is +-1
        else:
            sinv = pow(s, -1, self.mod)
        for t in list(self.col_rows[c]):
            if t == r or (not full and self.row_done[t]):
                continue
            a = self.rows[t][c]
            self._row_axpy(t, self._norm(-a * sinv), r)
        self.row_done[r] = True
        self.col_done[c] = True
        self.pivots.append((r, c))

    def clear_pivot_row(self, r: int, c: int):
        """Column operations making row r equal to s * e_c (integer mode)."""
        s = self.rows[r][c]
        for j, b in list(self.rows[r].items()):
            if j == c:
                continue
            # col_j -= b*s * col_c ; only row r has a nonzero in column c now
            if self.V is not None:
                _axpy(self.V[j], -b * s, self.V[c])
            del self.rows[r][j]
            self.col_rows[j].discard(r)
        if s == -1:
            self.rows[r][c] = 1
            if self.U is not None:
                self.U[r] = {k: -v for k, v in self.U[r].items()}

    def unit_phase(self, full: bool, clear_rows: bool):
        """Pivot on unit entries, lightest rows first, until none remain."""
        heap = [(len(r), i) for i, r in enumerate(self.rows) if r]
        heapq.heapify(heap)
        while heap:
            w, i = heapq.heappop(heap)
            row = self.rows[i]
            if self.row_done[i] or not row:
                continue
            if len(row) != w:
                heapq.heappush(heap, (len(row), i))
                continue
            best = None
            for c, v in row.items():
                if self._is_unit(v):
                    key = (len(self.col_rows[c]), c)
                    if best is None or key < best[0]:
                        best = (key, c)
            if best is None:
                continue
            c = best[1]
            touched = [t for t in self.col_rows[c] if t != i]
            self.pivot(i, c, full=full)
            if clear_rows:
                self.clear_pivot_row(i, c)
            for t in touched:
                if not self.row_done[t] and self.rows[t]:
                    heapq.heappush(heap, (len(self.rows[t]), t))


def _dense_snf(A: list[list[int]], U: list[dict] | None, V: list[dict] | None, colmap: list[int]):
    """In-place Smith reduction of dense A; U holds left-transform rows for the rows
    of A, V is the global list of right-transform columns indexed through colmap.

    Returns the diagonal (positive entries, in chain order).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        colmap[i], colmap[j] = colmap[j], colmap[i]

    def row_op(dst, q, src):  # row dst -= q * row src
        rd, rs = A[dst], A[src]
        for k in range(t, n):
            if rs[k]:
                rd[k] -= q * rs[k]
        if U is not None:
            _axpy(U[dst], -q, U[src])

    def col_op(dst, q, src):  # col dst -= q * col src
        for row in A[t:]:
            if row[src]:
                row[dst] -= q * row[src]
        if V is not None:
            _axpy(V[colmap[dst]], -q, V[colmap[src]])

    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    row_op(i, A[i][t] // p, t)
            for j in range(t + 1, n):
                if A[t][j]:
                    col_op(j, A[t][j] // p, t)
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            rest += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                _, i, j = min(rest)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(A[i][k] % p for k in range(t + 1, n))), None)
            if bad is None:
                break
            row_op(t, -1, bad)  # row t += row bad, then re-reduce
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = {k: -v for k, v in U[t].items()}
        diag.append(A[t][t])
        t += 1
    return diag


def smith_normal_form(M: IntMatrix, want_transforms: bool = False, want_left: bool = True) -> SmithForm:
    """Invariant factors of M (and optionally unimodular U, V with U M V = D).

    ``want_left=False`` skips U, which is rows x rows and the larger of the two
    for relation matrices.
    """
    track_u = want_transforms and want_left
    track_v = want_transforms
    el = _Eliminator(M.data, M.cols, None, track_left=track_u, track_right=track_v)
    el.unit_phase(full=False, clear_rows=track_v)
    unit_pivots = list(el.pivots)

    res_rows = [i for i in range(M.rows) if not el.row_done[i] and el.rows[i]]
    res_cols = sorted({c for i in res_rows for c in el.rows[i]})
    cidx = {c: k for k, c in enumerate(res_cols)}
    if not track_u:
        seen = set()
        uniq = []
        for i in res_rows:
            key = tuple(sorted(el.rows[i].items()))
            if key not in seen:
                seen.add(key)
                uniq.append(i)
        res_rows = uniq
    A = []
    for i in res_rows:
        row = [0] * len(res_cols)
        for c, v in el.rows[i].items():
            row[cidx[c]] = v
        A.append(row)
    Ures = [el.U[i] for i in res_rows] if track_u else None
    colmap = list(res_cols)
    if A:
        A = _hermite_rows(A, Ures)
    diag = _dense_snf(A, Ures, el.V, colmap) if A else []
    factors = [1] * len(unit_pivots) + diag

    sf = SmithForm(factors, M.rows, M.cols)
    if not want_transforms:
        return sf

    r = len(factors)
    col_order = [c for _, c in unit_pivots] + colmap[:len(diag)]
    used = set(col_order)
    col_order += [c for c in range(M.cols) if c not in used]
    V = [[0] * M.cols for _ in range(M.cols)]
    for newj, oldc in enumerate(col_order):
        for i, v in el.V[oldc].items():
            V[i][newj] = v
    sf.V = V
    if track_u:
        row_vecs = [el.U[i] for i, _ in unit_pivots] + Ures[:len(diag)]
        # rows of the dense block beyond the rank, then everything never touched
        row_vecs += Ures[len(diag):]
        placed = {i for i, _ in unit_pivots} | set(res_rows)
        row_vecs += [el.U[i] for i in range(M.rows) if i not in placed]
        U = [[0] * M.rows for _ in range(M.rows)]
        for newi, vec in enumerate(row_vecs):
            for k, v in vec.items():
                U[newi][k] = v
        sf.U = U
    assert r <= min(M.rows, M.cols)
    return sf


def _hermite_rows(A: list[list[int]], U: list[dict] | None) -> list[list[int]]:
    """Row-only gcd elimination to echelon form, dropping zero rows.

    Shrinks tall residual blocks before the quadratic-pivot-search Smith pass.
    Rows are rebuilt in place so U stays aligned with A.
    """
    m, n = len(A), len(A[0])
    rows = list(range(m))
    top = 0
    for col in range(n):
        live = [i for i in rows[top:] if A[i][col]]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda i: abs(A[i][col]))
            p = live[0]
            for i in live[1:]:
                q = A[i][col] // A[p][col]
                if q:
                    Ai, Ap = A[i], A[p]
                    for k in range(col, n):
                        if Ap[k]:
                            Ai[k] -= q * Ap[k]
                    if U is not None:
                        _axpy(U[i], -q, U[p])
            live = [i for i in live if A[i][col]]
        p = live[0]
        k = rows.index(p)
        rows[top], rows[k] = rows[k], rows[top]
        top += 1
        if top == m:
            break
    keep = rows[:top]
    zero = rows[top:]
    if U is not None:
        U[:] = [U[i] for i in keep] + [U[i] for i in zero]
        return [A[i] for i in keep] + [A[i] for i in zero]
    return [A[i] for i in keep]


def quotient_group_generators(M: IntMatrix, sf: SmithForm) -> list[tuple[list[Fraction], int]]:
    """Generators of Hom(Z^cols / rowspace(M), Q/Z), one per factor d > 1.

    Each vector v has v_j = V[j, i] / d_i mod 1, so M v = 0 mod 1.
    """
    if sf.V is None:
        raise ValueError("Smith form was computed without transforms")
    if sf.rank < M.cols:
        raise ValueError("quotient has a free part; generators would have infinite order")
    out = []
    for i, d in enumerate(sf.invariant_factors):
        if d == 1:
            continue
        vec = [Fraction(sf.V[j][i] % d, d) for j in range(M.cols)]
        out.append((vec, d))
    return out


def nullspace_mod_p(M: IntMatrix, l: int, basis: bool = True):
    """Right nullspace of M over Z/l.

    Returns ``(dimension, vectors)``; vectors (lists of ints in [0, l)) are in
    reduced echelon form, one per free column, or ``None`` when ``basis=False``.
    """
    el = _Eliminator(M.data, M.cols, modulus=l)
    el.unit_phase(full=basis, clear_rows=False)
    rank = len(el.pivots)
    dim = M.cols - rank
    if not basis:
        return dim, None
    pivot_of_col = {c: r for r, c in el.pivots}
    free = [c for c in range(M.cols) if c not in pivot_of_col]
    vectors = []
    for f in free:
        v = [0] * M.cols
        v[f] = 1
        for c, r in pivot_of_col.items():
            row = el.rows[r]
            a = row.get(f, 0)
            if a:
                v[c] = (-a * pow(row[c], -1, l)) % l
        vectors.append(v)
    return dim, vectors


def rank_mod_p(rows: Sequence[Sequence[int]], l: int) -> int:
    if not rows:
        return 0
    M = IntMatrix.from_dense(rows)
    dim, _ = nullspace_mod_p(M, l, basis=False)
    return M.cols - dim


def mat_mul_int(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col) if a and b) for col in Bt] for row in A]


def det_bareiss(A: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    M = [list(r) for r in A]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def determinant_divisors(A: Sequence[Sequence[int]]) -> list[int]:
    """gcd of all k x k minors for k = 1.. until it vanishes; the SNF oracle."""
    from itertools import combinations

    m = len(A)
    n = len(A[0]) if m else 0
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                g = gcd(g, det_bareiss([[A[i][j] for j in cs] for i in rs]))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            break
        out.append(g)
    return out
