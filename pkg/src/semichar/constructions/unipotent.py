"""Truncated logarithms and the semicharacters they give on unipotent groups."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np
from sympy import isprime

from ..algebra.fields import FiniteField
from ..algebra.matrices import MatrixFq, mat_pow
from ..config import DEFAULT_LIMITS, Limits
from ..engine import Semicharacter, build_relations, semichar_group, verify_homomorphism, verify_semicharacter
from ..families import make_heisenberg, make_unitriangular
from ..groups import valuation
from .report import ConstructionReport, certify


@dataclass(frozen=True)
class LogPolynomial:
    """w(x) = sum_{i=1}^{n-1} (-1)^(i+1) (p^e / i) x^i with p^e <= n-1 < p^(e+1)."""

    n: int
    p: int
    e: int
    coefficients: tuple[Fraction, ...]  # index i holds the coefficient of x^i; index 0 is 0

    def mod_p(self) -> list[int]:
        out = []
        for c in self.coefficients:
            if c.denominator % self.p == 0:
                raise ArithmeticError(f"coefficient {c} is not {self.p}-integral")
            out.append(c.numerator * pow(c.denominator, -1, self.p) % self.p)
        return out

    def congruence(self) -> list[int]:
        """Coefficients mod p of sum over i p^e < n of (-1)^(i+1) x^(i p^e) / i."""
        p, pe = self.p, self.p**self.e
        out = [0] * self.n
        i = 1
        while i * pe < self.n:
            out[i * pe] = (-1) ** (i + 1) * pow(i, -1, p) % p
            i += 1
        return out

    @property
    def lowest_degree(self) -> int:
        """Degree of the first nonzero term mod p (this is p^e)."""
        return next(i for i, c in enumerate(self.mod_p()) if c)


def w_polynomial(n: int, p: int) -> LogPolynomial:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if n < 2:
        raise ValueError("need n >= 2")
    e = 0
    while p ** (e + 1) <= n - 1:
        e += 1
    coeffs = [Fraction(0)] + [Fraction((-1) ** (i + 1) * p**e, i) for i in range(1, n)]
    return LogPolynomial(n, p, e, tuple(coeffs))


def _evaluate(A: MatrixFq, coeffs_mod_p: list[int]) -> MatrixFq:
    F = A.field
    out = MatrixFq.zero(F, A.rows)
    power = MatrixFq.identity(F, A.rows)
    for c in coeffs_mod_p[1:]:
        power = power * A
        if c:
            out = out + power.scale(F.embed_int(c))
    return out


def truncated_log(A: MatrixFq, n: int | None = None) -> MatrixFq:
    """w_{n,p}(A) for a nilpotent A with A^n = 0 (n defaults to the dimension)."""
    n = A.rows if n is None else n
    if n < 2:
        raise ValueError("need n >= 2")
    if not mat_pow(A, n).is_zero():
        raise ValueError("non-nilpotent input (A^n != 0)")
    return _evaluate(A, w_polynomial(n, A.field.p).mod_p())


def truncated_exp(A: MatrixFq, n: int | None = None) -> MatrixFq:
    """u(A) = sum_{i=1}^{n-1} A^i / i!, the inverse of truncated_log when p >= n."""
    n = A.rows if n is None else n
    p = A.field.p
    if p < n:
        raise ValueError(f"truncated exp needs p >= n (p={p}, n={n})")
    if not mat_pow(A, n).is_zero():
        raise ValueError("non-nilpotent input (A^n != 0)")
    coeffs = [0] + [pow(factorial(i), -1, p) for i in range(1, n)]
    return _evaluate(A, coeffs)


def unipotent_log(g: MatrixFq, n: int | None = None) -> MatrixFq:
    return truncated_log(g - MatrixFq.identity(g.field, g.rows), n)


def _trace_functions(F: FiniteField, values: np.ndarray) -> list[np.ndarray]:
    """x -> Tr(lambda x) for lambda over the power basis, applied to an array of field elements."""
    trace = np.array([F.trace(x) for x in range(F.q)], dtype=np.int64)
    mul = F.mul_table
    return [trace[mul[lam, values]] for lam in F.prime_basis()]


def unitriangular_log_semichars(n: int, q: int, exact: bool = False,
                                limits: Limits = DEFAULT_LIMITS) -> ConstructionReport:
    """Semicharacters phi o log on U(n, q): one per above-diagonal slot and basis element."""
    G = make_unitriangular(n, q, limits)
    F = G.field
    p = F.p
    if n > p:
        raise ValueError(f"need n <= p (n={n}, p={p})")
    logs = np.array([unipotent_log(g, max(n, 2)).entries for g in G.elements], dtype=np.int64)
    produced = []
    for i in range(n):
        for j in range(i + 1, n):
            for vals in _trace_functions(F, logs[:, i * n + j]):
                produced.append(Semicharacter(vals, p))
    claimed = F.e * n * (n - 1) // 2
    report = ConstructionReport(p, claimed, valuation(G.order, p), produced, G.name, G.order,
                                label="unitriangular-log")
    certify(report, build_relations(G))
    if exact and G.order <= limits.snf_cap:
        report.exact_valuation = valuation(semichar_group(G, limits).order, p)
    return report


def heisenberg_coordinates(G) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    M = G.matrix_array
    return M[:, 1], M[:, 2], M[:, 5]  # a, b, c of [[1,a,b],[0,1,c],[0,0,1]]


def heisenberg_semichars(q: int, exact: bool = False, limits: Limits = DEFAULT_LIMITS) -> ConstructionReport:
    """f1 = a, f2 = c, f3 = ac - 2b composed with additive characters of F_q."""
    if q % 2 == 0:
        raise ValueError("q must be odd")
    G = make_heisenberg(q, limits)
    F = G.field
    a, b, c = heisenberg_coordinates(G)
    mul, add, neg = F.mul_table, F.add_table, F.neg_table
    f3 = add[mul[a, c], neg[add[b, b]]]
    produced, kinds = [], []
    for name, vals in (("f1", a), ("f2", c), ("f3", f3)):
        for t in _trace_functions(F, vals):
            produced.append(Semicharacter(t, F.p))
            kinds.append(name)
    report = ConstructionReport(F.p, 3 * F.e, valuation(G.order, F.p), produced, G.name, G.order,
                                label="heisenberg")
    certify(report, build_relations(G))

    homs = {}
    witness = None
    for name, f in zip(kinds, produced):
        v = verify_homomorphism(G, f)
        homs.setdefault(name, []).append(v.ok)
        if name == "f3" and not v.ok and witness is None:
            witness = v.pair
    if not (all(homs["f1"]) and all(homs["f2"])):
        raise ArithmeticError("coordinate functions a, c should be homomorphisms")
    report.extras.update(homomorphism=homs, witness=witness)
    if witness is not None:
        i, j = witness
        commute = G.table.m(i, j) == G.table.m(j, i)
        report.extras["witness_commutes"] = commute
        report.notes.append(f"f3 is not a homomorphism: fails on the non-commuting pair "
                            f"{G.table.label(i)} , {G.table.label(j)}")
    if not all(verify_semicharacter(G, f).ok for f in produced):
        raise ArithmeticError("Heisenberg function failed verification")
    if exact and G.order <= limits.snf_cap:
        report.exact_valuation = valuation(semichar_group(G, limits).order, F.p)
    return report
