from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

from ..engine import RelationLattice, Semicharacter, generated_subgroup, verify_on_lattice
from ..groups import valuation


@dataclass
class ConstructionReport:
    """Explicit semicharacters certifying a lower bound on val_l(|G^|).

    ``independence_rank`` is the F_l-rank of the subgroup generated by
    ``produced``; ``certified_valuation`` is val_l of that subgroup's order.
    For F_l-valued families the two coincide.
    """

    prime: int
    claimed_lower_bound: int
    target_valuation: int
    produced: list[Semicharacter]
    domain: str
    domain_size: int
    independence_rank: int = 0
    certified_valuation: int = 0
    all_verified: bool = False
    exact_valuation: int | None = None
    notes: list[str] = field(default_factory=list)
    label: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def meets_claim(self) -> bool:
        return self.certified_valuation >= self.claimed_lower_bound

    @property
    def meets_target(self) -> bool:
        best = self.certified_valuation
        if self.exact_valuation is not None:
            best = max(best, self.exact_valuation)
        return best >= self.target_valuation

    def summary(self) -> str:
        line = (f"[{self.label}] l={self.prime}: {len(self.produced)} functions on {self.domain} "
                f"(|{self.domain}|={self.domain_size}), F_l-rank {self.independence_rank}, "
                f"certified val_l >= {self.certified_valuation}, claimed {self.claimed_lower_bound}, "
                f"target val_l(|G|) = {self.target_valuation}, verified={self.all_verified}")
        if self.exact_valuation is not None:
            line += f", exact val_l(|G^|) = {self.exact_valuation}"
        return line


def certify(report: ConstructionReport, lattice: RelationLattice) -> ConstructionReport:
    """Verify every produced function on the lattice and fill in the rank fields."""
    l = report.prime
    report.all_verified = all(verify_on_lattice(lattice, f).ok for f in report.produced)
    factors = generated_subgroup(report.produced)
    l_factors = [d for d in factors if d % l == 0]
    report.independence_rank = len(l_factors)
    report.certified_valuation = valuation(prod(factors), l) if factors else 0
    return report
