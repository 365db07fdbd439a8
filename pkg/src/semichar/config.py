from dataclasses import dataclass


@dataclass(frozen=True)
class Limits:
    """Desk-scale size envelopes; every refusal in the package cites one of these."""

    table_cap: int = 2048          # generic constructors and closures
    symmetric_table_max_n: int = 7  # S_n / A_n full tables (S_7 has 5040 elements)
    lpart_max_n: int = 9           # S_n / A_n when only l-parts are materialized
    snf_cap: int = 1500            # full Smith normal form of the relation lattice
    transforms_cap: int = 1000     # SNF with transforms (semicharacter enumeration)
    torsion_cap: int = 6000        # l-torsion rank via nullspace mod l
    assoc_check_max: int = 512     # imported tables above this skip the O(n^3) check
    export_max: int = 2048         # table export refuses larger groups
    kernel_list_max: int = 4096    # restriction kernels larger than this are not listed element-wise


DEFAULT_LIMITS = Limits()


class CapExceeded(ValueError):
    """A requested computation is outside the configured size envelope."""
