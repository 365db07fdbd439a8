"""Explicit semicharacter constructions with exhaustive verification."""

from .gl2 import (
    CyclicCount,
    SylowFacts,
    cyclic_subgroups_of_order,
    elementary_certificate,
    gl2_cyclic_subgroup_count,
    gl2_suite,
    gl2_sylow_facts,
    gl_order,
    gl_p_part_semichars,
    unipotent_subset,
)
from .report import ConstructionReport, certify
from .sylow import cyclic_sylow_semichars, cyclic_sylows
from .symmetric import (
    KernelReport,
    TranspositionSystem,
    alternating_two_semichars,
    cycle_class_count,
    cycle_functions,
    legendre_valuation,
    restriction_kernel,
    symmetric_cycle_semichars,
    transposition_relation_system,
)
from .unipotent import (
    LogPolynomial,
    heisenberg_semichars,
    truncated_exp,
    truncated_log,
    unipotent_log,
    unitriangular_log_semichars,
    w_polynomial,
)
