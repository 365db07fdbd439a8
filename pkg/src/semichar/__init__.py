"""Semicharacter groups of finite groups: exact computation and explicit constructions."""

from .config import DEFAULT_LIMITS, CapExceeded, Limits
from .engine import (
    Semicharacter,
    SemicharGroupDesc,
    conjecture_check,
    enumerate_semichar_generators,
    extend_from_l_part,
    l_torsion_rank,
    localized_semichar_group,
    semichar_group,
    verify_semicharacter,
)
from .families import RealizedGroup, builtin_corpus, parse_family
from .groups import GroupAxiomError, GroupTable

__version__ = "0.1.0"
