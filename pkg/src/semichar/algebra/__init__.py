from .fields import FiniteField, field_embedding, field_make, is_irreducible
from .matrices import MatrixFq, mat_det, mat_inv, mat_mul, mat_pow, mat_trace
from .perms import (
    Permutation,
    cycle_type,
    cycles,
    cycles_of_length,
    perm_parse,
    perm_print,
)

__all__ = [
    "FiniteField",
    "MatrixFq",
    "Permutation",
    "cycle_type",
    "cycles",
    "cycles_of_length",
    "field_embedding",
    "field_make",
    "is_irreducible",
    "mat_det",
    "mat_inv",
    "mat_mul",
    "mat_pow",
    "mat_trace",
    "perm_parse",
    "perm_print",
]
