"""Degree tables for private distributed matrix multiplication on the grid partition."""

from .construction import build_grid_cat, grid_cat_params, lemma3_check, theorem2_bound
from .errors import (
    FieldSearchError,
    GridcatError,
    InvalidTableError,
    PointsNotFoundError,
    PreconditionError,
    SchemaError,
    SingularMatrixError,
)
from .extension import (
    check_constant_antidiagonals,
    check_lemma2_constraints,
    check_theorem1_bounds,
    extend,
    extend_cat_to_cat,
    extend_dt_to_cat,
    extend_dt_to_dt,
    gap,
    is_arithmetic_progression,
)
from .ffield import FieldMatrix, FieldSpec, find_field, is_invertible, solve, vandermonde
from .protocol import end_to_end, privacy_audit, split_matrix
from .search import brute_validate, search_min_table, sweep, sweep_to_csv
from .tables import (
    DegreeTable,
    TableParams,
    ValidationReport,
    check_condition_iv,
    decompose,
    load_table,
    read_table_file,
    save_table,
    validate,
    worker_count,
    write_table_file,
)

__version__ = "0.1.0"

__all__ = [
    "DegreeTable",
    "TableParams",
    "ValidationReport",
    "FieldMatrix",
    "FieldSpec",
    "GridcatError",
    "SchemaError",
    "PreconditionError",
    "SingularMatrixError",
    "FieldSearchError",
    "PointsNotFoundError",
    "InvalidTableError",
    "build_grid_cat",
    "grid_cat_params",
    "lemma3_check",
    "theorem2_bound",
    "check_constant_antidiagonals",
    "check_lemma2_constraints",
    "check_theorem1_bounds",
    "check_condition_iv",
    "extend",
    "extend_cat_to_cat",
    "extend_dt_to_cat",
    "extend_dt_to_dt",
    "gap",
    "is_arithmetic_progression",
    "find_field",
    "is_invertible",
    "solve",
    "vandermonde",
    "end_to_end",
    "privacy_audit",
    "split_matrix",
    "brute_validate",
    "search_min_table",
    "sweep",
    "sweep_to_csv",
    "decompose",
    "load_table",
    "save_table",
    "read_table_file",
    "write_table_file",
    "validate",
    "worker_count",
]
