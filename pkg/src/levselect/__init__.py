"""Deterministic leverage-score column subset selection."""
__version__ = "0.1.0"

from .errors import DomainError, InputError, LevSelectError  # noqa: E402
from .evaluation import (  # noqa: E402
    comparison_counts,
    error_report,
    lemma1_certificate,
    restricted_rank_k,
    theorem1_factor,
    theorem2_column_bound,
)
from .leverage import LeverageProfile, fit_power_law, leverage_scores  # noqa: E402
from .matrix_core import pivoted_qr, svd  # noqa: E402
from .selectors import (  # noqa: E402
    select_deterministic,
    select_pivoted_qr,
    select_randomized,
    select_top,
    select_with_basis,
)
from .sketch import exact_basis, frequent_directions_basis, rangefinder_basis  # noqa: E402
from .synthgen import assemble_matrix, make_spec, orthonormal_with_row_norms  # noqa: E402

__all__ = [
    "__version__", "LevSelectError", "DomainError", "InputError",
    "svd", "pivoted_qr", "leverage_scores", "LeverageProfile", "fit_power_law",
    "select_deterministic", "select_top", "select_randomized", "select_pivoted_qr",
    "select_with_basis", "exact_basis", "frequent_directions_basis", "rangefinder_basis",
    "make_spec", "assemble_matrix", "orthonormal_with_row_norms",
    "error_report", "lemma1_certificate", "restricted_rank_k", "theorem1_factor",
    "theorem2_column_bound", "comparison_counts",
]
