"""Error reports, the selection certificate and the column-count bounds.

Ratios in :class:`ErrorReport` are *unsquared*:
``||A - C C^+ A|| / ||A - A_k||``. The selection guarantees bound the
squared ratio by ``1 / (1 - eps)``; square before comparing.
"""
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidEpsilon, InvalidRank
from .matrix_core import (
    as_matrix,
    best_rank_k_errors,
    orthonormal_basis,
    projection_residual,
    spectral_norm,
    svd,
)


@dataclass(frozen=True)
class ErrorReport:
    spectral_abs: float
    frobenius_abs: float
    spectral_ref: float
    frobenius_ref: float
    spectral_ratio: float
    frobenius_ratio: float
    c: int
    k: int
    rank_saturated: bool = False

    def to_dict(self):
        return asdict(self)


def _ratio(num, ref):
    return num / ref if ref > 0 else None


def _report_from_residual(residual, factors, k, c):
    spec_ref, frob_ref = best_rank_k_errors(factors, k)
    frob = float(np.linalg.norm(residual))
    spec = min(spectral_norm(residual), frob)
    return ErrorReport(
        spectral_abs=spec,
        frobenius_abs=frob,
        spectral_ref=spec_ref,
        frobenius_ref=frob_ref,
        spectral_ratio=_ratio(spec, spec_ref),
        frobenius_ratio=_ratio(frob, frob_ref),
        c=c,
        k=k,
        rank_saturated=k >= factors.rank,
    )


def _columns(selection):
    if hasattr(selection, "unique_indices"):
        return selection.unique_indices()
    return list(dict.fromkeys(int(i) for i in selection))


def error_report(a, selection, k, factors=None):
    """Residual errors of ``A - C C^+ A`` against the best rank-``k`` errors.

    ``selection`` is a :class:`~levselect.selectors.SelectionResult` or a
    sequence of column indices; repeated columns are dropped before
    projecting. ``factors`` may pass a precomputed :func:`svd` of ``a``.
    When ``k >= rank(a)`` the reference errors are zero, the ratios are
    ``None`` and ``rank_saturated`` is set.
    """
    a = as_matrix(a)
    cols = _columns(selection)
    if not cols or min(cols) < 0 or max(cols) >= a.shape[1]:
        raise IndexError("selection indices out of range")
    factors = svd(a) if factors is None else factors
    residual = projection_residual(a, a[:, cols])
    return _report_from_residual(residual, factors, k, len(cols))


def _sampled_rows(v_k, selection):
    v_k = np.asarray(v_k, dtype=np.float64)
    cols = _columns(selection)
    return v_k[cols, :].T


def lemma1_certificate(v_k, selection):
    """``sigma_k(V_k^T S)^2``: the k-th squared singular value of the sampled rows.

    Zero when fewer than ``k`` distinct columns are selected.
    """
    x = _sampled_rows(v_k, selection)
    k = x.shape[0]
    if x.shape[1] < k:
        return 0.0
    s = np.linalg.svd(x, compute_uv=False)
    return float(s[k - 1] ** 2)


def check_rank_preservation(v_k, selection, tol=1e-10):
    """True iff ``rank(V_k^T S) == k`` with a relative threshold ``tol``."""
    x = _sampled_rows(v_k, selection)
    k = x.shape[0]
    if x.shape[1] < k:
        return False
    s = np.linalg.svd(x, compute_uv=False)
    if s[0] == 0:
        return False
    return int(np.count_nonzero(s > tol * s[0])) == k


def truncate(b, k):
    """Best rank-``k`` approximation of ``b`` by SVD truncation."""
    u, s, vt = np.linalg.svd(b, full_matrices=False)
    return (u[:, :k] * s[:k]) @ vt[:k]


def restricted_rank_k(a, selection, k, factors=None):
    """Rank-``k`` approximation ``Q (Q^T A)_k`` inside the span of the selected columns.

    Optimal in the Frobenius norm among rank-``k`` matrices in ``span(C)``
    and within a factor ``sqrt(2)`` of optimal in the spectral norm.
    Returns ``(approx, report)``.
    """
    a = as_matrix(a)
    cols = _columns(selection)
    if k > len(cols):
        raise InvalidRank(f"k={k} exceeds the number of selected columns ({len(cols)})")
    q = orthonormal_basis(a[:, cols])
    approx = q @ truncate(q.T @ a, k)
    factors = svd(a) if factors is None else factors
    return approx, _report_from_residual(a - approx, factors, k, len(cols))


def check_epsilon(epsilon):
    if not 0 < epsilon < 1:
        raise InvalidEpsilon(f"epsilon must lie in (0, 1), got {epsilon}")


def theorem1_factor(epsilon):
    """``1 / (1 - eps)``: bound on the squared error ratio at ``theta = k - eps``."""
    check_epsilon(epsilon)
    return 1.0 / (1.0 - epsilon)


def _ceil(x):
    # guard against values like 6399.000000000001 from pow roundoff
    return int(math.ceil(x - 1e-9 * max(1.0, abs(x))))


def theorem2_column_bound(k, epsilon, eta):
    """Column count for power-law scores with exponent ``1 + eta``.

    ``ceil(max{(2k/eps)^(1/(1+eta)) - 1, (2k/(eta eps))^(1/eta) - 1, k})``
    """
    check_epsilon(epsilon)
    if not eta > 0:
        raise InvalidEpsilon(f"eta must be positive, got {eta}")
    first = (2.0 * k / epsilon) ** (1.0 / (1.0 + eta)) - 1.0
    # (2k/(eta eps))^(1/eta) overflows for tiny eta; the bound is then huge
    try:
        second = (2.0 * k / (eta * epsilon)) ** (1.0 / eta) - 1.0
    except OverflowError:
        second = math.inf
    value = max(first, second, float(k))
    return _ceil(value) if math.isfinite(value) else math.inf


@dataclass(frozen=True)
class BoundReport:
    """Column counts needed for a relative-error guarantee at accuracy ``epsilon``.

    ``dmm08_c`` uses ``k ln k / eps^2`` with its absolute constant set to 1
    by convention; ``bdm11a_c`` is ``2k / eps``.
    """

    k: int
    epsilon: float
    eta: float
    theorem1_factor: float
    theorem2_c: int
    dmm08_c: int
    bdm11a_c: int

    def to_dict(self):
        return asdict(self)


def comparison_counts(k, epsilon, eta):
    check_epsilon(epsilon)
    return BoundReport(
        k=int(k),
        epsilon=float(epsilon),
        eta=float(eta),
        theorem1_factor=theorem1_factor(epsilon),
        theorem2_c=theorem2_column_bound(k, epsilon, eta),
        dmm08_c=max(1, _ceil(k * math.log(k) / epsilon ** 2)),
        bdm11a_c=max(1, _ceil(2.0 * k / epsilon)),
    )
