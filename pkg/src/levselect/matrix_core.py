"""Dense linear-algebra substrate: SVD, pivoted QR, norms and projections.

Matrices are plain 2-D ``float64`` numpy arrays throughout the package.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ZeroMatrix

EPS = np.finfo(np.float64).eps


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D float64 array (no copy if already one)."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD ``a = u @ diag(sigma) @ v.T`` truncated to the numerical rank."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    @property
    def rank(self):
        return len(self.sigma)

    @property
    def shape(self):
        return self.u.shape[0], self.v.shape[0]

    def top_right(self, k):
        """First ``k`` right singular vectors as an ``n x k`` matrix."""
        return self.v[:, :k]


def svd(a):
    """Thin SVD of ``a`` truncated at the standard numerical rank.

    Singular values at or below ``max(m, n) * eps * sigma_1`` are dropped.
    """
    a = as_matrix(a)
    if not np.any(a):
        raise ZeroMatrix("svd of an all-zero matrix")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    cutoff = max(a.shape) * EPS * s[0]
    rank = int(np.count_nonzero(s > cutoff))
    return SvdFactors(u=u[:, :rank], sigma=s[:rank], v=vt[:rank].T)


def best_rank_k_errors(f, k):
    """Spectral and Frobenius error of the best rank-``k`` approximation."""
    if k < 1:
        raise ValueError("k must be >= 1")
    tail = np.asarray(f.sigma)[k:]
    if tail.size == 0:
        return 0.0, 0.0
    return float(tail[0]), float(np.sqrt(np.sum(tail ** 2)))


def pivoted_qr(a):
    """QR with column pivoting: ``a[:, perm] = q @ r``.

    The pivot at each step is the remaining column with the largest residual
    Euclidean norm, so ``|r[i, i]|`` is non-increasing. ``q`` is ``m x p`` and
    ``r`` is ``p x n`` with ``p = min(m, n)``.
    """
    a = as_matrix(a)
    if not np.any(a):
        raise ZeroMatrix("pivoted QR of an all-zero matrix")
    return kernels.pivoted_qr(a)


def spectral_norm(a, tol=1e-12, maxiter=5000, block=8, seed=0):
    """Largest singular value via block power iteration with Rayleigh-Ritz.

    Iterates on the smaller Gram side and stops once the leading Ritz value
    changes by less than ``tol`` (relative) between sweeps.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.size == 0 or not np.any(a):
        return 0.0
    m, n = a.shape
    if m < n:
        a = a.T
        m, n = n, m
    b = min(block, n)
    rng = np.random.default_rng(seed)
    x, _ = np.linalg.qr(rng.standard_normal((n, b)))
    prev = -1.0
    for _ in range(maxiter):
        y = a.T @ (a @ x)
        # Rayleigh-Ritz on the current block
        h = x.T @ y
        evals, evecs = np.linalg.eigh(0.5 * (h + h.T))
        theta = evals[-1]
        x, _ = np.linalg.qr(y @ evecs[:, ::-1])
        if prev > 0 and abs(theta - prev) <= tol * theta:
            break
        prev = theta
    # Rayleigh quotient of the converged leading vector
    top = x[:, 0]
    return float(np.linalg.norm(a @ top))


def orthonormal_basis(c, drop_tol=1e-12):
    """Orthonormal basis of ``span(c)`` from rank-revealing pivoted QR.

    Directions whose pivot ``|r_ii|`` falls below ``drop_tol`` times the
    largest column norm are discarded. Returns an ``m x r`` matrix (``r`` may
    be zero).
    """
    c = np.asarray(c, dtype=np.float64)
    if c.ndim == 1:
        c = c[:, None]
    m = c.shape[0]
    if c.size == 0 or not np.any(c):
        return np.zeros((m, 0))
    q, r, _ = kernels.pivoted_qr(c)
    diag = np.abs(np.diag(r))
    largest = np.sqrt(np.max(np.einsum("ij,ij->j", c, c)))
    keep = int(np.count_nonzero(diag > drop_tol * largest))
    return q[:, :keep]


def projection_residual(a, c):
    """``A - Q Q^T A`` where ``Q`` spans the columns of ``c``.

    Equivalent to ``A - C C^+ A`` without forming a pseudo-inverse. A zero
    ``c`` returns a copy of ``a``.
    """
    a = as_matrix(a)
    c = np.asarray(c, dtype=np.float64)
    if c.ndim == 1:
        c = c[:, None]
    if c.shape[0] != a.shape[0]:
        raise ValueError(f"row mismatch: a has {a.shape[0]}, c has {c.shape[0]}")
    q = orthonormal_basis(c)
    if q.shape[1] == 0:
        return a.copy()
    res = a - q @ (q.T @ a)
    # one reorthogonalization pass keeps ||Q^T res|| at roundoff level
    res -= q @ (q.T @ res)
    return res
