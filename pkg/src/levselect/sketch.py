"""Approximate top-k right bases that can stand in for ``V_k``.

``frequent_directions_basis`` is deterministic and carries a relative
Frobenius-norm guarantee; ``rangefinder_basis`` is randomized (Gaussian
subspace iteration) and is accurate in the spectral norm on average.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidEpsilon, RankDeficient
from .matrix_core import as_matrix, svd

EXACT = "exact"
FREQUENT_DIRECTIONS = "frequent-directions"
RANGEFINDER = "rangefinder"


@dataclass(frozen=True)
class BasisArtifact:
    z: np.ndarray
    kind: str
    epsilon: float = None
    seed: int = None

    @property
    def k(self):
        return self.z.shape[1]


def _orthonormalize(z):
    q, r = np.linalg.qr(z)
    # fix signs so the result does not depend on LAPACK's sign convention
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return q * signs


def exact_basis(a, k):
    """Top-``k`` right singular vectors of ``a``."""
    f = svd(a)
    if k > f.rank:
        raise RankDeficient(f"k={k} exceeds numerical rank {f.rank}")
    return BasisArtifact(z=f.v[:, :k].copy(), kind=EXACT)


def sketch_size(k, epsilon):
    """Shrink rank ``ceil(k + k / epsilon)`` of the Frequent Directions sketch."""
    return int(math.ceil(k + k / epsilon - 1e-12))


def frequent_directions(a, ell):
    """Frequent Directions sketch of the rows of ``a``.

    Rows are streamed into a ``2 * ell`` buffer; whenever it fills, the
    buffer is rotated onto its singular directions and every squared singular
    value is reduced by the ``ell``-th one (the middle of the buffer), which
    frees at least half of the rows. Returns the ``<= 2*ell x n`` sketch.
    """
    a = as_matrix(a)
    m, n = a.shape
    cap = 2 * ell
    if cap >= m:
        return a.copy()
    buf = np.zeros((cap, n))
    filled = 0
    for row in a:
        if filled == cap:
            _, s, vt = np.linalg.svd(buf, full_matrices=False)
            delta = s[ell - 1] ** 2 if len(s) >= ell else 0.0
            shrunk = np.sqrt(np.maximum(s ** 2 - delta, 0.0))
            buf[:] = 0.0
            keep = int(np.count_nonzero(shrunk > 0))
            buf[:keep] = shrunk[:keep, None] * vt[:keep]
            filled = keep
        buf[filled] = row
        filled += 1
    return buf[:filled]


def frequent_directions_basis(a, k, epsilon):
    """Deterministic basis with ``||A - A Z Z^T||_F^2 <= (1 + eps) ||A - A_k||_F^2``."""
    if not 0 < epsilon <= 1:
        raise InvalidEpsilon(f"epsilon must lie in (0, 1], got {epsilon}")
    a = as_matrix(a)
    ell = max(sketch_size(k, epsilon), k + 1)
    b = frequent_directions(a, ell)
    _, s, vt = np.linalg.svd(b, full_matrices=False)
    if k > len(s):
        raise RankDeficient(f"sketch has only {len(s)} directions, need k={k}")
    z = _orthonormalize(vt[:k].T)
    return BasisArtifact(z=z, kind=FREQUENT_DIRECTIONS, epsilon=float(epsilon))


def power_iterations(m, n, k, epsilon, cap=20):
    """``ceil(log(min(m, n) / k) / epsilon)``, at least 1 and at most ``cap``."""
    q = math.ceil(math.log(min(m, n) / k) / epsilon)
    return int(min(max(q, 1), cap))


def rangefinder_basis(a, k, epsilon, seed, oversample=10, iters=None):
    """Randomized subspace iteration; the right basis of the captured co-range.

    A Gaussian test matrix with ``k + oversample`` columns is pushed through
    ``(A A^T)^q A`` with re-orthonormalization after every multiply.
    """
    if not 0 < epsilon < 1:
        raise InvalidEpsilon(f"epsilon must lie in (0, 1), got {epsilon}")
    a = as_matrix(a)
    m, n = a.shape
    if k > min(m, n):
        raise RankDeficient(f"k={k} exceeds min(m, n)={min(m, n)}")
    width = min(k + oversample, min(m, n))
    q_iters = power_iterations(m, n, k, epsilon) if iters is None else iters
    rng = np.random.default_rng(seed)
    omega = rng.standard_normal((n, width))
    y, _ = np.linalg.qr(a @ omega)
    for _ in range(q_iters):
        w, _ = np.linalg.qr(a.T @ y)
        y, _ = np.linalg.qr(a @ w)
    _, _, vt = np.linalg.svd(y.T @ a, full_matrices=False)
    z = _orthonormalize(vt[:k].T)
    return BasisArtifact(z=z, kind=RANGEFINDER, epsilon=float(epsilon), seed=int(seed))
