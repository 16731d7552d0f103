"""Synthetic matrices with prescribed rank-k leverage scores.

``A = U diag(sigma) V^T`` where the first ``k`` columns of ``V`` are an
orthonormal matrix whose squared row norms equal the requested targets.
"""
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import EmptyComplement, InfeasibleTargets
from .leverage import check_orthonormal

NEAR_UNIFORM = "near-uniform"
POWER_LAW = "power-law"
CUSTOM = "custom"

TARGET_TOL = 1e-10
GAP_TOL = 1e-6

# weight exponents tried when looking for a generic starting basis
_SPREADS = (1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0)


def check_targets(targets, k):
    t = np.asarray(targets, dtype=np.float64)
    if t.ndim != 1 or t.size == 0:
        raise InfeasibleTargets("targets must be a non-empty vector")
    if not 1 <= k <= t.size:
        raise InfeasibleTargets(f"k={k} must lie in [1, n={t.size}]")
    if np.any(~np.isfinite(t)) or np.any(t < -TARGET_TOL) or np.any(t > 1 + TARGET_TOL):
        raise InfeasibleTargets("every target must lie in [0, 1]")
    if abs(t.sum() - k) > TARGET_TOL * max(1.0, k):
        raise InfeasibleTargets(f"targets sum to {t.sum()!r}, expected k={k}")
    return np.clip(t, 0.0, 1.0)


@dataclass(frozen=True)
class SyntheticSpec:
    m: int
    n: int
    k: int
    targets: np.ndarray
    seed: int
    profile_kind: str = CUSTOM
    capped: bool = field(default=False)

    def __post_init__(self):
        if not 1 <= self.k <= min(self.m, self.n):
            raise InfeasibleTargets(f"k={self.k} must lie in [1, min(m, n)]")
        if len(self.targets) != self.n:
            raise InfeasibleTargets(f"expected {self.n} targets, got {len(self.targets)}")
        check_targets(self.targets, self.k)


def majorizes(a, b, tol=1e-12):
    """True if ``a`` majorizes ``b`` (equal totals assumed)."""
    ca = np.cumsum(np.sort(a)[::-1])
    cb = np.cumsum(np.sort(b)[::-1])
    return bool(np.all(ca >= cb - tol))


def _starting_basis(targets, k, rng):
    # A generic orthonormal start spreads every direction over many rows. The
    # rotation chain needs the start's row norms to majorize the targets, so
    # sharpen the row weights until they do; fall back to [Q; 0], which
    # majorizes every feasible target vector.
    n = len(targets)
    g = rng.standard_normal((n, k))
    for p in _SPREADS:
        v, _ = np.linalg.qr(g * (targets ** (0.5 * p))[:, None])
        if majorizes(np.einsum("ij,ij->i", v, v), targets):
            return v
    v = np.zeros((n, k))
    v[:k], _ = np.linalg.qr(rng.standard_normal((k, k)))
    return v


def orthonormal_with_row_norms(targets, k, seed):
    """``n x k`` matrix with orthonormal columns and squared row norms ``targets``.

    Rows whose target is 1 are pinned to an orthonormal set (every other row
    must be orthogonal to them). The rest start from a generic orthonormal
    matrix whose row norms majorize their targets; plane rotations between
    row pairs then set the row norms exactly while keeping the columns
    orthonormal.
    """
    t = check_targets(targets, k)
    rng = np.random.default_rng(seed)
    n = t.size
    full = t >= 1.0 - TARGET_TOL
    r = int(np.count_nonzero(full))
    if r > k:
        raise InfeasibleTargets(f"{r} unit targets exceed k={k}")
    basis, _ = np.linalg.qr(rng.standard_normal((k, k)))
    v = np.zeros((n, k))
    v[full] = basis[:r]
    if r < k:
        rest = t[~full]
        rest = rest * ((k - r) / rest.sum())
        start = _starting_basis(rest, k - r, rng)
        w = kernels.row_norm_chain(start, rest)
        v[~full] = w @ basis[r:]
    return v


def complete_basis(v_k, seed=0):
    """Orthonormal ``n x (n - k)`` complement of the columns of ``v_k``."""
    v_k = np.asarray(v_k, dtype=np.float64)
    n, k = v_k.shape
    if k >= n:
        raise EmptyComplement(f"k={k} leaves no complement in R^{n}")
    check_orthonormal(v_k, name="v_k")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n - k))
    # two projection passes against v_k before the QR keep the result
    # orthogonal to v_k at roundoff level
    for _ in range(2):
        g -= v_k @ (v_k.T @ g)
    q, _ = np.linalg.qr(g)
    q -= v_k @ (v_k.T @ q)
    q, _ = np.linalg.qr(q)
    return q


def random_orthogonal(m, rng):
    q, r = np.linalg.qr(rng.standard_normal((m, m)))
    return q * np.where(np.diag(r) < 0, -1.0, 1.0)


def draw_singular_values(count, k, rng, gap_tol=GAP_TOL, max_tries=100):
    """Sorted absolute Gaussians, redrawn while ``sigma_k`` and ``sigma_{k+1}`` nearly tie."""
    for _ in range(max_tries):
        s = np.sort(np.abs(rng.standard_normal(count)))[::-1]
        if s[-1] <= 0:
            continue
        if k >= count or (s[k - 1] - s[k]) > gap_tol * s[0]:
            return s
    raise RuntimeError("could not draw singular values with a spectral gap")


def assemble_factors(spec):
    """Return ``(A, u, sigma, v)`` for ``spec``; ``v`` is the full ``n x n`` basis."""
    rng = np.random.default_rng(spec.seed)
    seeds = rng.integers(0, 2 ** 63 - 1, size=3)
    v_k = orthonormal_with_row_norms(spec.targets, spec.k, int(seeds[0]))
    if spec.k < spec.n:
        v = np.hstack([v_k, complete_basis(v_k, int(seeds[1]))])
    else:
        v = v_k
    aux = np.random.default_rng(int(seeds[2]))
    u = random_orthogonal(spec.m, aux)
    r = min(spec.m, spec.n)
    sigma = draw_singular_values(r, spec.k, aux)
    a = (u[:, :r] * sigma) @ v[:, :r].T
    return a, u, sigma, v


def assemble_matrix(spec):
    """``A = U Sigma V^T`` whose rank-k leverage scores equal ``spec.targets``."""
    return assemble_factors(spec)[0]


def near_uniform_targets(n, k, seed, scale=0.01):
    """``k/n`` everywhere, then ``+beta``/``-beta`` on disjoint consecutive pairs.

    ``beta`` is normal with standard deviation ``scale`` (``N(0, 1/100)`` read
    with ``1/100`` as the deviation, which keeps the profile near flat) and is
    redrawn until both perturbed entries stay in ``[0, 1]``, so the total
    stays exactly ``k``.
    """
    if not 0 < k < n:
        raise InfeasibleTargets(f"need 0 < k < n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    base = k / n
    t = np.full(n, base)
    for i in range(0, n - 1, 2):
        while True:
            beta = rng.normal(0.0, scale)
            lo, hi = base + beta, base - beta
            if 0.0 <= lo <= 1.0 and 0.0 <= hi <= 1.0:
                break
        t[i], t[i + 1] = lo, hi
    return t


def power_law_targets(n, k, alpha):
    """Scores ``l_1 / i**alpha`` summing to ``k``, capped at 1 where needed.

    Returns ``(targets, capped)``. When the raw leading score exceeds 1 the
    leading entries are set to 1 and the remaining ones are rescaled, keeping
    their ``i**-alpha`` shape, until the profile is feasible.
    """
    if not 0 < k < n:
        raise InfeasibleTargets(f"need 0 < k < n, got k={k}, n={n}")
    if not alpha > 0:
        raise InfeasibleTargets(f"alpha must be positive, got {alpha}")
    w = np.arange(1, n + 1, dtype=np.float64) ** (-alpha)
    pinned = np.zeros(n, dtype=bool)
    while True:
        t = np.ones(n)
        free = ~pinned
        t[free] = w[free] * ((k - pinned.sum()) / w[free].sum())
        over = free & (t > 1.0)
        if not over.any():
            break
        pinned |= over
    t = np.minimum(t, 1.0)
    # restore the exact total after clipping roundoff
    free = ~pinned
    t[free] *= (k - pinned.sum()) / t[free].sum()
    return t, bool(pinned.any())


def make_spec(kind, m, n, k, seed, alpha=None, targets=None):
    """Build a :class:`SyntheticSpec` for one of the named profile families."""
    if kind == NEAR_UNIFORM:
        t, capped = near_uniform_targets(n, k, seed), False
    elif kind == POWER_LAW:
        if alpha is None:
            raise ValueError("power-law profiles need alpha")
        t, capped = power_law_targets(n, k, alpha)
    elif kind == CUSTOM:
        if targets is None:
            raise ValueError("custom profiles need targets")
        t, capped = np.asarray(targets, dtype=np.float64), False
    else:
        raise ValueError(f"unknown profile kind {kind!r}")
    return SyntheticSpec(m=m, n=n, k=k, targets=t, seed=seed, profile_kind=kind, capped=capped)
