"""Column selection: deterministic leverage sampling and its baselines.

Column indices are 0-based here; the CLI reports them 1-based.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleThreshold
from .leverage import leverage_scores
from .matrix_core import as_matrix, pivoted_qr

DETERMINISTIC = "deterministic-leverage"
RANDOMIZED = "randomized-leverage"
PIVOTED_QR = "pivoted-qr"
APPROX_BASIS = "approx-basis"
METHODS = (DETERMINISTIC, RANDOMIZED, PIVOTED_QR, APPROX_BASIS)


@dataclass(frozen=True)
class SelectionResult:
    indices: tuple
    mass: float
    method: str
    k: int
    seed: int = None
    theta: float = None
    forced: bool = field(default=False)

    @property
    def c(self):
        return len(self.indices)

    def unique_indices(self):
        """Selected columns with repeats removed, in first-seen order."""
        return list(dict.fromkeys(self.indices))


def theta_from_epsilon(k, epsilon):
    """Stopping threshold ``k - epsilon``."""
    return k - epsilon


def stopping_count(sorted_scores, theta):
    """Smallest ``c`` with ``sum(sorted_scores[:c]) > theta``, or ``None``."""
    prefix = np.cumsum(sorted_scores)
    hits = np.flatnonzero(prefix > theta)
    if hits.size == 0:
        return None
    return int(hits[0]) + 1


def _mass(profile, indices):
    return float(np.sum(profile.scores[list(indices)])) if len(indices) else 0.0


def select_deterministic(profile, theta, method=DETERMINISTIC):
    """Keep the top-scoring columns until their mass strictly exceeds ``theta``.

    If fewer than ``k`` columns reach the threshold the count is raised to
    ``k``. Requires ``0 < theta < k``.
    """
    k = profile.k
    if not theta > 0:
        raise InfeasibleThreshold(f"theta must be positive, got {theta}")
    if theta >= k:
        raise InfeasibleThreshold(f"theta={theta} >= k={k}: no prefix can exceed the total mass")
    c = stopping_count(profile.sorted_scores, theta)
    if c is None:
        # only reachable through roundoff when theta is within ulps of k
        raise InfeasibleThreshold(f"scores never exceed theta={theta}")
    forced = c < k
    c = max(c, k)
    idx = tuple(int(i) for i in profile.order[:c])
    return SelectionResult(indices=idx, mass=_mass(profile, idx), method=method,
                           k=k, theta=float(theta), forced=forced)


def select_top(profile, c):
    """Top-``c`` columns by score (the fixed-count form used in c-sweeps)."""
    if not 1 <= c <= profile.n:
        raise ValueError(f"c must be in [1, {profile.n}], got {c}")
    idx = tuple(int(i) for i in profile.order[:c])
    return SelectionResult(indices=idx, mass=_mass(profile, idx), method=DETERMINISTIC,
                           k=profile.k)


def sampling_probabilities(profile):
    p = np.clip(profile.scores, 0.0, None) / profile.k
    return p / p.sum()


def select_randomized(profile, c, seed):
    """``c`` i.i.d. draws with probabilities ``score_i / k``; repeats are kept."""
    if c < 1:
        raise ValueError("c must be >= 1")
    rng = np.random.default_rng(seed)
    draws = rng.choice(profile.n, size=c, replace=True, p=sampling_probabilities(profile))
    idx = tuple(int(i) for i in draws)
    return SelectionResult(indices=idx, mass=_mass(profile, idx), method=RANDOMIZED,
                           k=profile.k, seed=int(seed))


def select_pivoted_qr(a, c, profile=None):
    """First ``c`` pivots of column-pivoted QR."""
    a = as_matrix(a)
    n = a.shape[1]
    if not 1 <= c <= n:
        raise ValueError(f"c must be in [1, {n}], got {c}")
    _, _, perm = pivoted_qr(a)
    idx = tuple(int(i) for i in perm[:c])
    mass = _mass(profile, idx) if profile is not None else float("nan")
    k = profile.k if profile is not None else 0
    return SelectionResult(indices=idx, mass=mass, method=PIVOTED_QR, k=k)


def select_with_basis(a, z, k, theta):
    """Deterministic selection driven by the row norms of an approximate basis ``z``."""
    z = np.asarray(z, dtype=np.float64)
    if a is not None and z.shape[0] != np.shape(a)[1]:
        raise ValueError("z must have one row per column of a")
    profile = leverage_scores(z, k)
    return select_deterministic(profile, theta, method=APPROX_BASIS)


__all__ = [
    "SelectionResult", "METHODS", "DETERMINISTIC", "RANDOMIZED",
    "PIVOTED_QR", "APPROX_BASIS", "theta_from_epsilon", "stopping_count",
    "select_deterministic", "select_top", "select_randomized", "select_pivoted_qr",
    "select_with_basis", "sampling_probabilities",
]
