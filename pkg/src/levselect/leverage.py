"""Rank-k leverage scores and power-law fits of their decay."""
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientData, NotOrthonormal

ORTHO_TOL = 1e-8


@dataclass(frozen=True)
class LeverageProfile:
    """Per-column leverage scores for rank parameter ``k``.

    ``order`` lists column indices (0-based) by descending score, ties broken
    by ascending index.
    """

    k: int
    scores: np.ndarray
    order: np.ndarray

    @classmethod
    def from_scores(cls, scores, k):
        scores = np.asarray(scores, dtype=np.float64)
        return cls(k=int(k), scores=scores, order=descending_order(scores))

    @property
    def n(self):
        return len(self.scores)

    @property
    def sorted_scores(self):
        return self.scores[self.order]

    def check(self, tol=1e-8):
        """Raise ``ValueError`` if the profile violates its invariants."""
        s = self.scores
        if np.any(s < 0) or np.any(s > 1 + 1e-10):
            raise ValueError("leverage scores must lie in [0, 1]")
        if abs(s.sum() - self.k) > tol * self.k:
            raise ValueError(f"scores sum to {s.sum()!r}, expected {self.k}")
        if sorted(self.order.tolist()) != list(range(len(s))):
            raise ValueError("order is not a permutation")
        if np.any(np.diff(s[self.order]) > 0):
            raise ValueError("order does not sort scores descending")
        return self


def descending_order(scores):
    """Indices sorting ``scores`` descending; equal scores keep index order."""
    return np.argsort(-np.asarray(scores), kind="stable")


def check_orthonormal(v, tol=ORTHO_TOL, name="basis"):
    gram = v.T @ v
    err = np.max(np.abs(gram - np.eye(v.shape[1]))) if v.size else 0.0
    if err > tol:
        raise NotOrthonormal(f"{name} columns are not orthonormal (max |V^T V - I| = {err:.3g})")


def leverage_scores(v_k, k=None):
    """Squared row norms of the ``n x k`` orthonormal matrix ``v_k``."""
    v_k = np.asarray(v_k, dtype=np.float64)
    if v_k.ndim != 2:
        raise ValueError("v_k must be 2-D")
    if k is None:
        k = v_k.shape[1]
    if v_k.shape[1] != k:
        raise ValueError(f"v_k has {v_k.shape[1]} columns, expected k={k}")
    check_orthonormal(v_k, name="v_k")
    scores = np.einsum("ij,ij->i", v_k, v_k)
    return LeverageProfile.from_scores(scores, k)


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit of ``score_i ~ beta * i**(-alpha)`` in log-log space."""

    alpha: float
    beta: float
    r_squared: float
    fitted_count: int

    def predict(self, ranks):
        return self.beta * np.asarray(ranks, dtype=np.float64) ** (-self.alpha)


def fit_power_law(profile, top_t=None):
    """Fit a power law to the largest scores.

    ``profile`` may be a :class:`LeverageProfile` or any array of scores.
    The top ``top_t`` sorted scores are used (default ``min(n, 1000)``);
    zero scores are skipped since their logarithm is undefined.
    """
    if isinstance(profile, LeverageProfile):
        ranked = profile.sorted_scores
    else:
        raw = np.asarray(profile, dtype=np.float64)
        ranked = raw[descending_order(raw)]
    if top_t is None:
        top_t = min(len(ranked), 1000)
    if top_t < 2:
        raise InsufficientData("top_t must be at least 2")
    head = ranked[:top_t]
    ranks = np.arange(1, len(head) + 1, dtype=np.float64)
    positive = head > 0
    if np.count_nonzero(positive) < 2:
        raise InsufficientData("need at least two positive scores to fit a power law")
    x = np.log(ranks[positive])
    y = np.log(head[positive])
    design = np.column_stack([np.ones_like(x), -x])
    (log_beta, alpha), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ np.array([log_beta, alpha])
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(resid @ resid)
    if ss_tot <= 1e-300:
        r2 = 1.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return PowerLawFit(alpha=float(alpha), beta=float(np.exp(log_beta)),
                       r_squared=r2, fitted_count=int(x.size))
