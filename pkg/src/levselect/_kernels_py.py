"""Pure-Python/numpy versions of the hot kernels.

These mirror ``_ckernels.pyx`` step for step and are used whenever the
compiled module is unavailable (or ``LEVSELECT_PURE_PYTHON=1``).
"""
from bisect import bisect_left, insort

import numpy as np


def pivoted_qr(a):
    """Householder QR with greedy column pivoting (Businger-Golub).

    Returns ``(q, r, perm)`` with ``a[:, perm] == q @ r``. At every step the
    remaining column of largest residual norm is moved to the front; ties go
    to the lowest current position.
    """
    w = np.array(a, dtype=np.float64, order="C", copy=True)
    m, n = w.shape
    steps = min(m, n)
    perm = np.arange(n)
    reflectors = np.zeros((steps, m))
    for j in range(steps):
        norms = np.einsum("ij,ij->j", w[j:, j:], w[j:, j:])
        p = j + int(np.argmax(norms))
        if p != j:
            w[:, [j, p]] = w[:, [p, j]]
            perm[[j, p]] = perm[[p, j]]
        x = w[j:, j]
        xnorm = np.sqrt(x @ x)
        if xnorm == 0.0:
            continue
        alpha = -xnorm if x[0] >= 0 else xnorm
        v = x.copy()
        v[0] -= alpha
        vnorm = np.sqrt(v @ v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        reflectors[j, j:] = v
        w[j:, j:] -= 2.0 * np.outer(v, v @ w[j:, j:])
        w[j + 1:, j] = 0.0
    r = np.triu(w[:steps, :])
    q = np.zeros((m, steps))
    q[:steps, :steps] = np.eye(steps)
    for j in range(steps - 1, -1, -1):
        v = reflectors[j, j:]
        q[j:, :] -= 2.0 * np.outer(v, v @ q[j:, :])
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return q * signs, r * signs[:, None], perm


def _rotation_angle(ai, aj, d, target):
    # ||c*ri - s*rj||^2 = mid + half*cos(2phi) - d*sin(2phi)
    mid = 0.5 * (ai + aj)
    half = 0.5 * (ai - aj)
    radius = np.hypot(half, d)
    if radius == 0.0:
        return 0.0
    cosval = min(1.0, max(-1.0, (target - mid) / radius))
    return 0.5 * (np.arctan2(-d, half) + np.arccos(cosval))


def row_norm_chain(v, targets):
    """Apply plane rotations to rows of ``v`` until its squared row norms
    equal ``targets``.

    ``v`` must have orthonormal columns and squared row norms majorizing
    ``targets`` (same total). Targets are fixed in descending order; each one
    is placed on the upper row of the adjacent pair whose current norms
    straddle it, so the remaining rows keep majorizing the remaining targets.
    Rows are returned reordered so that row ``i`` carries ``targets[i]``.
    """
    v = np.array(v, dtype=np.float64, order="C", copy=True)
    targets = np.asarray(targets, dtype=np.float64)
    n = v.shape[0]
    a = np.einsum("ij,ij->i", v, v)
    order = np.argsort(-targets, kind="stable")
    active = sorted((-a[i], i) for i in range(n))
    assign = np.empty(n, dtype=np.intp)
    for step in range(n - 1):
        t_idx = order[step]
        tt = targets[t_idx]
        count = bisect_left(active, (-tt, -1))
        p = min(max(count - 1, 0), len(active) - 2)
        i = active[p][1]
        j = active[p + 1][1]
        ai, aj = a[i], a[j]
        ri = v[i].copy()
        rj = v[j].copy()
        phi = _rotation_angle(ai, aj, float(ri @ rj), tt)
        c, s = np.cos(phi), np.sin(phi)
        v[i] = c * ri - s * rj
        v[j] = s * ri + c * rj
        del active[p:p + 2]
        a[i] = tt
        a[j] = ai + aj - tt
        insort(active, (-a[j], j))
        assign[t_idx] = i
    assign[order[-1]] = active[0][1]
    return v[assign]
