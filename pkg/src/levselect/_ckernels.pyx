# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_kernels_py`` for the contract."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, hypot, atan2, acos, cos, sin

cnp.import_array()


def pivoted_qr(a):
    cdef double[:, ::1] w = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t m = w.shape[0], n = w.shape[1]
    cdef Py_ssize_t steps = min(m, n)
    cdef Py_ssize_t i, j, col, p, t
    cdef double best, s, xnorm, alpha, vnorm, dot, tmp
    perm_arr = np.arange(n, dtype=np.intp)
    cdef Py_ssize_t[::1] perm = perm_arr
    refl_arr = np.zeros((steps, m), dtype=np.float64)
    cdef double[:, ::1] refl = refl_arr
    cdef double[::1] colwork = np.zeros(n, dtype=np.float64)

    for j in range(steps):
        for col in range(j, n):
            colwork[col] = 0.0
        for i in range(j, m):
            for col in range(j, n):
                colwork[col] += w[i, col] * w[i, col]
        p = j
        best = colwork[j]
        for col in range(j + 1, n):
            if colwork[col] > best:
                best = colwork[col]
                p = col
        if p != j:
            for i in range(m):
                tmp = w[i, j]
                w[i, j] = w[i, p]
                w[i, p] = tmp
            t = perm[j]
            perm[j] = perm[p]
            perm[p] = t
        s = 0.0
        for i in range(j, m):
            s += w[i, j] * w[i, j]
        xnorm = sqrt(s)
        if xnorm == 0.0:
            continue
        alpha = -xnorm if w[j, j] >= 0 else xnorm
        for i in range(j, m):
            refl[j, i] = w[i, j]
        refl[j, j] -= alpha
        s = 0.0
        for i in range(j, m):
            s += refl[j, i] * refl[j, i]
        vnorm = sqrt(s)
        if vnorm == 0.0:
            refl[j, j] = 0.0
            for i in range(j + 1, m):
                refl[j, i] = 0.0
            continue
        for i in range(j, m):
            refl[j, i] /= vnorm
        for col in range(j, n):
            dot = 0.0
            for i in range(j, m):
                dot += refl[j, i] * w[i, col]
            dot *= 2.0
            for i in range(j, m):
                w[i, col] -= dot * refl[j, i]
        for i in range(j + 1, m):
            w[i, j] = 0.0

    r_arr = np.triu(np.asarray(w)[:steps, :])
    q_arr = np.zeros((m, steps), dtype=np.float64)
    cdef double[:, ::1] q = q_arr
    for i in range(steps):
        q[i, i] = 1.0
    for j in range(steps - 1, -1, -1):
        for col in range(steps):
            dot = 0.0
            for i in range(j, m):
                dot += refl[j, i] * q[i, col]
            dot *= 2.0
            for i in range(j, m):
                q[i, col] -= dot * refl[j, i]
    signs = np.where(np.diag(r_arr) < 0, -1.0, 1.0)
    return q_arr * signs, r_arr * signs[:, None], perm_arr


cdef double _rotation_angle(double ai, double aj, double d, double target):
    cdef double mid = 0.5 * (ai + aj)
    cdef double half = 0.5 * (ai - aj)
    cdef double radius = hypot(half, d)
    cdef double cosval
    if radius == 0.0:
        return 0.0
    cosval = (target - mid) / radius
    if cosval > 1.0:
        cosval = 1.0
    elif cosval < -1.0:
        cosval = -1.0
    return 0.5 * (atan2(-d, half) + acos(cosval))


def row_norm_chain(v, targets):
    cdef double[:, ::1] vv = np.array(v, dtype=np.float64, order="C", copy=True)
    cdef double[::1] tg = np.ascontiguousarray(targets, dtype=np.float64)
    cdef Py_ssize_t n = vv.shape[0], k = vv.shape[1]
    cdef Py_ssize_t step, q, p, i, j, t_idx, size, count, pos
    cdef double tt, ai, aj, d, phi, c, s, x, y, key

    a_arr = np.einsum("ij,ij->i", np.asarray(vv), np.asarray(vv))
    cdef double[::1] a = a_arr
    cdef Py_ssize_t[::1] order = np.argsort(-np.asarray(tg), kind="stable").astype(np.intp)
    # active rows sorted ascending by (-a, row index)
    act_order = np.lexsort((np.arange(n), -a_arr)).astype(np.intp)
    cdef Py_ssize_t[::1] act = act_order
    cdef double[::1] negkey = (-a_arr)[act_order].copy()
    assign_arr = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t[::1] assign = assign_arr
    size = n

    for step in range(n - 1):
        t_idx = order[step]
        tt = tg[t_idx]
        count = 0
        while count < size and negkey[count] < -tt:
            count += 1
        p = count - 1
        if p < 0:
            p = 0
        if p > size - 2:
            p = size - 2
        i = act[p]
        j = act[p + 1]
        ai = a[i]
        aj = a[j]
        d = 0.0
        for q in range(k):
            d += vv[i, q] * vv[j, q]
        phi = _rotation_angle(ai, aj, d, tt)
        c = cos(phi)
        s = sin(phi)
        for q in range(k):
            x = vv[i, q]
            y = vv[j, q]
            vv[i, q] = c * x - s * y
            vv[j, q] = s * x + c * y
        # drop positions p, p+1
        for q in range(p, size - 2):
            act[q] = act[q + 2]
            negkey[q] = negkey[q + 2]
        size -= 2
        a[i] = tt
        a[j] = ai + aj - tt
        key = -a[j]
        pos = 0
        while pos < size and (negkey[pos] < key or (negkey[pos] == key and act[pos] < j)):
            pos += 1
        for q in range(size, pos, -1):
            act[q] = act[q - 1]
            negkey[q] = negkey[q - 1]
        act[pos] = j
        negkey[pos] = key
        size += 1
        assign[t_idx] = i
    assign[order[n - 1]] = act[0]
    return np.asarray(vv)[assign_arr]
