# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``; identical results."""

import numpy as np
from libc.stdlib cimport malloc, free

cdef long long INF = 9223372036854775807


def min_cost_assignment(cost):
    cdef long long[:, ::1] c = np.ascontiguousarray(cost, dtype=np.int64)
    cdef Py_ssize_t n = c.shape[0]
    if n == 0:
        return []
    cdef Py_ssize_t m = c.shape[1]
    if n > m:
        raise ValueError("need rows <= columns")
    cdef long long *u = <long long *> malloc((n + 1) * sizeof(long long))
    cdef long long *v = <long long *> malloc((m + 1) * sizeof(long long))
    cdef long long *minv = <long long *> malloc((m + 1) * sizeof(long long))
    cdef Py_ssize_t *owner = <Py_ssize_t *> malloc((m + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *way = <Py_ssize_t *> malloc((m + 1) * sizeof(Py_ssize_t))
    cdef char *used = <char *> malloc((m + 1) * sizeof(char))
    cdef Py_ssize_t i, j, i0, j0, j1
    cdef long long delta, cur
    if not (u and v and minv and owner and way and used):
        free(u); free(v); free(minv); free(owner); free(way); free(used)
        raise MemoryError()
    try:
        with nogil:
            for i in range(n + 1):
                u[i] = 0
            for j in range(m + 1):
                v[j] = 0
                owner[j] = 0
                way[j] = 0
            for i in range(1, n + 1):
                owner[0] = i
                j0 = 0
                for j in range(m + 1):
                    minv[j] = INF
                    used[j] = 0
                while True:
                    used[j0] = 1
                    i0 = owner[j0]
                    delta = INF
                    j1 = 0
                    for j in range(1, m + 1):
                        if not used[j]:
                            cur = c[i0 - 1, j - 1] - u[i0] - v[j]
                            if cur < minv[j]:
                                minv[j] = cur
                                way[j] = j0
                            if minv[j] < delta:
                                delta = minv[j]
                                j1 = j
                    for j in range(m + 1):
                        if used[j]:
                            u[owner[j]] += delta
                            v[j] -= delta
                        else:
                            minv[j] -= delta
                    j0 = j1
                    if owner[j0] == 0:
                        break
                while j0:
                    j1 = way[j0]
                    owner[j0] = owner[j1]
                    j0 = j1
        result = [0] * n
        for j in range(1, m + 1):
            if owner[j]:
                result[owner[j] - 1] = j - 1
        return result
    finally:
        free(u); free(v); free(minv); free(owner); free(way); free(used)


cdef inline double _f1(long long tp, long long fp, long long fn) noexcept nogil:
    cdef long long denom = 2 * tp + fp + fn
    if denom == 0:
        return 1.0
    return 2.0 * tp / denom


def bootstrap_deltas(counts_a, counts_b, samples):
    cdef long long[:, ::1] a = np.ascontiguousarray(counts_a, dtype=np.int64)
    cdef long long[:, ::1] b = np.ascontiguousarray(counts_b, dtype=np.int64)
    cdef long long[:, ::1] s = np.ascontiguousarray(samples, dtype=np.int64)
    cdef Py_ssize_t reps = s.shape[0], n = s.shape[1], r, k
    cdef long long d, ta, fa, na, tb, fb, nb
    out = np.empty(reps, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for r in range(reps):
            ta = fa = na = tb = fb = nb = 0
            for k in range(n):
                d = s[r, k]
                ta += a[d, 0]; fa += a[d, 1]; na += a[d, 2]
                tb += b[d, 0]; fb += b[d, 1]; nb += b[d, 2]
            o[r] = _f1(ta, fa, na) - _f1(tb, fb, nb)
    return out
