# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the NumPy kernels in numpy_impl.py.

Same call signatures, same semantics, same tie-breaking; only faster. The
split scan in particular turns an O(W*k) vectorized pass per update into a
tight C loop, which dominates whole-stream detector runs.
"""

from libc.math cimport fabs, log, pow, sqrt
from libc.stdlib cimport free, malloc

import numpy as np

SINGLE, COMPLETE, AVERAGE, WEIGHTED, CENTROID, MEDIAN, WARD = range(7)

DEF INF = 1e300


def adwin_scan(double[:, ::1] cum, Py_ssize_t start, Py_ssize_t end,
               int p, double delta, Py_ssize_t min_sub):
    """First admissible split whose mean difference beats the bound, or 0."""
    cdef Py_ssize_t w = end - start
    if w < 2 * min_sub:
        return 0
    cdef Py_ssize_t k = cum.shape[1]
    cdef double ratio = 4.0 * w / (k * delta)
    if ratio <= 1.0:
        return 0
    cdef double log_ratio = log(ratio)
    cdef double kfac = pow(k, 1.0 / p)
    cdef Py_ssize_t n0, j
    cdef double n1, m0, m1, diff, stat, eps
    for n0 in range(min_sub, w - min_sub + 1):
        n1 = w - n0
        stat = 0.0
        if p == 2:
            for j in range(k):
                m0 = (cum[start + n0, j] - cum[start, j]) / n0
                m1 = (cum[end, j] - cum[start + n0, j]) / n1
                diff = m0 - m1
                stat += diff * diff
            eps = k * log_ratio * w / (4.0 * n0 * n1)
            if stat > eps:
                return n0
        else:
            for j in range(k):
                m0 = (cum[start + n0, j] - cum[start, j]) / n0
                m1 = (cum[end, j] - cum[start + n0, j]) / n1
                stat += pow(fabs(m0 - m1), p)
            stat = pow(stat, 1.0 / p)
            eps = kfac * sqrt(log_ratio * w / (4.0 * n0 * n1))
            if stat > eps:
                return n0
    return 0


def chain_solve_r1(double[:, ::1] unary, double[::1] edge_weights):
    """Exact radius-1 Potts chain minimizer, lexicographically smallest."""
    cdef Py_ssize_t T = unary.shape[0]
    cdef Py_ssize_t L = unary.shape[1]
    suffix_arr = np.empty((T, L))
    labels_arr = np.empty(T, dtype=np.int64)
    cdef double[:, ::1] suffix = suffix_arr
    cdef long long[::1] labels = labels_arr
    cdef Py_ssize_t i, l, best
    cdef double m1, m2, v, w, stay, switch, cbest

    for l in range(L):
        suffix[T - 1, l] = unary[T - 1, l]
    for i in range(T - 2, -1, -1):
        best = 0
        m1 = INF
        m2 = INF
        for l in range(L):
            v = suffix[i + 1, l]
            if v < m1:
                m2 = m1
                m1 = v
                best = l
            elif v < m2:
                m2 = v
        w = edge_weights[i]
        for l in range(L):
            stay = suffix[i + 1, l]
            switch = w + (m2 if l == best else m1)
            suffix[i, l] = unary[i, l] + (stay if stay <= switch else switch)

    best = 0
    m1 = INF
    for l in range(L):
        if suffix[0, l] < m1:
            m1 = suffix[0, l]
            best = l
    labels[0] = best
    for i in range(1, T):
        w = edge_weights[i - 1]
        best = 0
        cbest = INF
        for l in range(L):
            v = suffix[i, l]
            if l != labels[i - 1]:
                v += w
            if v < cbest:
                cbest = v
                best = l
        labels[i] = best
    return labels_arr


def lw_linkage(dist, int method):
    """Lance-Williams agglomeration; see numpy_impl.lw_linkage for the contract."""
    d_arr = np.array(dist, dtype=np.float64, order="C")
    cdef Py_ssize_t n = d_arr.shape[0]
    merges_arr = np.empty((n - 1, 4))
    cdef double[:, ::1] d = d_arr
    cdef double[:, ::1] merges = merges_arr
    cdef double* sizes = <double*> malloc(n * sizeof(double))
    cdef long long* ids = <long long*> malloc(n * sizeof(long long))
    cdef unsigned char* alive = <unsigned char*> malloc(n)
    if sizes == NULL or ids == NULL or alive == NULL:
        free(sizes); free(ids); free(alive)
        raise MemoryError()
    cdef Py_ssize_t step, i, j, a, b, m
    cdef double best, height, na, nb, nc, nab, updated
    try:
        for i in range(n):
            sizes[i] = 1.0
            ids[i] = i
            alive[i] = 1
            d[i, i] = INF
        for step in range(n - 1):
            a = -1
            b = -1
            best = INF
            for i in range(n):
                if not alive[i]:
                    continue
                for j in range(i + 1, n):
                    if alive[j] and d[i, j] < best:
                        best = d[i, j]
                        a = i
                        b = j
            height = d[a, b]
            na = sizes[a]
            nb = sizes[b]
            if ids[a] < ids[b]:
                merges[step, 0] = ids[a]
                merges[step, 1] = ids[b]
            else:
                merges[step, 0] = ids[b]
                merges[step, 1] = ids[a]
            merges[step, 2] = height
            merges[step, 3] = na + nb
            nab = na + nb
            for m in range(n):
                if not alive[m] or m == a or m == b:
                    continue
                if method == SINGLE:
                    updated = d[a, m] if d[a, m] <= d[b, m] else d[b, m]
                elif method == COMPLETE:
                    updated = d[a, m] if d[a, m] >= d[b, m] else d[b, m]
                elif method == AVERAGE:
                    updated = (na * d[a, m] + nb * d[b, m]) / nab
                elif method == WEIGHTED:
                    updated = 0.5 * (d[a, m] + d[b, m])
                elif method == CENTROID:
                    updated = (na * d[a, m] + nb * d[b, m]) / nab - (na * nb * height) / (nab * nab)
                elif method == MEDIAN:
                    updated = 0.5 * d[a, m] + 0.5 * d[b, m] - 0.25 * height
                elif method == WARD:
                    nc = sizes[m]
                    updated = ((na + nc) * d[a, m] + (nb + nc) * d[b, m] - nc * height) / (nab + nc)
                else:
                    raise ValueError(f"unknown linkage method code {method}")
                d[a, m] = updated
                d[m, a] = updated
            d[a, a] = INF
            for m in range(n):
                d[b, m] = INF
                d[m, b] = INF
            alive[b] = 0
            sizes[a] = nab
            ids[a] = n + step
    finally:
        free(sizes)
        free(ids)
        free(alive)
    return merges_arr
