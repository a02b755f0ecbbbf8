# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; must stay result-identical to ``_kernels_py``."""
from libc.math cimport INFINITY
from libc.stdlib cimport malloc, free

import numpy as np


cdef inline bint _less(double da, long a, double db, long b) noexcept nogil:
    return da < db or (da == db and a < b)


cdef void _sift_up(double* hd, long* hn, long i) noexcept nogil:
    cdef long parent
    cdef double td
    cdef long tn
    while i > 0:
        parent = (i - 1) >> 1
        if _less(hd[i], hn[i], hd[parent], hn[parent]):
            td = hd[i]; hd[i] = hd[parent]; hd[parent] = td
            tn = hn[i]; hn[i] = hn[parent]; hn[parent] = tn
            i = parent
        else:
            break


cdef void _sift_down(double* hd, long* hn, long size) noexcept nogil:
    cdef long i = 0, child, best
    cdef double td
    cdef long tn
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        best = child
        if child + 1 < size and _less(hd[child + 1], hn[child + 1], hd[child], hn[child]):
            best = child + 1
        if _less(hd[best], hn[best], hd[i], hn[i]):
            td = hd[i]; hd[i] = hd[best]; hd[best] = td
            tn = hn[i]; hn[i] = hn[best]; hn[best] = tn
            i = best
        else:
            break


def dijkstra(const long long[:] indptr, const long long[:] indices, const double[:] weights, long src):
    cdef long n = indptr.shape[0] - 1
    cdef long m = indices.shape[0]
    cdef long i, e, u, v, size = 0
    cdef double d, nd
    dist = np.empty(n, dtype=np.float64)
    pred = np.empty(n, dtype=np.int64)
    cdef double[::1] cdist = dist
    cdef long long[::1] cpred = pred
    cdef char* done = <char*> malloc(n * sizeof(char))
    # lazy-deletion heap holds at most one entry per relaxation plus the source
    cdef double* hd = <double*> malloc((m + 1) * sizeof(double))
    cdef long* hn = <long*> malloc((m + 1) * sizeof(long))
    if not done or not hd or not hn:
        free(done); free(hd); free(hn)
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                cdist[i] = INFINITY
                cpred[i] = -1
                done[i] = 0
            cdist[src] = 0.0
            hd[0] = 0.0
            hn[0] = src
            size = 1
            while size > 0:
                d = hd[0]
                u = hn[0]
                size -= 1
                hd[0] = hd[size]
                hn[0] = hn[size]
                _sift_down(hd, hn, size)
                if done[u]:
                    continue
                done[u] = 1
                for e in range(indptr[u], indptr[u + 1]):
                    v = indices[e]
                    if done[v]:
                        continue
                    nd = d + weights[e]
                    if nd < cdist[v]:
                        cdist[v] = nd
                        cpred[v] = u
                        hd[size] = nd
                        hn[size] = v
                        size += 1
                        _sift_up(hd, hn, size - 1)
                    elif nd == cdist[v] and u < cpred[v]:
                        cpred[v] = u
    finally:
        free(done); free(hd); free(hn)
    return dist.tolist(), pred.tolist()
