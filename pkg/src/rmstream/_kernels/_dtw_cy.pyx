# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled DTW kernel. Arithmetic twin of dtw_py.dtw_cost."""

from libc.math cimport INFINITY

import numpy as np
cimport numpy as cnp


def dtw_cost(a, b, weights, int band, bint squared):
    """Minimum cumulative warping cost; see dtw_py.dtw_cost for the contract."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0]
    cdef Py_ssize_t m = bv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] prev = np.empty(m + 1, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cur = np.empty(m + 1, dtype=np.float64)
    cdef Py_ssize_t i, j, jlo, jhi
    cdef double ai, wi, diff, best

    for j in range(m + 1):
        prev[j] = INFINITY
    prev[0] = 0.0

    for i in range(1, n + 1):
        for j in range(m + 1):
            cur[j] = INFINITY
        jlo = 1
        jhi = m
        if band >= 0:
            if i - band > 1:
                jlo = i - band
            if i + band < m:
                jhi = i + band
        ai = av[i - 1]
        wi = wv[i - 1]
        for j in range(jlo, jhi + 1):
            diff = ai - bv[j - 1]
            if diff < 0.0:
                diff = -diff
            if squared:
                diff = diff * diff
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = wi * diff + best
        prev, cur = cur, prev
    return prev[m]
