# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; contracts in this package's __init__.py."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def cartesian_sums(coeffs_in, int q):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] coeffs = np.ascontiguousarray(
        coeffs_in, dtype=np.float64
    )
    cdef Py_ssize_t n = coeffs.shape[0]
    cdef Py_ssize_t width = 2 * q + 1
    cdef Py_ssize_t total = 1
    cdef Py_ssize_t i, j, k, base
    for i in range(n):
        total *= width
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(total, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double[::1] cv = coeffs
    cdef double c, v
    cdef Py_ssize_t filled = 1
    ov[0] = 0.0
    # Grow one coordinate at a time, filling blocks from the back so the
    # already-filled prefix is still readable while it is being expanded.
    for i in range(n):
        c = cv[i]
        j = filled - 1
        while j >= 0:
            v = ov[j]
            base = j * width
            for k in range(width):
                ov[base + k] = v + c * (k - q)
            j -= 1
        filled *= width
    return out


def sum_histogram(weights_in, int q, long long offset, Py_ssize_t size):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] weights = np.ascontiguousarray(
        weights_in, dtype=np.int64
    )
    cdef Py_ssize_t n = weights.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(size, dtype=np.int64)
    cdef cnp.int64_t[::1] cv = counts
    cdef cnp.int64_t[::1] wv = weights
    cdef Py_ssize_t width = 2 * q + 1
    cdef Py_ssize_t total = 1
    cdef Py_ssize_t i, t
    for i in range(n):
        total *= width
    cdef cnp.ndarray[cnp.int64_t, ndim=1] digits = np.zeros(max(n, 1), dtype=np.int64)
    cdef cnp.int64_t[::1] dv = digits
    cdef long long s = offset
    for i in range(n):
        s -= q * wv[i]
    for t in range(total - 1):
        cv[s] += 1
        i = n - 1
        while dv[i] == width - 1:
            dv[i] = 0
            s -= 2 * q * wv[i]
            i -= 1
        dv[i] += 1
        s += wv[i]
    cv[s] += 1
    return counts
