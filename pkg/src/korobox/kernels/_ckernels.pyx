# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: index-set enumeration/counting and lattice CBC scans.

Mirrors ``fallback`` exactly: same factor tables, same left-to-right product
accumulation, hence bit-identical membership decisions.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def enumerate_members(double[:, ::1] factors, double budget, Py_ssize_t cap):
    """Lexicographically ordered members as an (n, d) int64 array, or None past cap."""
    cdef Py_ssize_t d = factors.shape[0]
    cdef Py_ssize_t width = factors.shape[1]
    cdef Py_ssize_t size = 1024
    cdef cnp.ndarray[cnp.int64_t, ndim=2] buf = np.empty((size, d), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = buf
    cdef Py_ssize_t count = 0

    # Explicit DFS stack: current offset h_j, its bound m_j, prefix products.
    cdef cnp.ndarray[cnp.int64_t, ndim=1] h_arr = np.zeros(d, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] m_arr = np.zeros(d, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p_arr = np.ones(d + 1, dtype=np.float64)
    cdef cnp.int64_t[::1] h = h_arr
    cdef cnp.int64_t[::1] m = m_arr
    cdef double[::1] p = p_arr

    cdef Py_ssize_t j = 0
    cdef Py_ssize_t k, off
    cdef Py_ssize_t bound

    bound = 0
    while bound + 1 < width and factors[0, bound + 1] < budget:
        bound += 1
    m[0] = bound
    h[0] = -bound - 1

    while j >= 0:
        h[j] += 1
        if h[j] > m[j]:
            j -= 1
            continue
        off = h[j] if h[j] >= 0 else -h[j]
        if off == 0:
            p[j + 1] = p[j]
        else:
            p[j + 1] = p[j] * factors[j, off]
        if j == d - 1:
            if count >= cap:
                return None
            if count == size:
                size *= 2
                buf = np.empty((size, d), dtype=np.int64)
                buf[:count] = out[:count]
                out = buf
            for k in range(d):
                out[count, k] = h[k]
            count += 1
        else:
            j += 1
            bound = 0
            while bound + 1 < width and p[j] * factors[j, bound + 1] < budget:
                bound += 1
            m[j] = bound
            h[j] = -bound - 1
    return np.asarray(buf[:count]).copy()


cdef long long _count(double[:, ::1] factors, double budget,
                      Py_ssize_t j_start, double prefix, long long cap):
    cdef Py_ssize_t d = factors.shape[0]
    cdef Py_ssize_t width = factors.shape[1]
    cdef long long total = 1
    cdef Py_ssize_t j, m
    cdef double p
    for j in range(j_start, d):
        if width < 2 or prefix * factors[j, 1] >= budget:
            break  # factors[j, 1] is non-decreasing in j, nothing further fits
        m = 1
        while m < width:
            p = prefix * factors[j, m]
            if p >= budget:
                break
            total += 2 * _count(factors, budget, j + 1, p, cap)
            if total > cap:
                return cap + 1
            m += 1
    return total


def count_members(double[:, ::1] factors, double budget, long long cap):
    """Cardinality of the budgeted set; saturates at cap + 1."""
    return _count(factors, budget, 0, 1.0, cap)


def cbc_scan(double[::1] base, double[::1] w, Py_ssize_t n):
    """Squared worst-case error mean_j base[j] w[(j z) mod n] - 1 for z = 1..n-1."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n - 1, dtype=np.float64)
    cdef Py_ssize_t z, j, idx
    cdef double s
    for z in range(1, n):
        s = 0.0
        idx = 0
        for j in range(n):
            s += base[j] * w[idx]
            idx += z
            if idx >= n:
                idx -= n
        out[z - 1] = s / n - 1.0
    return out
