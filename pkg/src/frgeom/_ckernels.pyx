# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Semantics match ``frgeom._pykernels`` exactly."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

from frgeom._pykernels import SEARCH_WINDOW, exact_subset_sum, subset_sums

cnp.import_array()


cdef Py_ssize_t _lower(const double[::1] xs, double x) nogil:
    # first index with xs[k] >= x
    cdef Py_ssize_t lo = 0, hi = xs.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if xs[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef Py_ssize_t _upper(const double[::1] xs, double x) nogil:
    # first index with xs[k] > x
    cdef Py_ssize_t lo = 0, hi = xs.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if xs[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def half_mass_subset(a, double target, double tol):
    arr = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t h = arr.shape[0] // 2
    lo = subset_sums(arr[:h])
    order_arr = np.argsort(lo, kind="stable")
    cdef const double[::1] lo_sorted = np.ascontiguousarray(lo[order_arr])
    cdef const cnp.int64_t[::1] order = order_arr.astype(np.int64)
    cdef const double[::1] hi = subset_sums(arr[h:])
    cdef Py_ssize_t nhi = hi.shape[0], j, left, right
    cdef double need, window = SEARCH_WINDOW
    cdef long long mask
    for j in range(nhi):
        need = target - hi[j]
        left = _lower(lo_sorted, need - window)
        right = _upper(lo_sorted, need + window)
        if right > left:
            for i in np.sort(order_arr[left:right]):
                mask = <long long>i | (<long long>j << h)
                if mask and fabs(exact_subset_sum(arr, mask) - target) <= tol:
                    return mask
    return -1


def circular_convolve(values, offsets, coeffs):
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef const long[::1] off = np.ascontiguousarray(offsets, dtype=np.int_)
    cdef const double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0], m = c.shape[0]
    out_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, k, s
    cdef double ck
    with nogil:
        # one pass per offset, in offset order, so rounding matches the fallback
        for k in range(m):
            s = off[k] % n
            if s < 0:
                s += n
            ck = c[k]
            for i in range(s):
                out[i] = out[i] + ck * v[i - s + n]
            for i in range(s, n):
                out[i] = out[i] + ck * v[i - s]
    return out_arr
