"""Pure-Python/numpy versions of the hot kernels.

These mirror ``_ckernels.pyx`` exactly (same search order, same summation
order) so either backend gives identical results.
"""
import math

import numpy as np

#: candidates within this window of the target get an exact re-check
SEARCH_WINDOW = 1e-9


def subset_sums(a):
    """All 2**len(a) subset sums; bit ``i`` of the index selects ``a[i]``."""
    sums = np.zeros(1)
    for x in a:
        sums = np.concatenate([sums, sums + x])
    return sums


def exact_subset_sum(a, mask):
    return math.fsum(a[i] for i in range(len(a)) if (mask >> i) & 1)


def half_mass_subset(a, target, tol):
    """Smallest nonzero bitmask whose subset of ``a`` sums to ``target`` within ``tol``.

    Meet-in-the-middle over the two halves of ``a``. Returns -1 if no
    subset qualifies.
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    h = a.size // 2
    lo = subset_sums(a[:h])
    hi = subset_sums(a[h:])
    order = np.argsort(lo, kind="stable")
    lo_sorted = lo[order]
    need = target - hi
    left = np.searchsorted(lo_sorted, need - SEARCH_WINDOW, side="left")
    right = np.searchsorted(lo_sorted, need + SEARCH_WINDOW, side="right")
    for j in np.flatnonzero(right > left):
        for i in np.sort(order[left[j]:right[j]]):
            mask = int(i) | (int(j) << h)
            if mask and abs(exact_subset_sum(a, mask) - target) <= tol:
                return mask
    return -1


def circular_convolve(values, offsets, coeffs):
    """``out[i] = sum_m coeffs[m] * values[(i - offsets[m]) % n]``."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    out = np.zeros_like(values)
    for off, c in zip(offsets, coeffs):
        out = out + c * np.roll(values, int(off))
    return out
