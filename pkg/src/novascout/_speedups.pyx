# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: sequential color segment assignment and
co-occurrence accumulation. Semantics match novascout._kernels_py exactly;
keep the two in sync (identical floating-point expression order)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def assign_color_segments(object flat_obj, double cos_theta):
    """See novascout._kernels_py.assign_color_segments."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] flat = \
        np.ascontiguousarray(flat_obj, dtype=np.float64)
    cdef Py_ssize_t n = flat.shape[0]

    labels_arr = np.empty(n, dtype=np.int32)
    cdef Py_ssize_t cap = n if n > 0 else 1
    sums_arr = np.zeros((cap, 3), dtype=np.float64)
    counts_arr = np.zeros(cap, dtype=np.int64)
    norms_arr = np.zeros(cap, dtype=np.float64)

    cdef cnp.int32_t[::1] labels = labels_arr
    cdef cnp.float64_t[:, ::1] sums = sums_arr
    cdef cnp.int64_t[::1] counts = counts_arr
    cdef cnp.float64_t[::1] norms = norms_arr

    cdef Py_ssize_t k = 0, idx, seg, best, null_id = -1
    cdef double h, s, i, pn, dot, c, best_cos

    for idx in range(n):
        h = flat[idx, 0]
        s = flat[idx, 1]
        i = flat[idx, 2]
        if h == 0.0 and s == 0.0 and i == 0.0:
            if null_id < 0:
                null_id = k
                k += 1
            labels[idx] = <cnp.int32_t>null_id
            counts[null_id] += 1
            continue
        pn = sqrt(h * h + s * s + i * i)
        best = -1
        best_cos = cos_theta
        for seg in range(k):
            if seg == null_id:
                continue
            dot = sums[seg, 0] * h + sums[seg, 1] * s + sums[seg, 2] * i
            c = dot / (norms[seg] * pn)
            if c > best_cos:
                best_cos = c
                best = seg
        if best >= 0:
            labels[idx] = <cnp.int32_t>best
            sums[best, 0] += h
            sums[best, 1] += s
            sums[best, 2] += i
            counts[best] += 1
            norms[best] = sqrt(sums[best, 0] * sums[best, 0]
                               + sums[best, 1] * sums[best, 1]
                               + sums[best, 2] * sums[best, 2])
        else:
            labels[idx] = <cnp.int32_t>k
            sums[k, 0] = h
            sums[k, 1] = s
            sums[k, 2] = i
            norms[k] = pn
            counts[k] = 1
            k += 1

    return (labels_arr, sums_arr[:k].copy(), counts_arr[:k].copy(),
            <object>null_id)


def cooc_accumulate(object bins_obj, int levels):
    """See novascout._kernels_py.cooc_accumulate."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2, mode="c"] bins = \
        np.ascontiguousarray(bins_obj, dtype=np.int64)
    cdef Py_ssize_t height = bins.shape[0]
    cdef Py_ssize_t width = bins.shape[1]

    counts_arr = np.zeros((levels, levels), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] counts = counts_arr
    cdef Py_ssize_t y, x
    cdef cnp.int64_t a, b

    for y in range(height):
        for x in range(width):
            a = bins[y, x]
            if x + 1 < width:
                b = bins[y, x + 1]
                counts[a, b] += 1
                counts[b, a] += 1
            if y + 1 < height:
                b = bins[y + 1, x]
                counts[a, b] += 1
                counts[b, a] += 1
    return counts_arr
