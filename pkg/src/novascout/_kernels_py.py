"""Pure-Python fallback for the hot kernels.

Semantics (and floating-point expression order) match novascout._speedups
exactly; the compiled module is built with FP contraction disabled so both
backends produce bit-identical results. This fallback is roughly two orders
of magnitude slower on the color-assignment loop; see benchmarks/.
"""

from __future__ import annotations

import math

import numpy as np


def assign_color_segments(flat, cos_theta):
    """Sequential raster-order color segment assignment.

    flat is an (N, 3) float64 array of HSI pixel vectors in raster order.
    Each pixel is compared against the running color-sum vector of every
    existing segment (the sum points in the same direction as the running
    mean, so the spectral angle is identical); it joins the best segment
    whose cosine beats cos_theta, ties going to the lowest id, otherwise it
    founds a new segment. Exact-zero pixels collect in a dedicated null
    segment created on first encounter.

    Returns (labels int32 (N,), sums float64 (K, 3), counts int64 (K,),
    null_id) with null_id = -1 when no zero pixel occurred.
    """
    rows = np.ascontiguousarray(flat, dtype=np.float64).tolist()
    n = len(rows)
    labels = np.empty(n, dtype=np.int32)
    sums_h: list[float] = []
    sums_s: list[float] = []
    sums_i: list[float] = []
    norms: list[float] = []
    counts: list[int] = []
    null_id = -1
    k = 0
    for idx in range(n):
        h, s, i = rows[idx]
        if h == 0.0 and s == 0.0 and i == 0.0:
            if null_id < 0:
                null_id = k
                sums_h.append(0.0)
                sums_s.append(0.0)
                sums_i.append(0.0)
                norms.append(0.0)
                counts.append(0)
                k += 1
            labels[idx] = null_id
            counts[null_id] += 1
            continue
        pn = math.sqrt(h * h + s * s + i * i)
        best = -1
        best_cos = cos_theta
        for seg in range(k):
            if seg == null_id:
                continue
            dot = sums_h[seg] * h + sums_s[seg] * s + sums_i[seg] * i
            c = dot / (norms[seg] * pn)
            if c > best_cos:
                best_cos = c
                best = seg
        if best >= 0:
            labels[idx] = best
            sums_h[best] += h
            sums_s[best] += s
            sums_i[best] += i
            counts[best] += 1
            norms[best] = math.sqrt(sums_h[best] * sums_h[best]
                                    + sums_s[best] * sums_s[best]
                                    + sums_i[best] * sums_i[best])
        else:
            labels[idx] = k
            sums_h.append(h)
            sums_s.append(s)
            sums_i.append(i)
            norms.append(pn)
            counts.append(1)
            k += 1
    sums = np.array([sums_h, sums_s, sums_i], dtype=np.float64).T.copy()
    if k == 0:
        sums = np.zeros((0, 3), dtype=np.float64)
    return labels, sums, np.array(counts, dtype=np.int64), null_id


def cooc_accumulate(bins, levels):
    """Symmetric co-occurrence counts over right and bottom neighbor pairs.

    bins is an (H, W) integer array of values in [0, levels). Every
    horizontal and vertical neighbor pair (a, b) increments both counts[a, b]
    and counts[b, a]. Integer arithmetic, so this vectorized version is
    exactly equivalent to the compiled loop.
    """
    b = np.ascontiguousarray(bins, dtype=np.int64)
    counts = np.zeros(levels * levels, dtype=np.int64)
    if b.shape[1] > 1:
        a = b[:, :-1].ravel()
        c = b[:, 1:].ravel()
        counts += np.bincount(a * levels + c, minlength=levels * levels)
        counts += np.bincount(c * levels + a, minlength=levels * levels)
    if b.shape[0] > 1:
        a = b[:-1, :].ravel()
        c = b[1:, :].ravel()
        counts += np.bincount(a * levels + c, minlength=levels * levels)
        counts += np.bincount(c * levels + a, minlength=levels * levels)
    return counts.reshape(levels, levels)
