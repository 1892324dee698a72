"""Shared peak picking: local maxima plus greedy non-maximum suppression."""

from __future__ import annotations

import numpy as np


def local_maxima_mask(values: np.ndarray) -> np.ndarray:
    """Boolean mask of cells >= all existing 8-neighbors."""
    v = np.asarray(values, dtype=np.float64)
    padded = np.pad(v, 1, mode="constant", constant_values=-np.inf)
    mask = np.ones(v.shape, dtype=bool)
    h, w = v.shape
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            neighbor = padded[1 + dy:1 + dy + h, 1 + dx:1 + dx + w]
            mask &= v >= neighbor
    return mask


def greedy_select(values: np.ndarray, k: int, radius: float,
                  require_positive: bool = False) -> list[tuple[int, int, float]]:
    """Pick up to k local maxima in descending height with NMS.

    Candidates closer than `radius` (Euclidean) to an already selected peak
    are suppressed; ties in height break by (row, col) scan order. Returns
    (row, col, height) triples; selected peaks are pairwise >= radius apart.
    """
    v = np.asarray(values, dtype=np.float64)
    mask = local_maxima_mask(v)
    if require_positive:
        mask &= v > 0
    ys, xs = np.nonzero(mask)
    if ys.size == 0:
        return []
    heights = v[ys, xs]
    order = np.lexsort((xs, ys, -heights))
    r2 = radius * radius
    picked: list[tuple[int, int, float]] = []
    for idx in order:
        y = int(ys[idx])
        x = int(xs[idx])
        ok = True
        for py, px, _ in picked:
            dy = y - py
            dx = x - px
            if dy * dy + dx * dx < r2:
                ok = False
                break
        if ok:
            picked.append((y, x, float(heights[idx])))
            if len(picked) >= k:
                break
    return picked
