"""Uncommon maps, the summed-and-blurred interest map, and interest points.

Every pixel of a segment scores 1 - count/total, so the rarest regions score
highest. The three per-band uncommon maps are summed and blurred with a
normalized Gaussian; the top local maxima of the blurred map, kept apart by
non-maximum suppression, are the interest points reported to the explorer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._peaks import greedy_select
from .errors import DimensionMismatchError
from .segmentation import SegmentLabelMap


@dataclass
class ScalarMap:
    """Non-negative per-pixel score raster."""

    values: np.ndarray

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


@dataclass
class InterestPoint:
    x: int
    y: int
    score: float

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "score": self.score}


def uncommon_map(labels: SegmentLabelMap) -> ScalarMap:
    """Score each pixel by how small its segment is: 1 - count/total."""
    counts = labels.pixel_counts().astype(np.float64)
    scores = 1.0 - counts / float(labels.total_pixels)
    return ScalarMap(values=scores[labels.labels])


def gaussian_kernel(sigma: float) -> np.ndarray:
    """1-D Gaussian taps truncated at 3 sigma and renormalized to sum 1."""
    radius = max(1, int(math.ceil(3.0 * sigma)))
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(t * t) / (2.0 * sigma * sigma))
    return k / k.sum()


def _convolve_axis(values: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    """Zero-padded 1-D convolution along one axis via shifted adds."""
    radius = (kernel.size - 1) // 2
    size = values.shape[axis]
    pad = [(0, 0), (0, 0)]
    pad[axis] = (radius, radius)
    padded = np.pad(values, pad, mode="constant")
    out = np.zeros_like(values, dtype=np.float64)
    for tap in range(kernel.size):
        if axis == 0:
            out += kernel[tap] * padded[tap:tap + size, :]
        else:
            out += kernel[tap] * padded[:, tap:tap + size]
    return out


def gaussian_blur(values: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur, renormalized at the edges so no mass leaks.

    Equivalent to dividing the zero-padded convolution by the blurred
    all-ones raster; a blurred constant stays that constant everywhere.
    """
    v = np.asarray(values, dtype=np.float64)
    if sigma <= 0.0:
        return v.copy()
    kernel = gaussian_kernel(sigma)
    blurred = _convolve_axis(_convolve_axis(v, kernel, 0), kernel, 1)
    edge_y = _convolve_axis(np.ones((v.shape[0], 1)), kernel, 0)
    edge_x = _convolve_axis(np.ones((1, v.shape[1])), kernel, 1)
    return blurred / (edge_y * edge_x)


def interest_map(u_h: ScalarMap, u_s: ScalarMap, u_i: ScalarMap,
                 sigma: float) -> ScalarMap:
    """Sum the three band uncommon maps and blur; sigma 0 skips the blur."""
    shapes = {u_h.values.shape, u_s.values.shape, u_i.values.shape}
    if len(shapes) != 1:
        raise DimensionMismatchError(f"uncommon maps disagree on shape: {shapes}")
    total = u_h.values + u_s.values + u_i.values
    if sigma <= 0.0:
        return ScalarMap(values=total)
    return ScalarMap(values=gaussian_blur(total, sigma))


def top_interest_points(imap: ScalarMap, k: int = 3,
                        suppression_radius: float = 1.0) -> list[InterestPoint]:
    """Top-k local maxima of the interest map under non-maximum suppression.

    Deterministic: equal heights break by (row, col). On a flat map every
    pixel is a local maximum, so the first k suppressed positions in
    tie-break order come back (callers flag that case via is_flat).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    picked = greedy_select(imap.values, k, suppression_radius)
    return [InterestPoint(x=x, y=y, score=score) for y, x, score in picked]


def is_flat(imap: ScalarMap) -> bool:
    """True when every value is identical (degenerate for peak picking)."""
    v = imap.values
    return bool(v.size == 0 or np.max(v) == np.min(v))
