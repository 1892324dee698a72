"""Color and gray-level image segmentation.

Full-color segmentation treats each HSI pixel as a 3-vector and matches it
against the running mean of existing segments by spectral angle: pixels are
scanned in raster order, join the closest segment when the angle falls below
the matching threshold, and found a new segment otherwise. The angle ignores
vector magnitude, so segments capture "the same color regardless of how
bright", which is what makes the downstream color memory robust to lighting.

Gray-level segmentation follows the classic co-occurrence route: a 2-D
histogram over neighboring gray-bin pairs is lightly smoothed, its dominant
peaks (at most eight) are projected onto the diagonal, and every pixel joins
the peak whose gray value is nearest its own bin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from ._peaks import greedy_select
from .colorspace import HsiImage
from .errors import DegenerateVectorError, EmptyImageError

GRAY_LEVELS = 64
MAX_GRAY_PEAKS = 8
MIN_GRAY_PEAKS = 6
PEAK_SUPPRESSION_BINS = 4.0


@dataclass
class SegmentLabelMap:
    """Partition of an image: per-pixel segment ids in [0, segment_count)."""

    labels: np.ndarray
    segment_count: int
    null_segment_id: Optional[int] = None

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def total_pixels(self) -> int:
        return int(self.labels.size)

    def pixel_counts(self) -> np.ndarray:
        return np.bincount(self.labels.ravel(), minlength=self.segment_count)


@dataclass
class SegmentStats:
    segment_id: int
    pixel_count: int
    mean_h: float
    mean_s: float
    mean_i: float

    @property
    def mean(self) -> tuple[float, float, float]:
        return (self.mean_h, self.mean_s, self.mean_i)


@dataclass
class CooccurrenceMatrix:
    levels: int
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def spectral_angle(a: Sequence[float], b: Sequence[float]) -> float:
    """Angle in degrees between two 3-vectors; 0 means identical direction.

    Raises DegenerateVectorError for a zero vector. For non-negative inputs
    the result is clamped to [0, 90].
    """
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    na = float(np.sqrt(np.dot(av, av)))
    nb = float(np.sqrt(np.dot(bv, bv)))
    if na == 0.0 or nb == 0.0:
        raise DegenerateVectorError("spectral angle is undefined for the zero vector")
    cosang = float(np.dot(av, bv)) / (na * nb)
    cosang = max(-1.0, min(1.0, cosang))
    angle = math.degrees(math.acos(cosang))
    if cosang >= 0.0:
        angle = min(angle, 90.0)
    return angle


def _as_hsi(img) -> HsiImage:
    if isinstance(img, HsiImage):
        return img
    return HsiImage(img)


def segment_color(img, theta_deg: float,
                  min_segment_frac: float = 0.0) -> tuple[SegmentLabelMap, list[SegmentStats]]:
    """Partition an HSI image into color segments by spectral-angle matching.

    Pixels are assigned sequentially in raster order against running segment
    means; zero-vector (exact black) pixels collect in a dedicated null
    segment. With min_segment_frac > 0, segments smaller than that fraction
    of the image are merged into their best-matching larger segment after
    the pass (the null segment is exempt). Segment ids follow founding
    order. Returns the label map and per-segment stats with exact
    arithmetic-mean colors.
    """
    hsi = _as_hsi(img)
    if hsi.height == 0 or hsi.width == 0:
        raise EmptyImageError("cannot segment an empty image")
    if not theta_deg > 0:
        raise ValueError("matching angle theta must be positive")
    flat = np.ascontiguousarray(hsi.data.reshape(-1, 3))
    cos_theta = math.cos(math.radians(theta_deg))
    labels, sums, counts, null_id = kernels.assign_color_segments(flat, cos_theta)
    null_id = int(null_id)
    k = counts.shape[0]

    if min_segment_frac > 0.0 and k > 1:
        labels, k, null_id = _merge_small_segments(
            labels, sums, counts, null_id, min_segment_frac)

    label_map = SegmentLabelMap(
        labels=labels.reshape(hsi.height, hsi.width),
        segment_count=k,
        null_segment_id=null_id if null_id >= 0 else None,
    )
    stats = _stats_from_labels(labels, flat, k)
    return label_map, stats


def _merge_small_segments(labels, sums, counts, null_id, min_frac):
    """Fold segments below min_frac of the image into their best large match."""
    total = labels.size
    threshold = min_frac * total
    k = counts.shape[0]
    small = [s for s in range(k)
             if s != null_id and counts[s] < threshold]
    large = [s for s in range(k)
             if s != null_id and counts[s] >= threshold]
    if not small or not large:
        return labels, k, null_id

    norms = np.sqrt(np.einsum("ij,ij->i", sums, sums))
    remap = np.arange(k, dtype=np.int64)
    for s in small:
        best = -1
        best_cos = -2.0
        for t in large:
            cos = float(sums[s] @ sums[t]) / (norms[s] * norms[t])
            if cos > best_cos:
                best_cos = cos
                best = t
        remap[s] = best

    small_set = set(small)
    survivors = [s for s in range(k) if s not in small_set]
    new_ids = {old: new for new, old in enumerate(survivors)}
    lut = np.array([new_ids[int(remap[s])] for s in range(k)], dtype=np.int32)
    new_null = new_ids[null_id] if null_id >= 0 else -1
    return lut[labels], len(survivors), new_null


def _stats_from_labels(labels, flat, k) -> list[SegmentStats]:
    counts = np.bincount(labels, minlength=k)
    stats = []
    means = np.zeros((k, 3), dtype=np.float64)
    for c in range(3):
        channel_sums = np.bincount(labels, weights=flat[:, c], minlength=k)
        means[:, c] = channel_sums / np.maximum(counts, 1)
    for sid in range(k):
        stats.append(SegmentStats(
            segment_id=sid,
            pixel_count=int(counts[sid]),
            mean_h=float(means[sid, 0]),
            mean_s=float(means[sid, 1]),
            mean_i=float(means[sid, 2]),
        ))
    return stats


def quantize_gray(gray: np.ndarray, levels: int) -> np.ndarray:
    """Bin a [0, 1] gray raster into `levels` even bins (1.0 joins the top bin)."""
    g = np.clip(np.asarray(gray, dtype=np.float64), 0.0, 1.0)
    return np.minimum((g * levels).astype(np.int32), levels - 1)


def gray_cooccurrence(gray: np.ndarray, levels: int = GRAY_LEVELS) -> CooccurrenceMatrix:
    """Symmetric gray-bin co-occurrence over right and bottom neighbor pairs."""
    g = np.asarray(gray, dtype=np.float64)
    if g.ndim != 2:
        raise ValueError("expected a 2-D gray raster")
    if g.shape[0] == 0 or g.shape[1] == 0:
        raise EmptyImageError("cannot accumulate an empty image")
    if levels < 2:
        raise ValueError("levels must be at least 2")
    bins = quantize_gray(g, levels)
    counts = kernels.cooc_accumulate(bins, levels)
    return CooccurrenceMatrix(levels=levels, counts=counts)


def _box3(m: np.ndarray) -> np.ndarray:
    """3x3 box smoothing with zero padding."""
    padded = np.pad(m, 1, mode="constant")
    h, w = m.shape
    out = np.zeros_like(m, dtype=np.float64)
    for dy in range(3):
        for dx in range(3):
            out += padded[dy:dy + h, dx:dx + w]
    return out / 9.0


def segment_gray(gray: np.ndarray, levels: int = GRAY_LEVELS,
                 max_peaks: int = MAX_GRAY_PEAKS, min_peaks: int = MIN_GRAY_PEAKS,
                 suppression_radius: float = PEAK_SUPPRESSION_BINS) -> SegmentLabelMap:
    """Segment a gray raster via peaks of its smoothed co-occurrence matrix.

    Up to max_peaks local maxima are picked greedily by height (with the
    given suppression radius in bin space, so one broad peak cannot take
    every slot); each is projected to its diagonal gray value, and pixels
    join the nearest projected center by gray bin, ties to the lower peak
    index. Matrices with fewer maxima yield fewer segments; min_peaks is
    the nominal lower end of the operating range and only bounds the
    parameters, not the data.
    """
    if not 2 <= min_peaks <= max_peaks:
        raise ValueError("need 2 <= min_peaks <= max_peaks")
    cooc = gray_cooccurrence(gray, levels)
    smoothed = _box3(cooc.counts.astype(np.float64))
    peaks = greedy_select(smoothed, max_peaks, suppression_radius,
                          require_positive=True)
    bins = quantize_gray(gray, levels)
    if not peaks:
        # No pixel pairs at all (e.g. a 1x1 image): one segment.
        return SegmentLabelMap(labels=np.zeros_like(bins), segment_count=1)
    centers = np.array([(py + px) / 2.0 for py, px, _ in peaks])

    # Nearest projected center per gray bin; argmin takes the lowest peak
    # index on ties.
    bin_values = np.arange(levels, dtype=np.float64)
    dist = np.abs(bin_values[:, None] - centers[None, :])
    bin_to_peak = np.argmin(dist, axis=1).astype(np.int32)
    labels = bin_to_peak[bins]

    # Drop peaks that won no pixels, compacting ids in peak order.
    used = np.unique(labels)
    lut = np.full(len(peaks), -1, dtype=np.int32)
    lut[used] = np.arange(used.size, dtype=np.int32)
    return SegmentLabelMap(labels=lut[labels], segment_count=int(used.size))
