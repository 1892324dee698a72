"""Deterministic rendering: segment palette, map rasters, point overlays."""

from __future__ import annotations

import colorsys

import numpy as np

from .saliency import InterestPoint, ScalarMap
from .segmentation import SegmentLabelMap

PALETTE_SIZE = 64


def _build_palette() -> np.ndarray:
    """Fixed 64-entry high-contrast table; black stays reserved for familiar."""
    rows = []
    for idx in range(PALETTE_SIZE):
        hue = (idx * 137.508) % 360.0 / 360.0
        sat = 0.95 if idx % 2 == 0 else 0.65
        val = 0.95 if idx % 3 != 2 else 0.70
        r, g, b = colorsys.hsv_to_rgb(hue, sat, val)
        rows.append((round(r * 255), round(g * 255), round(b * 255)))
    return np.array(rows, dtype=np.uint8)


_PALETTE = _build_palette()


def palette_color(segment_id: int) -> tuple[int, int, int]:
    """Display color for a segment id; stable across runs."""
    r, g, b = _PALETTE[segment_id % PALETTE_SIZE]
    return int(r), int(g), int(b)


def palette_colors(count: int) -> np.ndarray:
    """(count, 3) uint8 table of display colors for ids 0..count-1."""
    idx = np.arange(count) % PALETTE_SIZE
    return _PALETTE[idx]


def render_segmentation(labels: SegmentLabelMap) -> np.ndarray:
    """Color each segment with its palette entry."""
    return palette_colors(labels.segment_count)[labels.labels]


def render_scalar_map(smap: ScalarMap) -> np.ndarray:
    """Gray rendering normalized to the map's own maximum."""
    v = smap.values
    peak = float(v.max()) if v.size else 0.0
    if peak <= 0.0:
        return np.zeros(v.shape, dtype=np.uint8)
    return np.clip(np.floor(v / peak * 255.0 + 0.5), 0, 255).astype(np.uint8)


def draw_interest_overlay(rgb: np.ndarray, points: list[InterestPoint],
                          arm: int = 8) -> np.ndarray:
    """Copy of the original with a cross drawn at each interest point."""
    out = np.ascontiguousarray(rgb).copy()
    h, w = out.shape[:2]
    color = np.array([255, 0, 255], dtype=np.uint8)
    for p in points:
        y0 = max(0, p.y - arm)
        y1 = min(h, p.y + arm + 1)
        x0 = max(0, p.x - arm)
        x1 = min(w, p.x + arm + 1)
        for off in (0, 1):
            if 0 <= p.y + off < h:
                out[p.y + off, x0:x1] = color
            if 0 <= p.x + off < w:
                out[y0:y1, p.x + off] = color
    return out
