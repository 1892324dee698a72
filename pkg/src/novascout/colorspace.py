"""RGB to HSI conversion and 18-spin pattern encoding.

Color is represented as hue/saturation/intensity, all normalized to [0, 1].
Intensity is the channel mean, saturation the classic 1 - min/I, and hue the
chromatic angle from the arccos formula mapped from [0, 360) degrees onto
[0, 1]. Achromatic pixels (r == g == b) take hue 0 and saturation 0 by
convention so every function here is total.

A segment's mean color is quantized to three 6-bit values (hue, saturation,
intensity, in that order, each written MSB-first) and mapped to an 18-entry
spin vector with bit b becoming spin 2b - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

PATTERN_BITS = 18
_FIELD_BITS = 6
_QMAX = 63


class HsiPixel(NamedTuple):
    h: float
    s: float
    i: float


@dataclass
class HsiImage:
    """Raster of HSI pixels, stored as a (height, width, 3) float64 array."""

    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 3 or self.data.shape[2] != 3:
            raise ValueError("HsiImage expects a (height, width, 3) array")

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @classmethod
    def from_rgb(cls, rgb: np.ndarray) -> "HsiImage":
        return cls(rgb_raster_to_hsi(rgb))

    def band(self, name: str) -> np.ndarray:
        """Return one band ('h', 's' or 'i') as a 2-D array."""
        idx = {"h": 0, "s": 1, "i": 2}[name]
        return self.data[:, :, idx]


def _clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else (1.0 if v > 1.0 else v)


def rgb_to_hsi(r: int, g: int, b: int) -> HsiPixel:
    """Convert one 8-bit RGB triple to HSI, each component in [0, 1]."""
    rr = r / 255.0
    gg = g / 255.0
    bb = b / 255.0
    i = (rr + gg + bb) / 3.0
    mn = min(rr, gg, bb)
    mx = max(rr, gg, bb)
    if mx == mn:
        # Achromatic, including pure black: hue and saturation are undefined,
        # fixed to zero so downstream code sees a total function.
        return HsiPixel(0.0, 0.0, _clamp01(i))
    s = 1.0 - mn / i
    num = 0.5 * ((rr - gg) + (rr - bb))
    den = math.sqrt((rr - gg) * (rr - gg) + (rr - bb) * (gg - bb))
    cosang = num / den
    cosang = -1.0 if cosang < -1.0 else (1.0 if cosang > 1.0 else cosang)
    ang = math.degrees(math.acos(cosang))
    if bb > gg:
        ang = 360.0 - ang
    return HsiPixel(_clamp01(ang / 360.0), _clamp01(s), _clamp01(i))


def rgb_raster_to_hsi(rgb: np.ndarray) -> np.ndarray:
    """Vectorized RGB-to-HSI for a (height, width, 3) uint8 raster.

    Matches rgb_to_hsi per pixel (same formula and branch structure).
    """
    arr = np.asarray(rgb)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError("expected a (height, width, 3) RGB raster")
    rr = arr[:, :, 0] / 255.0
    gg = arr[:, :, 1] / 255.0
    bb = arr[:, :, 2] / 255.0
    i = (rr + gg + bb) / 3.0
    mn = np.minimum(np.minimum(rr, gg), bb)
    mx = np.maximum(np.maximum(rr, gg), bb)
    chromatic = mx > mn

    s = np.zeros_like(i)
    np.divide(mn, i, out=s, where=chromatic)
    s = np.where(chromatic, 1.0 - s, 0.0)

    num = 0.5 * ((rr - gg) + (rr - bb))
    den2 = (rr - gg) * (rr - gg) + (rr - bb) * (gg - bb)
    den = np.sqrt(np.maximum(den2, 0.0))
    cosang = np.ones_like(i)
    np.divide(num, den, out=cosang, where=chromatic)
    ang = np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0)))
    ang = np.where(bb > gg, 360.0 - ang, ang)
    h = np.where(chromatic, ang / 360.0, 0.0)

    out = np.stack([h, s, np.clip(i, 0.0, 1.0)], axis=-1)
    return np.clip(out, 0.0, 1.0)


def hsi_to_rgb(h: float, s: float, i: float) -> tuple[int, int, int]:
    """Inverse conversion (sector formula), used to synthesize test imagery.

    Valid for in-gamut (h, s, i); channels are rounded to 8-bit ints.
    """
    theta = (h % 1.0) * 360.0
    if theta < 120.0:
        first, second = _hsi_sector(theta, s, i)
        rr, bb = second, first
        gg = 3.0 * i - (rr + bb)
    elif theta < 240.0:
        first, second = _hsi_sector(theta - 120.0, s, i)
        gg, rr = second, first
        bb = 3.0 * i - (rr + gg)
    else:
        first, second = _hsi_sector(theta - 240.0, s, i)
        bb, gg = second, first
        rr = 3.0 * i - (gg + bb)
    to8 = lambda v: int(min(255, max(0, math.floor(v * 255.0 + 0.5))))
    return to8(rr), to8(gg), to8(bb)


def _hsi_sector(theta: float, s: float, i: float) -> tuple[float, float]:
    low = i * (1.0 - s)
    peak = i * (1.0 + s * math.cos(math.radians(theta))
                / math.cos(math.radians(60.0 - theta)))
    return low, peak


def quantize6(v: float) -> int:
    """Quantize a [0, 1] value to 6 bits: round(v * 63), half away from zero.

    Values outside [0, 1] are clamped first. Monotone non-decreasing.
    """
    v = _clamp01(float(v))
    return int(math.floor(v * _QMAX + 0.5))


@dataclass(frozen=True)
class Pattern:
    """Fixed-length 18-spin vector with entries in {-1, +1}."""

    spins: tuple[int, ...]

    def __post_init__(self):
        if len(self.spins) != PATTERN_BITS:
            raise ValueError(f"pattern needs {PATTERN_BITS} spins, got {len(self.spins)}")
        if any(s not in (-1, 1) for s in self.spins):
            raise ValueError("pattern spins must be -1 or +1")

    def as_array(self) -> np.ndarray:
        return np.array(self.spins, dtype=np.float64)

    def bits(self) -> str:
        """Bitstring form, '1' for spin +1, MSB-first H||S||I."""
        return "".join("1" if s == 1 else "0" for s in self.spins)

    @classmethod
    def from_bits(cls, bits: str) -> "Pattern":
        if len(bits) != PATTERN_BITS or set(bits) - {"0", "1"}:
            raise ValueError("expected an 18-character bitstring")
        return cls(tuple(1 if c == "1" else -1 for c in bits))

    def to_bins(self) -> tuple[int, int, int]:
        """Recover the three quantized 6-bit values (hue, sat, intensity)."""
        vals = []
        for f in range(3):
            v = 0
            for k in range(_FIELD_BITS):
                bit = 1 if self.spins[f * _FIELD_BITS + k] == 1 else 0
                v = (v << 1) | bit
            vals.append(v)
        return vals[0], vals[1], vals[2]

    def complement(self) -> "Pattern":
        return Pattern(tuple(-s for s in self.spins))


def encode_pattern(mean_h: float, mean_s: float, mean_i: float) -> Pattern:
    """Encode a mean HSI triple as an 18-spin pattern.

    Each component is quantized to 6 bits and written MSB-first, hue first,
    then saturation, then intensity; bit b maps to spin 2b - 1.
    """
    spins = []
    for v in (mean_h, mean_s, mean_i):
        q = quantize6(v)
        for k in range(_FIELD_BITS - 1, -1, -1):
            bit = (q >> k) & 1
            spins.append(2 * bit - 1)
    return Pattern(tuple(spins))


def pattern_from_bins(qh: int, qs: int, qi: int) -> Pattern:
    """Build a pattern directly from quantized 6-bit values."""
    for q in (qh, qs, qi):
        if not 0 <= q <= _QMAX:
            raise ValueError("quantized values must lie in [0, 63]")
    spins = []
    for q in (qh, qs, qi):
        for k in range(_FIELD_BITS - 1, -1, -1):
            spins.append(2 * ((q >> k) & 1) - 1)
    return Pattern(tuple(spins))


def bin_center(q: int) -> float:
    """The [0, 1] value at the center of 6-bit bin q."""
    return q / float(_QMAX)
