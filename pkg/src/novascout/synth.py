"""Synthetic test imagery.

The original field image library is unpublished, so the behaviors reported
from it (fast learning, familiarization within a handful of frames, rare
region interest points) are reproduced on generated sequences instead. All
generators are deterministic given their seed.

The terrain colors live at quantization bins chosen so that one-bin jitter
flips at most two pattern bits per channel; neighboring lighting states then
reinforce each other in the Hopfield memory the way similar rock colors do
across real frames.
"""

from __future__ import annotations

import numpy as np

from .colorspace import bin_center, hsi_to_rgb

# Sandy tan at HSI bins whose +1 neighbors are Hamming-close (<= 2 bit flips).
TERRAIN_BASE_BINS = (9, 25, 33)

# Well separated both in spectral angle (> 30 degrees pairwise) and in
# pattern Hamming distance (>= 9 bits), so repeats are unambiguous repeats
# and the new color is unambiguously novel.
COLOR_TAN = (180, 160, 130)
COLOR_RED = (190, 60, 50)
COLOR_GREEN = (70, 160, 80)


def uniform_image(width: int, height: int, rgb: tuple[int, int, int]) -> np.ndarray:
    img = np.empty((height, width, 3), dtype=np.uint8)
    img[:, :] = rgb
    return img


def vertical_bands_image(width: int, height: int,
                         colors: list[tuple[int, int, int]]) -> np.ndarray:
    """Equal vertical bands, one per color, left to right."""
    img = np.empty((height, width, 3), dtype=np.uint8)
    edges = np.linspace(0, width, len(colors) + 1).astype(int)
    for i, c in enumerate(colors):
        img[:, edges[i]:edges[i + 1]] = c
    return img


def three_color_image(width: int = 96, height: int = 64) -> np.ndarray:
    """Three constant-color vertical thirds (tan, red, green)."""
    return vertical_bands_image(width, height, [COLOR_TAN, COLOR_RED, COLOR_GREEN])


def fast_learning_pair(width: int = 96, height: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Image pair where the second repeats the first's colors plus one new region.

    Image 1 is tan/red halves; image 2 is tan/red/green thirds. Only the
    green region's color is unseen after image 1.
    """
    first = vertical_bands_image(width, height, [COLOR_TAN, COLOR_RED])
    second = three_color_image(width, height)
    return first, second


def terrain_color(jitter: tuple[int, int, int]) -> tuple[int, int, int]:
    """RGB of the terrain base color shifted by per-channel bin offsets."""
    qh, qs, qi = (b + d for b, d in zip(TERRAIN_BASE_BINS, jitter))
    return hsi_to_rgb(bin_center(qh), bin_center(qs), bin_center(qi))


def terrain_sequence(seed: int, count: int = 10, width: int = 64,
                     height: int = 64, jitter_prob: float = 0.5) -> list[np.ndarray]:
    """Uniform-terrain sequence with per-image lighting/color jitter.

    Each image is one constant color: the terrain base shifted by an
    independent {0, +1} bin offset per channel (so the jitter spans two
    quantization bins per channel, within the three-bin cap).
    """
    rng = np.random.default_rng(seed)
    images = []
    for _ in range(count):
        jitter = tuple(int(v) for v in (rng.random(3) < jitter_prob))
        images.append(uniform_image(width, height, terrain_color(jitter)))
    return images


def rare_region_image(width: int = 200, height: int = 200) -> np.ndarray:
    """Achromatic synthetic with 95% / 4% / 1% gray regions.

    Hue and saturation are flat (single band segment each); the intensity
    band splits into three segments whose sizes drive the uncommon map.
    The 1% square is the rarest region and should attract the top interest
    point.
    """
    if width * height % 100 != 0:
        raise ValueError("width*height must be divisible by 100 for exact fractions")
    img = np.empty((height, width, 3), dtype=np.uint8)
    img[:, :] = (100, 100, 100)
    total = width * height
    side_mid = int(round((0.04 * total) ** 0.5))
    side_rare = int(round((0.01 * total) ** 0.5))
    img[20:20 + side_mid, 20:20 + side_mid] = (180, 180, 180)
    y0 = height - 30 - side_rare
    x0 = width - 30 - side_rare
    img[y0:y0 + side_rare, x0:x0 + side_rare] = (240, 240, 240)
    return img


def rare_region_rect(width: int = 200, height: int = 200) -> tuple[int, int, int, int]:
    """(y0, x0, y1, x1) bounds of the 1% region in rare_region_image."""
    total = width * height
    side_rare = int(round((0.01 * total) ** 0.5))
    y0 = height - 30 - side_rare
    x0 = width - 30 - side_rare
    return y0, x0, y0 + side_rare, x0 + side_rare


def natural_image(seed: int, width: int = 640, height: int = 480,
                  cells: int = 8, noise: float = 6.0) -> np.ndarray:
    """Smooth random color field resembling outcrop imagery.

    A coarse random color grid is upsampled bilinearly and dusted with mild
    pixel noise; gives realistic segment counts and plenty of distinct
    interest-map maxima.
    """
    rng = np.random.default_rng(seed)
    coarse = rng.uniform(40.0, 215.0, size=(cells, cells, 3))
    ys = np.linspace(0, cells - 1, height)
    xs = np.linspace(0, cells - 1, width)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, cells - 1)
    x1 = np.minimum(x0 + 1, cells - 1)
    wy = (ys - y0)[:, None, None]
    wx = (xs - x0)[None, :, None]
    img = (coarse[y0][:, x0] * (1 - wy) * (1 - wx)
           + coarse[y0][:, x1] * (1 - wy) * wx
           + coarse[y1][:, x0] * wy * (1 - wx)
           + coarse[y1][:, x1] * wy * wx)
    img = img + rng.normal(0.0, noise, size=img.shape)
    return np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)


def random_hsi_image(seed: int, width: int = 32, height: int = 32) -> np.ndarray:
    """Uniform random HSI raster (float array), for property tests."""
    rng = np.random.default_rng(seed)
    return rng.random((height, width, 3))
