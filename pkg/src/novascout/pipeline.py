"""Per-image orchestration within a session.

One session owns one Hopfield color memory. Each incoming image is converted
to HSI, color-segmented, and its segments' quantized mean colors are
classified novel or familiar against the memory (novel ones are stored, in
ascending segment id). The interest path, when enabled, runs per-band
gray segmentation, builds the three uncommon maps, and extracts the top
interest points from the blurred sum.

Sessions process images strictly sequentially; the memory is order-dependent
state. Distinct sessions are independent.
"""

from __future__ import annotations

import time
import uuid
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .colorspace import HsiImage, encode_pattern
from .errors import ConfigError, ImageTooSmallError, SequenceProcessingError
from .novelty import HopfieldMemory, NoveltyVerdict, render_novelty_map
from .saliency import (InterestPoint, ScalarMap, interest_map, is_flat,
                       top_interest_points, uncommon_map)
from .segmentation import (SegmentLabelMap, SegmentStats, segment_color,
                           segment_gray)

MIN_IMAGE_SIDE = 16
MODES = ("novelty", "interest", "both")
BANDS = ("h", "s", "i")


@dataclass
class SessionConfig:
    theta_deg: float = 5.0
    blur_sigma_frac: float = 0.02
    min_segment_frac: float = 0.001
    mode: str = "both"
    k_points: int = 3
    retain_patterns: bool = True

    def __post_init__(self):
        if not self.theta_deg > 0:
            raise ConfigError("theta_deg", "must be positive")
        if not 0 <= self.min_segment_frac < 1:
            raise ConfigError("min_segment_frac", "must lie in [0, 1)")
        if self.mode not in MODES:
            raise ConfigError("mode", f"must be one of {MODES}")
        if self.k_points < 1:
            raise ConfigError("k_points", "must be at least 1")
        if self.blur_sigma_frac < 0:
            raise ConfigError("blur_sigma_frac", "must be non-negative")

    @property
    def wants_novelty(self) -> bool:
        return self.mode in ("novelty", "both")

    @property
    def wants_interest(self) -> bool:
        return self.mode in ("interest", "both")

    def to_dict(self) -> dict:
        return {
            "theta_deg": self.theta_deg,
            "blur_sigma_frac": self.blur_sigma_frac,
            "min_segment_frac": self.min_segment_frac,
            "mode": self.mode,
            "k_points": self.k_points,
            "retain_patterns": self.retain_patterns,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SessionConfig":
        known = {f: doc[f] for f in cls.__dataclass_fields__ if f in doc}
        extra = set(doc) - set(cls.__dataclass_fields__)
        if extra:
            raise ConfigError(sorted(extra)[0], "unknown field")
        return cls(**known)


@dataclass
class ImageResult:
    image_index: int
    label_map: SegmentLabelMap
    stats: list[SegmentStats]
    verdicts: list[NoveltyVerdict]
    novelty_map: Optional[np.ndarray]
    uncommon_maps: Optional[dict[str, ScalarMap]]
    interest_map: Optional[ScalarMap]
    interest_points: Optional[list[InterestPoint]]
    interest_degenerate: bool
    band_label_maps: Optional[dict[str, SegmentLabelMap]]
    timings_ms: dict[str, float]


@dataclass
class Session:
    id: str
    config: SessionConfig
    memory: HopfieldMemory
    results: list[ImageResult] = field(default_factory=list)
    start_index: int = 0

    @classmethod
    def new(cls, config: Optional[SessionConfig] = None) -> "Session":
        config = config or SessionConfig()
        memory = HopfieldMemory(retain_patterns=config.retain_patterns)
        return cls(id=uuid.uuid4().hex[:12], config=config, memory=memory)

    @property
    def next_index(self) -> int:
        return self.start_index + len(self.results)


def process_image(rgb: np.ndarray, session: Session) -> ImageResult:
    """Run one image through the session and append the result.

    Segments are classified and stored in ascending segment id, so a color
    appearing in two segments of the same image is novel once and familiar
    for the second segment already.
    """
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError("expected an RGB raster of shape (height, width, 3)")
    height, width = rgb.shape[:2]
    if height < MIN_IMAGE_SIDE or width < MIN_IMAGE_SIDE:
        raise ImageTooSmallError(
            f"image {width}x{height} is below the {MIN_IMAGE_SIDE}x{MIN_IMAGE_SIDE} minimum")

    config = session.config
    timings: dict[str, float] = {}
    t_total = time.perf_counter()

    t0 = time.perf_counter()
    hsi = HsiImage.from_rgb(rgb)
    timings["hsi_ms"] = (time.perf_counter() - t0) * 1000.0

    t0 = time.perf_counter()
    label_map, stats = segment_color(hsi, config.theta_deg, config.min_segment_frac)
    timings["segmentation_ms"] = (time.perf_counter() - t0) * 1000.0

    verdicts: list[NoveltyVerdict] = []
    novelty_map = None
    if config.wants_novelty:
        t0 = time.perf_counter()
        for st in stats:
            pattern = encode_pattern(st.mean_h, st.mean_s, st.mean_i)
            verdicts.append(session.memory.classify_and_store(pattern, st.segment_id))
        novelty_map = render_novelty_map(label_map, verdicts)
        timings["novelty_ms"] = (time.perf_counter() - t0) * 1000.0

    uncommon_maps = None
    imap = None
    points = None
    degenerate = False
    band_label_maps = None
    if config.wants_interest:
        t0 = time.perf_counter()
        band_label_maps = {b: segment_gray(hsi.band(b)) for b in BANDS}
        uncommon_maps = {b: uncommon_map(band_label_maps[b]) for b in BANDS}
        sigma = config.blur_sigma_frac * width
        imap = interest_map(uncommon_maps["h"], uncommon_maps["s"],
                            uncommon_maps["i"], sigma)
        radius = max(1.0, 3.0 * sigma)
        points = top_interest_points(imap, config.k_points, radius)
        degenerate = is_flat(imap)
        timings["interest_ms"] = (time.perf_counter() - t0) * 1000.0

    timings["total_ms"] = (time.perf_counter() - t_total) * 1000.0
    result = ImageResult(
        image_index=session.next_index,
        label_map=label_map,
        stats=stats,
        verdicts=verdicts,
        novelty_map=novelty_map,
        uncommon_maps=uncommon_maps,
        interest_map=imap,
        interest_points=points,
        interest_degenerate=degenerate,
        band_label_maps=band_label_maps,
        timings_ms=timings,
    )
    session.results.append(result)
    return result


def process_sequence(images, config: Optional[SessionConfig] = None) -> Session:
    """Process an ordered image list through a fresh session."""
    images = list(images)
    if not images:
        raise ValueError("process_sequence needs at least one image")
    session = Session.new(config)
    for pos, img in enumerate(images):
        try:
            process_image(img, session)
        except Exception as exc:
            raise SequenceProcessingError(pos, exc) from exc
    return session


def session_summary(session: Session) -> dict:
    """Totals for the CLI report and the service summary endpoint."""
    novel_rates = []
    segments_seen = 0
    for res in session.results:
        segments_seen += len(res.stats)
        if res.verdicts:
            novel = sum(1 for v in res.verdicts if v.novel)
            novel_rates.append(novel / len(res.verdicts))
        else:
            novel_rates.append(0.0)
    return {
        "images_processed": len(session.results),
        "segments_seen": segments_seen,
        "patterns_stored": session.memory.stored_count,
        "novel_rate_per_image": novel_rates,
    }
