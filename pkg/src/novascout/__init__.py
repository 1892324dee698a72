"""novascout: real-time color novelty detection for exploration imagery.

Segments each incoming image by color, summarizes segments as quantized HSI
patterns, and flags patterns never seen before in the session with a Hopfield
familiarity memory; an interest-point path ranks rare regions for a human
explorer. See README.md for the CLI and the HTTP session service.
"""

from .colorspace import HsiImage, HsiPixel, Pattern, encode_pattern, quantize6, rgb_to_hsi
from .kernels import backend as kernel_backend
from .novelty import HopfieldMemory, NoveltyVerdict, closed_form_energy, novelty_threshold
from .pipeline import (ImageResult, Session, SessionConfig, process_image,
                       process_sequence, session_summary)
from .saliency import InterestPoint, ScalarMap, interest_map, top_interest_points, uncommon_map
from .segmentation import (CooccurrenceMatrix, SegmentLabelMap, SegmentStats,
                           gray_cooccurrence, segment_color, segment_gray, spectral_angle)

__version__ = "0.1.0"

__all__ = [
    "HsiImage", "HsiPixel", "Pattern", "encode_pattern", "quantize6", "rgb_to_hsi",
    "kernel_backend",
    "HopfieldMemory", "NoveltyVerdict", "closed_form_energy", "novelty_threshold",
    "ImageResult", "Session", "SessionConfig", "process_image", "process_sequence",
    "session_summary",
    "InterestPoint", "ScalarMap", "interest_map", "top_interest_points", "uncommon_map",
    "CooccurrenceMatrix", "SegmentLabelMap", "SegmentStats", "gray_cooccurrence",
    "segment_color", "segment_gray", "spectral_angle",
    "__version__",
]
