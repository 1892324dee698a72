"""Hopfield familiarity discrimination over 18-spin color patterns.

The memory is an 18x18 symmetric, zero-diagonal weight matrix built by
Hebbian accumulation: storing pattern p adds p[i]*p[j]/n off the diagonal.
Familiarity energy of a query x is E = -1/2 * x^T W x. A pattern with
E < -n/4 (-4.5 for n=18) resembles something already stored and is familiar;
otherwise it is novel and gets stored. With the 1/n weight scaling a stored
pattern sits at exactly -(n-1)/2 = -8.5 while an unrelated random pattern
stays near 0, bracketing the -4.5 threshold.

closed_form_energy is the independent oracle: the same energy written as a
sum over the retained stored patterns, -sum_p((x . p)^2 - n) / (2n). The
incremental matrix and the oracle must agree to 1e-9 on any store sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .colorspace import Pattern
from .errors import MissingVerdictError

N_NEURONS = 18

FORMAT_MEMORY = "novascout.memory/1"


def novelty_threshold(n: int = N_NEURONS) -> float:
    """Familiarity threshold -n/4; energies below it read as familiar."""
    return -n / 4.0


@dataclass
class NoveltyVerdict:
    segment_id: int
    pattern: Pattern
    energy: float
    novel: bool
    stored: bool

    def to_dict(self) -> dict:
        return {
            "segment_id": self.segment_id,
            "pattern": self.pattern.bits(),
            "energy": self.energy,
            "novel": self.novel,
            "stored": self.stored,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "NoveltyVerdict":
        return cls(
            segment_id=int(doc["segment_id"]),
            pattern=Pattern.from_bits(doc["pattern"]),
            energy=float(doc["energy"]),
            novel=bool(doc["novel"]),
            stored=bool(doc["stored"]),
        )


class HopfieldMemory:
    """Mutable session color memory; grows until reset, never evicts.

    Not thread safe: classify/store/reset calls on one instance must be
    serialized by the caller.
    """

    def __init__(self, n: int = N_NEURONS, retain_patterns: bool = True):
        self.n = n
        self.weights = np.zeros((n, n), dtype=np.float64)
        self.stored_count = 0
        self.retain_patterns = retain_patterns
        self.stored_patterns: list[Pattern] = []

    def energy(self, pattern: Pattern) -> float:
        """Familiarity energy E = -1/2 * x^T W x (diagonal is zero)."""
        x = pattern.as_array()
        return float(-0.5 * (x @ self.weights @ x) + 0.0)

    def store(self, pattern: Pattern) -> None:
        """Hebbian update: w[i][j] += x[i]*x[j]/n for i != j."""
        x = pattern.as_array()
        self.weights += np.outer(x, x) / self.n
        np.fill_diagonal(self.weights, 0.0)
        self.stored_count += 1
        if self.retain_patterns:
            self.stored_patterns.append(pattern)

    def classify_and_store(self, pattern: Pattern, segment_id: int = -1) -> NoveltyVerdict:
        """Classify against -n/4 and store when novel.

        Strictly below threshold is familiar; energy exactly at the
        threshold classifies as novel (and is stored).
        """
        e = self.energy(pattern)
        novel = not e < novelty_threshold(self.n)
        if novel:
            self.store(pattern)
        return NoveltyVerdict(segment_id=segment_id, pattern=pattern,
                              energy=e, novel=novel, stored=novel)

    def reset(self) -> None:
        """Zero the memory: weights, count and retained patterns."""
        self.weights[:] = 0.0
        self.stored_count = 0
        self.stored_patterns = []

    def to_snapshot(self) -> dict:
        """Versioned snapshot document (row-major weights, full precision)."""
        doc = {
            "format": FORMAT_MEMORY,
            "n": self.n,
            "stored_count": self.stored_count,
            "weights": [float(w) for w in self.weights.reshape(-1)],
        }
        if self.retain_patterns:
            doc["patterns"] = [p.bits() for p in self.stored_patterns]
        return doc

    @classmethod
    def from_snapshot(cls, doc: dict) -> "HopfieldMemory":
        if doc.get("format") != FORMAT_MEMORY:
            raise ValueError(f"unsupported memory snapshot format: {doc.get('format')!r}")
        n = int(doc["n"])
        mem = cls(n=n, retain_patterns="patterns" in doc)
        mem.weights = np.array(doc["weights"], dtype=np.float64).reshape(n, n)
        mem.stored_count = int(doc["stored_count"])
        if "patterns" in doc:
            mem.stored_patterns = [Pattern.from_bits(b) for b in doc["patterns"]]
        return mem


def closed_form_energy(pattern: Pattern, stored: Sequence[Pattern],
                       n: int = N_NEURONS) -> float:
    """Oracle energy: -sum_p ((x . p)^2 - n) / (2n) over stored patterns."""
    x = pattern.as_array()
    total = 0.0
    for p in stored:
        overlap = float(x @ p.as_array())
        total += -(overlap * overlap - n) / (2.0 * n)
    return total


def weights_from_patterns(patterns: Iterable[Pattern],
                          n: int = N_NEURONS) -> np.ndarray:
    """Oracle weight matrix: Hebbian sum over patterns in presentation order."""
    w = np.zeros((n, n), dtype=np.float64)
    for p in patterns:
        x = p.as_array()
        w += np.outer(x, x) / n
        np.fill_diagonal(w, 0.0)
    return w


def render_novelty_map(labels, verdicts: Sequence[NoveltyVerdict],
                       seg_colors: Optional[np.ndarray] = None) -> np.ndarray:
    """Render verdicts over a label map: familiar segments go black, novel
    segments keep their segmentation display color.

    seg_colors is a (segment_count, 3) uint8 table; defaults to the fixed
    palette used for segmentation renderings.
    """
    from .render import palette_colors

    by_id = {v.segment_id: v for v in verdicts}
    count = labels.segment_count
    missing = [sid for sid in range(count) if sid not in by_id]
    if missing:
        raise MissingVerdictError(f"no verdict for segment ids {missing}")
    if seg_colors is None:
        seg_colors = palette_colors(count)
    lut = np.zeros((count, 3), dtype=np.uint8)
    for sid in range(count):
        if by_id[sid].novel:
            lut[sid] = seg_colors[sid]
    return lut[labels.labels]
