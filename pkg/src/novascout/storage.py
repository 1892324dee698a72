"""Image decoding, per-image outputs, sidecar documents, session directories.

Session directory layout:

    <out_root>/<session-id>/
        images/img_00000.png        original as decoded
        maps/img_00000_*.png        segmentation / novelty / uncommon / interest / overlay
        sidecars/img_00000.json     per-image record (see build_sidecar)
        memory.json                 latest memory snapshot
        manifest.json               run manifest and result index

Sidecars carry every numeric claim of a result (stats, quantized bins,
patterns, energies, verdicts, interest points) so a session can be audited
or replayed from files alone. The document is serialized deterministically;
the single wall-clock field (timings_ms) sits at the top level so
comparisons can strip it.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError
from .novelty import NoveltyVerdict
from .pipeline import ImageResult, Session, SessionConfig, session_summary
from .render import draw_interest_overlay, render_scalar_map, render_segmentation

FORMAT_SIDECAR = "novascout.sidecar/1"
FORMAT_MANIFEST = "novascout.manifest/1"

ENV_OUT_ROOT = "NOVASCOUT_OUT"


def default_out_root() -> Path:
    return Path(os.environ.get(ENV_OUT_ROOT, "novascout-out"))


def decode_image(path) -> np.ndarray:
    """Decode a JPEG/PNG file to an 8-bit RGB raster.

    16-bit sources are scaled to 8 bits with round-half-up on v*255/65535;
    gray and paletted images are expanded to RGB.
    """
    path = Path(path)
    if not path.exists():
        raise DecodeError(path, "file does not exist")
    try:
        with Image.open(path) as im:
            im.load()
            arr = _to_rgb8(im)
    except DecodeError:
        raise
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise DecodeError(path, str(exc)) from exc
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DecodeError(path, "image has zero dimensions")
    return arr


def _to_rgb8(im: Image.Image) -> np.ndarray:
    if im.mode in ("I;16", "I;16L", "I;16B", "I"):
        arr = np.asarray(im, dtype=np.int64)
        if arr.max(initial=0) > 65535 or arr.min(initial=0) < 0:
            raise ValueError(f"unsupported sample range for mode {im.mode}")
        arr8 = np.floor(arr * 255.0 / 65535.0 + 0.5).astype(np.uint8)
        return np.stack([arr8] * 3, axis=-1)
    rgb = im.convert("RGB")
    arr = np.asarray(rgb, dtype=np.uint8)
    if arr.ndim == 2:
        arr = np.stack([arr] * 3, axis=-1)
    return arr


def save_png(path, raster: np.ndarray) -> None:
    Image.fromarray(np.ascontiguousarray(raster)).save(path, format="PNG")


def build_sidecar(result: ImageResult, config: SessionConfig) -> dict:
    """Deterministic per-image record; timings_ms is the only volatile field."""
    segments = []
    verdicts_by_id = {v.segment_id: v for v in result.verdicts}
    for st in result.stats:
        entry = {
            "segment_id": st.segment_id,
            "pixel_count": st.pixel_count,
            "mean_h": st.mean_h,
            "mean_s": st.mean_s,
            "mean_i": st.mean_i,
        }
        v = verdicts_by_id.get(st.segment_id)
        if v is not None:
            entry.update({
                "bins": list(v.pattern.to_bins()),
                "pattern": v.pattern.bits(),
                "energy": v.energy,
                "novel": v.novel,
                "stored": v.stored,
            })
        segments.append(entry)

    doc = {
        "format": FORMAT_SIDECAR,
        "image_index": result.image_index,
        "config": config.to_dict(),
        "segment_count": result.label_map.segment_count,
        "null_segment_id": result.label_map.null_segment_id,
        "segments": segments,
        "timings_ms": {k: round(v, 3) for k, v in result.timings_ms.items()},
    }
    if result.band_label_maps is not None:
        doc["band_segments"] = {
            band: {
                "segment_count": lm.segment_count,
                "pixel_counts": lm.pixel_counts().tolist(),
            }
            for band, lm in result.band_label_maps.items()
        }
    if result.interest_points is not None:
        doc["interest_points"] = [p.to_dict() for p in result.interest_points]
        doc["degenerate"] = result.interest_degenerate
    return doc


def serialize_sidecar(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1)


def sidecar_comparable(doc: dict) -> str:
    """Serialized form with the volatile timings stripped, for replay checks."""
    clean = {k: v for k, v in doc.items() if k != "timings_ms"}
    return json.dumps(clean, sort_keys=True, indent=1)


def verdicts_from_sidecar(doc: dict) -> list[NoveltyVerdict]:
    out = []
    for seg in doc["segments"]:
        if "pattern" in seg:
            out.append(NoveltyVerdict.from_dict({
                "segment_id": seg["segment_id"],
                "pattern": seg["pattern"],
                "energy": seg["energy"],
                "novel": seg["novel"],
                "stored": seg["stored"],
            }))
    return out


class SessionStore:
    """Owns a session's output directory; writes results as they complete."""

    def __init__(self, out_root, session: Session, source: str = ""):
        self.root = Path(out_root) / session.id
        self.session = session
        self.source = source
        for sub in ("images", "maps", "sidecars"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)
        self.write_manifest()
        self.write_memory()

    def map_names(self, result: ImageResult) -> dict[str, str]:
        """File names under maps/ produced for a result."""
        stem = f"img_{result.image_index:05d}"
        names = {"segmentation": f"{stem}_segmentation.png"}
        if result.novelty_map is not None:
            names["novelty"] = f"{stem}_novelty.png"
        if result.uncommon_maps is not None:
            for band in result.uncommon_maps:
                names[f"uncommon_{band}"] = f"{stem}_uncommon_{band}.png"
            names["interest"] = f"{stem}_interest.png"
            names["overlay"] = f"{stem}_overlay.png"
        return names

    def write_result(self, result: ImageResult, original_rgb: np.ndarray) -> Path:
        """Write originals, rendered maps, the sidecar, and refresh session state."""
        stem = f"img_{result.image_index:05d}"
        save_png(self.root / "images" / f"{stem}.png", original_rgb)

        maps_dir = self.root / "maps"
        save_png(maps_dir / f"{stem}_segmentation.png",
                 render_segmentation(result.label_map))
        if result.novelty_map is not None:
            save_png(maps_dir / f"{stem}_novelty.png", result.novelty_map)
        if result.uncommon_maps is not None:
            for band, smap in result.uncommon_maps.items():
                save_png(maps_dir / f"{stem}_uncommon_{band}.png",
                         render_scalar_map(smap))
            save_png(maps_dir / f"{stem}_interest.png",
                     render_scalar_map(result.interest_map))
            save_png(maps_dir / f"{stem}_overlay.png",
                     draw_interest_overlay(original_rgb, result.interest_points))

        sidecar_path = self.root / "sidecars" / f"{stem}.json"
        doc = build_sidecar(result, self.session.config)
        sidecar_path.write_text(serialize_sidecar(doc))

        self.write_memory()
        self.write_manifest()
        return sidecar_path

    def write_memory(self) -> None:
        (self.root / "memory.json").write_text(
            json.dumps(self.session.memory.to_snapshot()))

    def write_manifest(self) -> None:
        doc = {
            "format": FORMAT_MANIFEST,
            "session_id": self.session.id,
            "source": self.source,
            "config": self.session.config.to_dict(),
            "next_index": self.session.next_index,
            "formats": {"sidecar": FORMAT_SIDECAR, "memory": "novascout.memory/1"},
            "summary": session_summary(self.session),
        }
        (self.root / "manifest.json").write_text(json.dumps(doc, indent=1))

    def sidecar_path(self, index: int) -> Path:
        return self.root / "sidecars" / f"img_{index:05d}.json"

    def read_sidecar(self, index: int) -> dict:
        return json.loads(self.sidecar_path(index).read_text())


def resume_session(session_dir) -> Session:
    """Rebuild a session (config, memory, next index) from its directory."""
    from .novelty import HopfieldMemory

    session_dir = Path(session_dir)
    manifest = json.loads((session_dir / "manifest.json").read_text())
    if manifest.get("format") != FORMAT_MANIFEST:
        raise ValueError(f"unsupported manifest format: {manifest.get('format')!r}")
    config = SessionConfig.from_dict(manifest["config"])
    memory = HopfieldMemory.from_snapshot(
        json.loads((session_dir / "memory.json").read_text()))
    return Session(id=session_dir.name, config=config, memory=memory,
                   results=[], start_index=int(manifest["next_index"]))
