"""HTTP session service: the interactive explorer loop over the pipeline.

One service hosts many sessions; each session owns an exclusive processing
lock so concurrent uploads serialize, giving gap-free image indices and
deterministic memory evolution. Results, rendered maps and memory snapshots
persist under the output root after every image, so a restarted service
resumes every session exactly where it stopped.

Uploads are raw image bytes (JPEG or PNG) in the request body.
"""

from __future__ import annotations

import io
import json
import logging
import threading
import time
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse
from PIL import Image, UnidentifiedImageError

from .errors import ConfigError
from .pipeline import Session, SessionConfig, process_image, session_summary
from .storage import SessionStore, _to_rgb8, build_sidecar, resume_session

log = logging.getLogger("novascout.service")

MAX_UPLOAD_BYTES = 16 * 1024 * 1024
DEMO_IDLE_TTL_S = 3600.0


class LiveSession:
    """A session plus its store, lock and idle clock."""

    def __init__(self, session: Session, store: SessionStore):
        self.session = session
        self.store = store
        self.lock = threading.Lock()
        self.last_access = time.monotonic()

    def touch(self):
        self.last_access = time.monotonic()


def _decode_upload(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as im:
        im.load()
        return _to_rgb8(im)


def create_app(out_root, demo_mode: bool = False,
               max_upload_bytes: int = MAX_UPLOAD_BYTES,
               restore: bool = True) -> FastAPI:
    out_root = Path(out_root)
    out_root.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="novascout session service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    sessions: dict[str, LiveSession] = {}

    if restore:
        for manifest in sorted(out_root.glob("*/manifest.json")):
            try:
                session = resume_session(manifest.parent)
                sessions[session.id] = LiveSession(
                    session, SessionStore(out_root, session))
                log.info("restored session %s at image %d",
                         session.id, session.next_index)
            except Exception as exc:
                log.warning("could not restore %s: %s", manifest.parent.name, exc)

    def error(status: int, kind: str, message: str, **extra) -> JSONResponse:
        return JSONResponse({"error": kind, "message": message, **extra},
                            status_code=status)

    def get_live(session_id: str):
        live = sessions.get(session_id)
        if live is None:
            return None
        if demo_mode and time.monotonic() - live.last_access > DEMO_IDLE_TTL_S:
            del sessions[session_id]
            return None
        live.touch()
        return live

    def session_info(live: LiveSession) -> dict:
        return {
            "id": live.session.id,
            "config": live.session.config.to_dict(),
            "image_count": live.session.next_index,
            "stored_count": live.session.memory.stored_count,
        }

    def map_urls(live: LiveSession, result) -> dict:
        base = f"/sessions/{live.session.id}/maps"
        stem = f"img_{result.image_index:05d}"
        urls = {"original": f"/sessions/{live.session.id}/images/{stem}.png",
                "segmentation": f"{base}/{stem}_segmentation.png"}
        if result.novelty_map is not None:
            urls["novelty"] = f"{base}/{stem}_novelty.png"
        if result.uncommon_maps is not None:
            for band in result.uncommon_maps:
                urls[f"uncommon_{band}"] = f"{base}/{stem}_uncommon_{band}.png"
            urls["interest"] = f"{base}/{stem}_interest.png"
            urls["overlay"] = f"{base}/{stem}_overlay.png"
        return urls

    @app.post("/sessions")
    async def create_session(request: Request):
        body = await request.body()
        overrides = json.loads(body) if body else {}
        try:
            config = SessionConfig.from_dict(overrides)
        except ConfigError as exc:
            return error(400, "invalid-config", str(exc), field=exc.field)
        session = Session.new(config)
        live = LiveSession(session, SessionStore(out_root, session, source="http"))
        sessions[session.id] = live
        return session_info(live)

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": [session_info(v) for v in sessions.values()]}

    @app.post("/sessions/{session_id}/images")
    async def submit_image(session_id: str, request: Request):
        live = get_live(session_id)
        if live is None:
            return error(404, "unknown-session", f"no session {session_id}")
        data = await request.body()
        if len(data) > max_upload_bytes:
            return error(413, "payload-too-large",
                         f"{len(data)} bytes exceeds cap {max_upload_bytes}")
        if not data:
            return error(400, "decode-failure", "empty request body")
        try:
            rgb = _decode_upload(data)
        except (UnidentifiedImageError, OSError, ValueError) as exc:
            return error(400, "decode-failure", str(exc))
        with live.lock:
            try:
                result = process_image(rgb, live.session)
            except ValueError as exc:
                return error(400, "decode-failure", str(exc))
            live.store.write_result(result, rgb)
        doc = build_sidecar(result, live.session.config)
        doc["map_urls"] = map_urls(live, result)
        doc["stored_count"] = live.session.memory.stored_count
        return doc

    @app.get("/sessions/{session_id}/results/{index}")
    def get_result(session_id: str, index: int):
        live = get_live(session_id)
        if live is None:
            return error(404, "unknown-session", f"no session {session_id}")
        path = live.store.sidecar_path(index)
        if not path.exists():
            return error(404, "unknown-result", f"no result {index}")
        doc = json.loads(path.read_text())
        # Rebuild map URLs from the files present for this image.
        stem = f"img_{index:05d}"
        base = f"/sessions/{session_id}/maps"
        urls = {"original": f"/sessions/{session_id}/images/{stem}.png"}
        for f in sorted((live.store.root / "maps").glob(f"{stem}_*.png")):
            kind = f.stem[len(stem) + 1:]
            urls[kind] = f"{base}/{f.name}"
        doc["map_urls"] = urls
        return doc

    @app.get("/sessions/{session_id}/memory")
    def get_memory(session_id: str):
        live = get_live(session_id)
        if live is None:
            return error(404, "unknown-session", f"no session {session_id}")
        with live.lock:
            return live.session.memory.to_snapshot()

    @app.post("/sessions/{session_id}/reset")
    def reset_memory(session_id: str):
        live = get_live(session_id)
        if live is None:
            return error(404, "unknown-session", f"no session {session_id}")
        with live.lock:
            live.session.memory.reset()
            live.store.write_memory()
        return {"id": session_id, "stored_count": 0, "reset": True}

    @app.post("/sessions/{session_id}/config")
    def update_config(session_id: str, overrides: dict):
        """Mid-session tuning (e.g. the matching angle); logged, memory kept."""
        live = get_live(session_id)
        if live is None:
            return error(404, "unknown-session", f"no session {session_id}")
        merged = live.session.config.to_dict()
        merged.update(overrides)
        try:
            config = SessionConfig.from_dict(merged)
        except ConfigError as exc:
            return error(400, "invalid-config", str(exc), field=exc.field)
        with live.lock:
            live.session.config = config
            live.store.write_manifest()
        log.info("session %s config updated: %s", session_id, overrides)
        return session_info(live)

    @app.get("/sessions/{session_id}/summary")
    def get_summary(session_id: str):
        live = get_live(session_id)
        if live is None:
            return error(404, "unknown-session", f"no session {session_id}")
        doc = session_summary(live.session)
        doc["id"] = session_id
        return doc

    @app.get("/sessions/{session_id}/maps/{filename}")
    def get_map(session_id: str, filename: str):
        return _serve_file(session_id, "maps", filename)

    @app.get("/sessions/{session_id}/images/{filename}")
    def get_image(session_id: str, filename: str):
        return _serve_file(session_id, "images", filename)

    def _serve_file(session_id: str, sub: str, filename: str):
        live = get_live(session_id)
        if live is None:
            return error(404, "unknown-session", f"no session {session_id}")
        path = (live.store.root / sub / filename).resolve()
        if not path.is_file() or live.store.root.resolve() not in path.parents:
            return error(404, "unknown-file", filename)
        return FileResponse(path, media_type="image/png")

    @app.get("/healthz")
    def health():
        return {"status": "ok", "sessions": len(sessions)}

    return app
