"""Polling folder watcher emulating the camera-drop automation.

New image files appearing in the watched directory are processed in arrival
order (name order within one poll batch). A file is only picked up once its
size is stable across one poll interval, so partially transferred images are
left alone. Decode failures are logged and skipped; the watcher never aborts
on a bad file.
"""

from __future__ import annotations

import logging
import time
from pathlib import Path
from typing import Callable, Optional

from .errors import DecodeError
from .pipeline import Session, process_image
from .storage import SessionStore, decode_image

log = logging.getLogger("novascout.watch")

IMAGE_SUFFIXES = {".jpg", ".jpeg", ".png"}

DEFAULT_POLL_S = 0.25


def watch_folder(directory, session: Session, store: SessionStore,
                 poll_interval: float = DEFAULT_POLL_S,
                 max_images: Optional[int] = None,
                 should_stop: Optional[Callable[[], bool]] = None,
                 on_result=None) -> int:
    """Process images dropped into `directory` until stopped.

    Returns the number of images processed. max_images and should_stop exist
    for tests and bounded runs; by default the watcher runs until
    interrupted.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise NotADirectoryError(f"watch folder does not exist: {directory}")
    seen: set[str] = set()
    pending: dict[str, int] = {}
    queue: list[Path] = []
    processed = 0

    while True:
        if should_stop is not None and should_stop():
            return processed
        batch = []
        for path in sorted(directory.iterdir()):
            name = path.name
            if name in seen or not path.is_file():
                continue
            size = path.stat().st_size
            if pending.get(name) == size:
                # Stable across one interval: ready.
                del pending[name]
                seen.add(name)
                batch.append(path)
            else:
                pending[name] = size
        queue.extend(batch)

        while queue:
            path = queue.pop(0)
            if path.suffix.lower() not in IMAGE_SUFFIXES:
                log.warning("skipping non-image file %s", path.name)
                continue
            try:
                rgb = decode_image(path)
            except DecodeError as exc:
                log.warning("skipping %s: %s", path.name, exc.reason)
                continue
            result = process_image(rgb, session)
            store.write_result(result, rgb)
            processed += 1
            log.info("processed %s as image %d (%d segments)",
                     path.name, result.image_index,
                     result.label_map.segment_count)
            if on_result is not None:
                on_result(result)
            if max_images is not None and processed >= max_images:
                return processed
        time.sleep(poll_interval)
