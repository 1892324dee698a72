"""Command-line interface.

Subcommands:
    run         process a directory of images or watch a drop folder
    gen-corpus  write synthetic test sequences to disk
    verify      run the acceptance checks (one PASS/FAIL line each)
    serve       start the HTTP session service
    bench       compare compiled and pure-Python kernels
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from PIL import Image

from . import __version__
from .errors import DecodeError, NovaScoutError
from .kernels import backend
from .pipeline import Session, SessionConfig, process_image, session_summary
from .storage import (ENV_OUT_ROOT, SessionStore, decode_image,
                      default_out_root, resume_session)
from .watcher import IMAGE_SUFFIXES, watch_folder

log = logging.getLogger("novascout")

CONFIG_FLAGS = ("theta_deg", "blur_sigma_frac", "min_segment_frac", "mode", "k_points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="novascout",
        description="Color novelty detection and interest mapping for exploration imagery.")
    parser.add_argument("--version", action="version", version=f"novascout {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="process images through a session")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="directory of images, processed in name order")
    src.add_argument("--watch", help="drop folder to poll for new images")
    run.add_argument("--out", default=None,
                     help=f"output root (default env {ENV_OUT_ROOT} or ./novascout-out)")
    run.add_argument("--config", default=None, help="JSON file with config defaults")
    run.add_argument("--mode", choices=("novelty", "interest", "both"), default=None)
    run.add_argument("--theta-deg", type=float, default=None,
                     dest="theta_deg", help="color matching angle in degrees")
    run.add_argument("--blur-sigma-frac", type=float, default=None, dest="blur_sigma_frac")
    run.add_argument("--min-segment-frac", type=float, default=None, dest="min_segment_frac")
    run.add_argument("--k-points", type=int, default=None, dest="k_points")
    run.add_argument("--resume", default=None, metavar="SESSION",
                     help="session id under the output root to continue")
    run.add_argument("--reset-memory", action="store_true",
                     help="zero the color memory before processing")
    run.add_argument("--poll-interval", type=float, default=0.25)
    run.add_argument("--max-images", type=int, default=None,
                     help="stop the watcher after this many images")

    gen = sub.add_parser("gen-corpus", help="generate synthetic test sequences")
    gen.add_argument("--kind", required=True,
                     choices=("terrain", "fast-learning", "three-color",
                              "natural", "rare-region"))
    gen.add_argument("--out", required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--count", type=int, default=10)
    gen.add_argument("--width", type=int, default=320)
    gen.add_argument("--height", type=int, default=240)

    sub.add_parser("verify", help="run the acceptance checks")

    serve = sub.add_parser("serve", help="start the HTTP session service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--out", default=None)
    serve.add_argument("--demo", action="store_true",
                       help="demo mode: sessions expire after 1h idle")

    bench = sub.add_parser("bench", help="benchmark compiled vs fallback kernels")
    bench.add_argument("--width", type=int, default=640)
    bench.add_argument("--height", type=int, default=480)
    bench.add_argument("--repeat", type=int, default=3)

    return parser


def _merged_config(args) -> SessionConfig:
    base: dict = {}
    if args.config:
        base.update(json.loads(Path(args.config).read_text()))
    for field in CONFIG_FLAGS:
        value = getattr(args, field, None)
        if value is not None:
            base[field] = value
    return SessionConfig.from_dict(base)


def cmd_run(args) -> int:
    out_root = Path(args.out) if args.out else default_out_root()
    if args.resume:
        session = resume_session(out_root / args.resume)
        overrides = {f: getattr(args, f) for f in CONFIG_FLAGS
                     if getattr(args, f, None) is not None}
        if overrides:
            merged = session.config.to_dict()
            merged.update(overrides)
            session.config = SessionConfig.from_dict(merged)
            log.info("resumed session %s with overrides %s", session.id, overrides)
    else:
        session = Session.new(_merged_config(args))
    if args.reset_memory:
        session.memory.reset()
        log.info("memory reset to zero")

    source = args.input or args.watch
    store = SessionStore(out_root, session, source=str(source))
    print(f"session {session.id} -> {store.root} (kernels: {backend()})")

    if args.input:
        in_dir = Path(args.input)
        files = sorted(p for p in in_dir.iterdir()
                       if p.suffix.lower() in IMAGE_SUFFIXES)
        if not files:
            print(f"error: no images found in {in_dir}", file=sys.stderr)
            return 2
        for path in files:
            try:
                rgb = decode_image(path)
            except DecodeError as exc:
                log.warning("skipping %s: %s", path.name, exc.reason)
                continue
            result = process_image(rgb, session)
            store.write_result(result, rgb)
            novel = sum(1 for v in result.verdicts if v.novel)
            print(f"  [{result.image_index:04d}] {path.name}: "
                  f"{result.label_map.segment_count} segments, {novel} novel")
    else:
        print(f"watching {args.watch} (Ctrl-C to stop)")
        try:
            watch_folder(args.watch, session, store,
                         poll_interval=args.poll_interval,
                         max_images=args.max_images)
        except KeyboardInterrupt:
            pass

    summary = session_summary(session)
    print(f"done: {summary['images_processed']} images, "
          f"{summary['segments_seen']} segments, "
          f"{summary['patterns_stored']} patterns stored")
    return 0


def cmd_gen_corpus(args) -> int:
    from . import synth

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.kind == "terrain":
        images = synth.terrain_sequence(args.seed, count=args.count,
                                        width=args.width, height=args.height)
    elif args.kind == "fast-learning":
        images = list(synth.fast_learning_pair(args.width, args.height))
    elif args.kind == "three-color":
        images = [synth.three_color_image(args.width, args.height)]
    elif args.kind == "natural":
        images = [synth.natural_image(args.seed + i, width=args.width,
                                      height=args.height)
                  for i in range(args.count)]
    else:
        images = [synth.rare_region_image(args.width, args.height)]
    for i, img in enumerate(images):
        Image.fromarray(img).save(out / f"{args.kind}_{i:03d}.png")
    index = {"kind": args.kind, "seed": args.seed, "count": len(images),
             "width": args.width, "height": args.height}
    (out / "corpus.json").write_text(json.dumps(index, indent=1))
    print(f"wrote {len(images)} {args.kind} images to {out}")
    return 0


def cmd_verify(_args) -> int:
    from .selfcheck import run_all

    print(f"kernel backend: {backend()}")
    return 0 if run_all(verbose=True) else 1


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    out_root = Path(args.out) if args.out else default_out_root()
    app = create_app(out_root, demo_mode=args.demo)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def cmd_bench(args) -> int:
    from .bench import format_report, run_benchmark

    print(format_report(run_benchmark(args.width, args.height, args.repeat)))
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    handlers = {
        "run": cmd_run,
        "gen-corpus": cmd_gen_corpus,
        "verify": cmd_verify,
        "serve": cmd_serve,
        "bench": cmd_bench,
    }
    try:
        return handlers[args.command](args)
    except NovaScoutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
