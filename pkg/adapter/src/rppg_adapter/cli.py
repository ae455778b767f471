"""Adapter command line.

``adapt`` converts a video into the toolkit clip layout; ``sample`` writes a
synthetic face video for demos and tests; ``engines`` lists what detection
backends this installation can use.
"""
from __future__ import annotations

import argparse
import sys

from .convert import AdapterConfig, AdapterError, adapt
from .engines import EngineError, available_engines
from .sample import write_blank_video, write_face_video


def cmd_adapt(args) -> int:
    config = AdapterConfig(
        video=args.video,
        out_dir=args.out,
        detector=args.detector,
        stride=args.stride,
        engine=args.engine,
    )
    manifest = adapt(config)
    print(
        f"wrote {manifest['frame_count']} frames at "
        f"{manifest['width']}x{manifest['height']} "
        f"({manifest['fps']:g} fps, engine {manifest['provenance']['engine']}) "
        f"to {args.out}"
    )
    return 0


def cmd_sample(args) -> int:
    if args.no_face:
        count = write_blank_video(args.out, seconds=args.seconds, fps=args.fps)
    else:
        blank = list(range(0, int(args.seconds * args.fps), args.blank_every)) if args.blank_every else []
        count = write_face_video(
            args.out, seconds=args.seconds, fps=args.fps, bpm=args.bpm,
            blank_frames=blank, seed=args.seed,
        )
    print(f"wrote {count} frames to {args.out}")
    return 0


def cmd_engines(_args) -> int:
    for name in ("mediapipe", "yunet", "chroma"):
        status = "available" if name in available_engines() else "not installed"
        print(f"{name}: {status}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rppg-adapt", description="Convert face videos into rppgkit input clips"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ad = sub.add_parser("adapt", help="video -> frames + manifest + geometry sidecar")
    ad.add_argument("--video", required=True)
    ad.add_argument("--out", required=True)
    ad.add_argument("--detector", choices=["bbox", "landmark", "both"], default="both")
    ad.add_argument("--engine", default="auto",
                    help="auto | mediapipe | yunet | chroma (default: auto)")
    ad.add_argument("--stride", type=int, default=1, help="keep every Nth frame")
    ad.set_defaults(func=cmd_adapt)

    sm = sub.add_parser("sample", help="write a synthetic face video")
    sm.add_argument("--out", required=True)
    sm.add_argument("--seconds", type=float, default=10.0)
    sm.add_argument("--fps", type=float, default=30.0)
    sm.add_argument("--bpm", type=float, default=72.0)
    sm.add_argument("--seed", type=int, default=0)
    sm.add_argument("--no-face", action="store_true", dest="no_face")
    sm.add_argument("--blank-every", type=int, default=0, dest="blank_every",
                    help="drop the face every Nth frame (detection-gap demo)")
    sm.set_defaults(func=cmd_sample)

    en = sub.add_parser("engines", help="list detection engines")
    en.set_defaults(func=cmd_engines)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AdapterError, EngineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
