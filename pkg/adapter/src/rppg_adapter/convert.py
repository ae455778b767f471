"""Video -> toolkit clip conversion.

Writes exactly the toolkit's on-disk formats: binary PPM frames named by a
six-digit ``{index}`` pattern, a ``manifest.json``, and a ``geometry.ndjson``
sidecar with one record per emitted frame. Frames where detection fails get
null geometry fields; nothing is ever extrapolated or fabricated.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .engines import resolve_engine
from .video import VideoError, probe_fps, read_video

DETECTOR_CHOICES = ("bbox", "landmark", "both")


class AdapterError(Exception):
    pass


@dataclass(frozen=True)
class AdapterConfig:
    video: str
    out_dir: str
    detector: str = "both"
    stride: int = 1
    engine: str = "auto"

    def __post_init__(self):
        if self.detector not in DETECTOR_CHOICES:
            raise AdapterError(f"detector must be one of {DETECTOR_CHOICES}")
        if self.stride < 1:
            raise AdapterError("stride must be >= 1")


def _encode_ppm(rgb: np.ndarray) -> bytes:
    height, width = rgb.shape[:2]
    return f"P6\n{width} {height}\n255\n".encode("ascii") + rgb.tobytes()


def adapt(config: AdapterConfig) -> dict:
    """Run detection over the video and write the clip; returns the manifest.

    Raises on undecodable input, zero detections, or fewer than two frames.
    """
    engine = resolve_engine(config.engine)
    try:
        src_fps = probe_fps(config.video)
    except VideoError as exc:
        raise AdapterError(str(exc)) from exc

    frames_dir = os.path.join(config.out_dir, "frames")
    os.makedirs(frames_dir, exist_ok=True)

    want_box = config.detector in ("bbox", "both")
    want_landmarks = config.detector in ("landmark", "both")

    records = []
    detections = 0
    width = height = None
    landmark_len = None
    try:
        for emitted, (rgb, _src_index) in enumerate(read_video(config.video, config.stride)):
            if width is None:
                height, width = rgb.shape[:2]
            elif rgb.shape[:2] != (height, width):
                raise AdapterError("video changes frame size mid-stream")
            with open(os.path.join(frames_dir, f"{emitted:06d}.ppm"), "wb") as fh:
                fh.write(_encode_ppm(rgb))
            box, landmarks = engine.detect(rgb)
            box = [round(v, 6) for v in box] if (want_box and box is not None) else None
            if want_landmarks and landmarks is not None:
                if landmark_len is None:
                    landmark_len = len(landmarks)
                elif len(landmarks) != landmark_len:
                    raise AdapterError(
                        f"engine emitted {len(landmarks)} landmarks after {landmark_len}; "
                        "landmark count must stay constant"
                    )
                landmarks = [[round(x, 6), round(y, 6)] for x, y in landmarks]
            else:
                landmarks = None
            if box is not None or landmarks is not None:
                detections += 1
            records.append({"frame": emitted, "bbox": box, "landmarks": landmarks})
    except VideoError as exc:
        raise AdapterError(str(exc)) from exc

    if len(records) < 2:
        raise AdapterError(f"video yielded {len(records)} frames; need at least 2")
    if detections == 0:
        raise AdapterError("zero detections: no frame produced any geometry")

    manifest = {
        "width": width,
        "height": height,
        "fps": src_fps / config.stride,
        "frame_count": len(records),
        "pixel_format": "ppm_sequence",
        "source": "frames/{index}.ppm",
        "provenance": {
            "adapter": "rppg-adapter",
            "engine": engine.name,
            "score_threshold": engine.score_threshold,
            "stride": config.stride,
            "video": os.path.basename(config.video),
        },
    }
    with open(os.path.join(config.out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    with open(os.path.join(config.out_dir, "geometry.ndjson"), "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record))
            fh.write("\n")
    return manifest
