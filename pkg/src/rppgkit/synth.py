"""Synthetic clip generator: known-frequency ground truth for verification.

Renders a flat-color "face" rectangle on a white background whose green
channel carries a sinusoidal pulse at the configured bpm, optional linear
drift, an optional low-frequency sway component, per-pixel Gaussian noise,
and a static horizontal gradient across the face. The gradient is what makes
detector jitter matter: a displaced ROI averages different gradient values,
so box jitter feeds baseline wobble into the trace while the unjittered ROI
sees a zero-mean gradient contribution.

The geometry sidecar carries the face box and a fixed 12-point landmark
template (indices 0-3 are the forehead corners used by the default polygon
config), each perturbed per frame by the configured jitter.

Randomness: ``numpy.random.SeedSequence(seed)`` is split into two PCG64
streams, one for pixel noise and one for geometry jitter, consumed in frame
order. Identical seed and config therefore reproduce identical bytes.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import SynthError
from .ingest import ClipManifest, Frame, encode_ppm, write_manifest
from .roi import FaceBox, FaceGeometry, LandmarkSet, write_geometry_sidecar

BACKGROUND_RGB = (235, 235, 235)

# Face box, normalized to the frame.
FACE_X, FACE_Y, FACE_W, FACE_H = 0.30, 0.20, 0.40, 0.55

# Landmark template, normalized to the face box. The first four points are
# the forehead corners (TL, TR, BR, BL) matching the default bbox fractions,
# so with zero jitter both ROI methods select the same pixels.
FACE_TEMPLATE = (
    (0.25, 0.10),
    (0.75, 0.10),
    (0.75, 0.30),
    (0.25, 0.30),
    (0.30, 0.45),
    (0.70, 0.45),
    (0.50, 0.60),
    (0.35, 0.78),
    (0.65, 0.78),
    (0.50, 0.95),
    (0.05, 0.50),
    (0.95, 0.50),
)


@dataclass(frozen=True)
class SynthConfig:
    bpm: float = 72.0
    fps: float = 30.0
    duration_s: float = 10.0
    width: int = 320
    height: int = 240
    base_rgb: tuple[int, int, int] = (168, 120, 106)
    amplitude: float = 1.5
    noise_sigma: float = 2.0
    drift_per_s: float = 0.0
    sway_hz: float = 0.0
    sway_amplitude: float = 0.0
    texture_slope: float = 0.25
    bbox_jitter_sigma: float = 0.0
    landmark_jitter_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.fps <= 0:
            raise SynthError("fps must be positive")
        if self.duration_s <= 0:
            raise SynthError("duration_s must be positive")
        if self.bpm <= 0:
            raise SynthError("bpm must be positive")
        if self.width < 1 or self.height < 1:
            raise SynthError("frame dimensions must be positive")
        if self.amplitude < 0 or self.noise_sigma < 0 or self.sway_amplitude < 0:
            raise SynthError("amplitude and noise levels must be non-negative")
        if self.bbox_jitter_sigma < 0 or self.landmark_jitter_sigma < 0:
            raise SynthError("jitter sigmas must be non-negative")
        if len(self.base_rgb) != 3 or any(
            not (0 <= int(v) <= 255) for v in self.base_rgb
        ):
            raise SynthError("base_rgb must be three values in [0, 255]")

    @property
    def frame_count(self) -> int:
        return round(self.duration_s * self.fps)


def _face_pixel_rect(config: SynthConfig) -> tuple[int, int, int, int]:
    """(c0, c1, r0, r1) pixel bounds of the rendered face region."""
    c0 = max(math.ceil(FACE_X * config.width - 0.5), 0)
    c1 = min(math.ceil((FACE_X + FACE_W) * config.width - 0.5), config.width)
    r0 = max(math.ceil(FACE_Y * config.height - 0.5), 0)
    r1 = min(math.ceil((FACE_Y + FACE_H) * config.height - 0.5), config.height)
    return c0, c1, r0, r1


def signal_value(config: SynthConfig, t: float) -> float:
    """Temporal green modulation at time t (pulse + drift + sway)."""
    pulse = config.amplitude * math.sin(2.0 * math.pi * (config.bpm / 60.0) * t)
    sway = config.sway_amplitude * math.sin(2.0 * math.pi * config.sway_hz * t)
    return pulse + config.drift_per_s * t + sway


def expected_trace(config: SynthConfig) -> list[float]:
    """Noise-free spatial-mean green per frame, in closed form.

    The static gradient is centered on the forehead band, so it contributes
    (sub-quantization) nothing to the ROI mean and is excluded here.
    """
    base_g = float(config.base_rgb[1])
    return [
        base_g + signal_value(config, i / config.fps) for i in range(config.frame_count)
    ]


def _quantize(values: np.ndarray) -> np.ndarray:
    """Round half-to-even, clamp to the 8-bit range."""
    return np.clip(np.rint(values), 0, 255).astype(np.uint8)


def _base_geometry() -> tuple[FaceBox, LandmarkSet]:
    box = FaceBox(x=FACE_X, y=FACE_Y, w=FACE_W, h=FACE_H)
    pts = tuple(
        (FACE_X + u * FACE_W, FACE_Y + v * FACE_H) for u, v in FACE_TEMPLATE
    )
    return box, LandmarkSet(points=pts)


def _jittered_geometry(
    frame_index: int, config: SynthConfig, rng: np.random.Generator
) -> FaceGeometry:
    box, landmarks = _base_geometry()
    dx, dy = rng.normal(0.0, config.bbox_jitter_sigma, size=2)
    bx = min(max(box.x + dx, 0.0), 1.0 - box.w)
    by = min(max(box.y + dy, 0.0), 1.0 - box.h)
    offsets = rng.normal(0.0, config.landmark_jitter_sigma, size=(len(landmarks.points), 2))
    pts = tuple(
        (min(max(px + ox, 0.0), 1.0), min(max(py + oy, 0.0), 1.0))
        for (px, py), (ox, oy) in zip(landmarks.points, offsets)
    )
    return FaceGeometry(
        frame_index=frame_index,
        box=FaceBox(x=bx, y=by, w=box.w, h=box.h),
        landmarks=LandmarkSet(points=pts),
    )


def generate_clip(
    config: SynthConfig, out_dir: str, pixel_format: str = "ppm_sequence"
) -> ClipManifest:
    """Write manifest, frames, and geometry sidecar; return the manifest.

    Layout: ``manifest.json``, ``geometry.ndjson``, and either
    ``frames/000000.ppm ...`` or a single ``frames.rgb24``.
    """
    if pixel_format not in ("ppm_sequence", "raw_rgb24"):
        raise SynthError(f"unsupported pixel_format {pixel_format!r}")
    c0, c1, r0, r1 = _face_pixel_rect(config)
    if c0 >= c1 or r0 >= r1:
        raise SynthError(
            f"face region has zero area at {config.width}x{config.height}"
        )
    try:
        os.makedirs(out_dir, exist_ok=True)
        if pixel_format == "ppm_sequence":
            os.makedirs(os.path.join(out_dir, "frames"), exist_ok=True)
    except OSError as exc:
        raise SynthError(f"cannot create output directory {out_dir}: {exc}") from exc

    seed_seq = np.random.SeedSequence(config.seed)
    pixel_ss, geometry_ss = seed_seq.spawn(2)
    pixel_rng = np.random.Generator(np.random.PCG64(pixel_ss))
    geometry_rng = np.random.Generator(np.random.PCG64(geometry_ss))

    base_r, base_g, base_b = (float(v) for v in config.base_rgb)
    height, width = config.height, config.width
    face_w, face_h = c1 - c0, r1 - r0

    # Static horizontal gradient, zero-mean across the forehead band center.
    center_x = (FACE_X + FACE_W / 2.0) * width
    cols = np.arange(c0, c1, dtype=np.float64)
    green_field = base_g + config.texture_slope * (cols + 0.5 - center_x)

    canvas = np.empty((height, width, 3), dtype=np.uint8)
    canvas[:, :, 0] = BACKGROUND_RGB[0]
    canvas[:, :, 1] = BACKGROUND_RGB[1]
    canvas[:, :, 2] = BACKGROUND_RGB[2]
    canvas[r0:r1, c0:c1, 0] = _quantize(np.full((face_h, face_w), base_r))
    canvas[r0:r1, c0:c1, 2] = _quantize(np.full((face_h, face_w), base_b))

    geometry: list[FaceGeometry] = []
    raw_path = os.path.join(out_dir, "frames.rgb24")
    raw_fh = open(raw_path, "wb") if pixel_format == "raw_rgb24" else None
    try:
        for i in range(config.frame_count):
            t = i / config.fps
            values = green_field[None, :] + signal_value(config, t)
            if config.noise_sigma > 0:
                values = values + pixel_rng.normal(
                    0.0, config.noise_sigma, size=(face_h, face_w)
                )
            else:
                values = np.broadcast_to(values, (face_h, face_w))
            canvas[r0:r1, c0:c1, 1] = _quantize(values)
            frame = Frame(index=i, pixels=canvas.tobytes(), width=width, height=height)
            if raw_fh is not None:
                raw_fh.write(frame.pixels)
            else:
                name = os.path.join(out_dir, "frames", f"{i:06d}.ppm")
                with open(name, "wb") as fh:
                    fh.write(encode_ppm(frame))
            geometry.append(_jittered_geometry(i, config, geometry_rng))
    except OSError as exc:
        raise SynthError(f"cannot write clip to {out_dir}: {exc}") from exc
    finally:
        if raw_fh is not None:
            raw_fh.close()

    source = "frames.rgb24" if pixel_format == "raw_rgb24" else "frames/{index}.ppm"
    manifest = ClipManifest(
        width=width,
        height=height,
        fps=config.fps,
        frame_count=config.frame_count,
        pixel_format=pixel_format,
        source=source,
        base_dir=os.path.abspath(out_dir),
    )
    write_manifest(manifest, os.path.join(out_dir, "manifest.json"))
    write_geometry_sidecar(geometry, os.path.join(out_dir, "geometry.ndjson"))
    return manifest
