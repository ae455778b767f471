"""Sample face video generation.

Renders a cartoon face (skin-tone ellipse, dark eyes/brows/mouth, white
background) whose skin green level pulses at a chosen rate. Useful as a demo
input and as the hermetic fixture for the adapter's own tests: the chroma
engine detects this face without any model downloads.
"""
from __future__ import annotations

import math

import numpy as np

SKIN_RGB = (168, 120, 106)
BACKGROUND = 235
FEATURE_BGR = (50, 50, 60)


def _base_face_frame(width: int, height: int) -> np.ndarray:
    """BGR canvas with the face drawn at base skin color."""
    import cv2

    frame = np.full((height, width, 3), BACKGROUND, np.uint8)
    cx, cy = int(0.5 * width), int(0.52 * height)
    axes = (int(0.21 * width), int(0.30 * height))
    skin_bgr = (SKIN_RGB[2], SKIN_RGB[1], SKIN_RGB[0])
    cv2.ellipse(frame, (cx, cy), axes, 0, 0, 360, skin_bgr, -1)
    eye_dx, eye_y = int(0.08 * width), int(0.45 * height)
    eye_axes = (max(int(0.025 * width), 2), max(int(0.02 * height), 2))
    for side in (-1, 1):
        cv2.ellipse(frame, (cx + side * eye_dx, eye_y), eye_axes, 0, 0, 360, FEATURE_BGR, -1)
        cv2.line(
            frame,
            (cx + side * eye_dx - eye_axes[0], eye_y - 3 * eye_axes[1]),
            (cx + side * eye_dx + eye_axes[0], eye_y - 3 * eye_axes[1]),
            FEATURE_BGR, 2,
        )
    cv2.ellipse(
        frame, (cx, int(0.66 * height)), (int(0.05 * width), max(int(0.015 * height), 2)),
        0, 0, 360, FEATURE_BGR, -1,
    )
    return frame


def write_face_video(
    path: str,
    seconds: float = 10.0,
    fps: float = 30.0,
    width: int = 320,
    height: int = 240,
    bpm: float = 72.0,
    amplitude: float = 4.0,
    noise_sigma: float = 1.0,
    blank_frames=(),
    seed: int = 0,
) -> int:
    """Write an MJPG AVI; returns the frame count.

    ``blank_frames`` lists frame indices rendered without a face (background
    only), for exercising detection dropouts.
    """
    import cv2

    base = _base_face_frame(width, height)
    skin = np.all(base == (SKIN_RGB[2], SKIN_RGB[1], SKIN_RGB[0]), axis=2)
    blank = np.full_like(base, BACKGROUND)
    rng = np.random.default_rng(seed)
    blank_set = set(blank_frames)

    writer = cv2.VideoWriter(path, cv2.VideoWriter_fourcc(*"MJPG"), fps, (width, height))
    if not writer.isOpened():
        raise RuntimeError(f"cannot open video writer for {path}")
    count = round(seconds * fps)
    try:
        for i in range(count):
            if i in blank_set:
                writer.write(blank)
                continue
            frame = base.copy()
            pulse = amplitude * math.sin(2 * math.pi * (bpm / 60.0) * (i / fps))
            green = frame[:, :, 1].astype(np.float64)
            green[skin] += pulse + rng.normal(0.0, noise_sigma, size=int(skin.sum()))
            frame[:, :, 1] = np.clip(np.rint(green), 0, 255).astype(np.uint8)
            writer.write(frame)
    finally:
        writer.release()
    return count


def write_blank_video(
    path: str, seconds: float = 3.0, fps: float = 30.0, width: int = 320, height: int = 240
) -> int:
    """A video with no face at all (uniform background)."""
    import cv2

    writer = cv2.VideoWriter(path, cv2.VideoWriter_fourcc(*"MJPG"), fps, (width, height))
    if not writer.isOpened():
        raise RuntimeError(f"cannot open video writer for {path}")
    frame = np.full((height, width, 3), BACKGROUND, np.uint8)
    count = round(seconds * fps)
    try:
        for _ in range(count):
            writer.write(frame)
    finally:
        writer.release()
    return count
