"""Video decoding via OpenCV."""
from __future__ import annotations

import os

import numpy as np


class VideoError(Exception):
    pass


def read_video(path: str, stride: int = 1):
    """Yield (frame_rgb, source_index) for every ``stride``-th frame.

    Returns a generator plus the container fps through ``probe_fps``; frames
    come out as RGB uint8 arrays.
    """
    import cv2

    if stride < 1:
        raise VideoError("stride must be >= 1")
    if not os.path.isfile(path):
        raise VideoError(f"video not found: {path}")
    cap = cv2.VideoCapture(path)
    if not cap.isOpened():
        raise VideoError(f"cannot decode video: {path}")
    try:
        index = 0
        while True:
            ok, bgr = cap.read()
            if not ok:
                break
            if index % stride == 0:
                yield np.ascontiguousarray(bgr[:, :, ::-1]), index
            index += 1
    finally:
        cap.release()


def probe_fps(path: str) -> float:
    """Container-reported frames per second."""
    import cv2

    if not os.path.isfile(path):
        raise VideoError(f"video not found: {path}")
    cap = cv2.VideoCapture(path)
    if not cap.isOpened():
        raise VideoError(f"cannot decode video: {path}")
    fps = cap.get(cv2.CAP_PROP_FPS)
    cap.release()
    if not fps or fps <= 0:
        raise VideoError(f"container reports no usable fps for {path}")
    return float(fps)
