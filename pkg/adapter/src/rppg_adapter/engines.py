"""Face detection engines.

Every engine maps an RGB frame to ``(bbox, landmarks)`` with coordinates
normalized to [0,1]; either element is None when nothing was found. Boxes
and landmark sets are emitted whole -- forehead selection happens downstream
in the toolkit.

Engines, in auto-selection order:

* ``mediapipe`` -- BlazeFace short-range detector for boxes and the 468-point
  face mesh for landmarks. Preferred; only registered when the optional
  ``mediapipe`` package is installed.
* ``yunet`` -- OpenCV's FaceDetectorYN (box + 5 coarse landmarks). Needs the
  ONNX weights; point ``RPPG_ADAPTER_YUNET_MODEL`` at the file.
* ``chroma`` -- classical skin-chroma segmentation: threshold skin-colored
  pixels, take the dominant blob's extent as the box and 16 radial contour
  samples as landmarks. No model files; always available. Meant for
  controlled footage and CI, not in-the-wild robustness.
"""
from __future__ import annotations

import math
import os

import numpy as np


class EngineError(Exception):
    pass


class ChromaEngine:
    """Skin-color blob detector using the classic RGB skin rule."""

    name = "chroma"
    landmark_count = 16
    # smallest believable face: this fraction of the frame must be skin
    min_skin_fraction = 0.002
    score_threshold = None

    def detect(self, rgb: np.ndarray):
        r = rgb[:, :, 0].astype(np.int16)
        g = rgb[:, :, 1].astype(np.int16)
        b = rgb[:, :, 2].astype(np.int16)
        skin = (
            (r > 95) & (g > 40) & (b > 20)
            & ((np.maximum(np.maximum(r, g), b) - np.minimum(np.minimum(r, g), b)) > 15)
            & ((r - g) > 15) & (r > b)
        )
        rows, cols = np.nonzero(skin)
        height, width = rgb.shape[:2]
        if rows.size < self.min_skin_fraction * width * height:
            return None, None

        # trim stray pixels before taking the extent
        c_lo, c_hi = np.quantile(cols, (0.005, 0.995))
        r_lo, r_hi = np.quantile(rows, (0.005, 0.995))
        box = (
            float(c_lo / width),
            float(r_lo / height),
            float((c_hi - c_lo) / width),
            float((r_hi - r_lo) / height),
        )

        cy, cx = rows.mean(), cols.mean()
        angles = np.arctan2(rows - cy, cols - cx)
        radii = np.hypot(rows - cy, cols - cx)
        bins = np.minimum(
            ((angles + math.pi) / (2 * math.pi) * self.landmark_count).astype(np.int64),
            self.landmark_count - 1,
        )
        points = []
        for k in range(self.landmark_count):
            members = np.nonzero(bins == k)[0]
            if members.size == 0:
                points.append((cx / width, cy / height))
                continue
            far = members[int(np.argmax(radii[members]))]
            points.append((float(cols[far]) / width, float(rows[far]) / height))
        clamp = lambda v: min(max(v, 0.0), 1.0)
        return box, [(clamp(x), clamp(y)) for x, y in points]


class YuNetEngine:
    """OpenCV FaceDetectorYN wrapper (box + 5 landmarks)."""

    name = "yunet"
    landmark_count = 5
    score_threshold = 0.6

    def __init__(self, model_path: str):
        import cv2

        if not os.path.isfile(model_path):
            raise EngineError(f"YuNet model not found: {model_path}")
        self._cv2 = cv2
        self._model_path = model_path
        self._detector = None
        self._size = None

    def detect(self, rgb: np.ndarray):
        height, width = rgb.shape[:2]
        if self._detector is None or self._size != (width, height):
            self._detector = self._cv2.FaceDetectorYN.create(
                self._model_path, "", (width, height), self.score_threshold
            )
            self._size = (width, height)
        bgr = rgb[:, :, ::-1].copy()
        _, faces = self._detector.detect(bgr)
        if faces is None or len(faces) == 0:
            return None, None
        face = max(faces, key=lambda f: f[2] * f[3])
        clamp = lambda v: min(max(float(v), 0.0), 1.0)
        box = (
            clamp(face[0] / width), clamp(face[1] / height),
            clamp(face[2] / width), clamp(face[3] / height),
        )
        points = [
            (clamp(face[4 + 2 * i] / width), clamp(face[5 + 2 * i] / height))
            for i in range(5)
        ]
        return box, points


class MediaPipeEngine:
    """BlazeFace box detector plus the 468-point face mesh."""

    name = "mediapipe"
    landmark_count = 468
    score_threshold = 0.5

    def __init__(self):
        import mediapipe as mp

        self._detector = mp.solutions.face_detection.FaceDetection(
            model_selection=0, min_detection_confidence=self.score_threshold
        )
        self._mesh = mp.solutions.face_mesh.FaceMesh(
            static_image_mode=False,
            max_num_faces=1,
            min_detection_confidence=self.score_threshold,
        )

    def detect(self, rgb: np.ndarray):
        clamp = lambda v: min(max(float(v), 0.0), 1.0)
        box = None
        detection = self._detector.process(rgb)
        if detection.detections:
            rel = detection.detections[0].location_data.relative_bounding_box
            box = (clamp(rel.xmin), clamp(rel.ymin), clamp(rel.width), clamp(rel.height))
        landmarks = None
        mesh = self._mesh.process(rgb)
        if mesh.multi_face_landmarks:
            landmarks = [
                (clamp(p.x), clamp(p.y)) for p in mesh.multi_face_landmarks[0].landmark
            ]
        return box, landmarks


def available_engines() -> dict:
    """Name -> zero-argument factory, for every engine usable right now."""
    engines: dict = {}
    try:
        import mediapipe  # noqa: F401

        engines["mediapipe"] = MediaPipeEngine
    except ImportError:
        pass
    yunet_model = os.environ.get("RPPG_ADAPTER_YUNET_MODEL")
    if yunet_model and os.path.isfile(yunet_model):
        engines["yunet"] = lambda: YuNetEngine(yunet_model)
    engines["chroma"] = ChromaEngine
    return engines


def resolve_engine(name: str = "auto"):
    """Instantiate an engine by name; ``auto`` prefers the neural models."""
    engines = available_engines()
    if name == "auto":
        for candidate in ("mediapipe", "yunet", "chroma"):
            if candidate in engines:
                return engines[candidate]()
    if name in engines:
        return engines[name]()
    raise EngineError(
        f"engine {name!r} not available; installed engines: {sorted(engines)}"
    )
