"""Forehead region-of-interest construction.

Two strategies produce a per-frame pixel mask from detector output:

* ``forehead_rect`` -- a fractional sub-rectangle of the detected face box.
* ``forehead_polygon`` -- a polygon over selected landmark points, rasterized
  with a pixel-center even-odd rule.

Which face-box fractions and which landmark ordinals define the forehead is
configuration, not code: see ``ForeheadSpec`` and ``data/forehead_default.json``.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from . import _kernels
from .errors import EmptyRoiError, GeometryError


@dataclass(frozen=True)
class FaceBox:
    """Face bounding box, normalized to [0,1] of the frame."""

    x: float
    y: float
    w: float
    h: float


@dataclass(frozen=True)
class LandmarkSet:
    """Ordered landmark points, normalized to [0,1] of the frame."""

    points: tuple[tuple[float, float], ...]

    @property
    def count(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class FaceGeometry:
    """Per-frame detector output; either field may be missing on dropouts."""

    frame_index: int
    box: FaceBox | None = None
    landmarks: LandmarkSet | None = None


@dataclass(frozen=True)
class ForeheadSpec:
    """Forehead definition for both ROI paths.

    Fractions select a sub-rectangle of the face box; polygon indices select
    landmark ordinals (in drawing order) for the mask path.
    """

    left_frac: float = 0.25
    right_frac: float = 0.75
    top_frac: float = 0.10
    bottom_frac: float = 0.30
    polygon_indices: tuple[int, ...] = (0, 1, 2, 3)

    def __post_init__(self):
        if not (0.0 <= self.left_frac < self.right_frac <= 1.0):
            raise GeometryError(
                f"require 0 <= left_frac < right_frac <= 1, got "
                f"{self.left_frac}, {self.right_frac}"
            )
        if not (0.0 <= self.top_frac < self.bottom_frac <= 1.0):
            raise GeometryError(
                f"require 0 <= top_frac < bottom_frac <= 1, got "
                f"{self.top_frac}, {self.bottom_frac}"
            )
        if len(self.polygon_indices) < 3:
            raise GeometryError("polygon_indices needs at least 3 entries")
        if any((not isinstance(i, int)) or i < 0 for i in self.polygon_indices):
            raise GeometryError("polygon_indices must be non-negative integers")


@dataclass(frozen=True)
class RoiMask:
    """Pixel set contributing to one frame's green mean.

    Stored as half-open row runs; ``pixels`` materializes the (col, row) set
    for exact comparisons in tests and small-scale use.
    """

    frame_index: int
    runs: tuple[tuple[int, int, int], ...]

    @property
    def pixel_count(self) -> int:
        return sum(c1 - c0 for _, c0, c1 in self.runs)

    @property
    def pixels(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (c, r) for r, c0, c1 in self.runs for c in range(c0, c1)
        )

    def bounds_ok(self, width: int, height: int) -> bool:
        return all(
            0 <= r < height and 0 <= c0 and c1 <= width for r, c0, c1 in self.runs
        )


def _span(a: float, b: float, limit: int) -> tuple[int, int]:
    """Pixel indices whose centers fall in [a, b), clipped to [0, limit)."""
    lo = math.ceil(a - 0.5)
    hi = math.ceil(b - 0.5)
    return max(lo, 0), min(hi, limit)


def forehead_rect(
    box: FaceBox, spec: ForeheadSpec, width: int, height: int, frame_index: int = 0
) -> RoiMask:
    """Forehead mask as a fractional sub-rectangle of the face box.

    Quantization matches ``rasterize_polygon`` exactly: a pixel is covered
    iff its center lies inside the sub-rectangle, so this path equals
    rasterizing the rectangle's four corners. Out-of-frame parts are clipped.
    """
    xa = (box.x + spec.left_frac * box.w) * width
    xb = (box.x + spec.right_frac * box.w) * width
    ya = (box.y + spec.top_frac * box.h) * height
    yb = (box.y + spec.bottom_frac * box.h) * height
    c0, c1 = _span(xa, xb, width)
    r0, r1 = _span(ya, yb, height)
    if c0 >= c1 or r0 >= r1:
        raise EmptyRoiError(frame_index, "face box sub-rectangle covers no pixel centers")
    runs = tuple((r, c0, c1) for r in range(r0, r1))
    return RoiMask(frame_index=frame_index, runs=runs)


def rasterize_polygon(
    vertices, width: int, height: int, frame_index: int = 0
) -> RoiMask:
    """Rasterize pixel-space vertices to a mask (may be empty).

    Even-odd interior test at pixel centers with half-open edges, so shared
    edges between adjacent polygons never double-count a pixel.
    """
    if len(vertices) < 3:
        raise GeometryError("polygon needs at least 3 vertices")
    xs = [float(x) for x, _ in vertices]
    ys = [float(y) for _, y in vertices]
    if not all(map(math.isfinite, xs)) or not all(map(math.isfinite, ys)):
        raise GeometryError("polygon vertices must be finite")
    runs = _kernels.polygon_runs(xs, ys, width, height)
    return RoiMask(frame_index=frame_index, runs=tuple(runs))


def forehead_polygon(
    landmarks: LandmarkSet, spec: ForeheadSpec, width: int, height: int, frame_index: int = 0
) -> RoiMask:
    """Forehead mask from the configured landmark polygon."""
    bad = [i for i in spec.polygon_indices if i >= landmarks.count]
    if bad:
        raise GeometryError(
            f"polygon index {bad[0]} out of range for {landmarks.count} landmarks"
        )
    vertices = [
        (landmarks.points[i][0] * width, landmarks.points[i][1] * height)
        for i in spec.polygon_indices
    ]
    mask = rasterize_polygon(vertices, width, height, frame_index=frame_index)
    if not mask.runs:
        raise EmptyRoiError(frame_index, "landmark polygon covers no pixel centers")
    return mask


def _clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else (1.0 if v > 1.0 else v)


def _parse_box(raw, line_no: int) -> FaceBox | None:
    if raw is None:
        return None
    if not (isinstance(raw, (list, tuple)) and len(raw) == 4):
        raise GeometryError(f"sidecar line {line_no}: bbox must be [x,y,w,h] or null")
    try:
        x, y, w, h = (float(v) for v in raw)
    except (TypeError, ValueError):
        raise GeometryError(f"sidecar line {line_no}: bbox values must be numbers") from None
    if not all(map(math.isfinite, (x, y, w, h))):
        raise GeometryError(f"sidecar line {line_no}: bbox values must be finite")
    if x >= 0.0 and y >= 0.0 and x + w <= 1.0 and y + h <= 1.0 and w > 0.0 and h > 0.0:
        return FaceBox(x=x, y=y, w=w, h=h)
    # Detectors may overshoot the frame edge; clamp to the unit square and
    # drop boxes that collapse to nothing.
    x0, y0 = _clamp01(x), _clamp01(y)
    x1, y1 = _clamp01(x + w), _clamp01(y + h)
    if x1 - x0 <= 0.0 or y1 - y0 <= 0.0:
        return None
    return FaceBox(x=x0, y=y0, w=x1 - x0, h=y1 - y0)


def _parse_landmarks(raw, line_no: int) -> LandmarkSet | None:
    if raw is None:
        return None
    if not isinstance(raw, (list, tuple)) or len(raw) == 0:
        raise GeometryError(f"sidecar line {line_no}: landmarks must be [[x,y],...] or null")
    pts = []
    for p in raw:
        if not (isinstance(p, (list, tuple)) and len(p) == 2):
            raise GeometryError(f"sidecar line {line_no}: landmark must be an [x,y] pair")
        try:
            x, y = float(p[0]), float(p[1])
        except (TypeError, ValueError):
            raise GeometryError(f"sidecar line {line_no}: landmark values must be numbers") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise GeometryError(f"sidecar line {line_no}: landmark values must be finite")
        pts.append((_clamp01(x), _clamp01(y)))
    return LandmarkSet(points=tuple(pts))


def load_geometry_sidecar(path: str, frame_count: int | None = None) -> list[FaceGeometry]:
    """Parse the newline-delimited JSON geometry sidecar.

    Records must cover frame indices 0..n-1 exactly once, in order. When
    ``frame_count`` is given the record count must match it.
    """
    if not os.path.isfile(path):
        raise GeometryError(f"geometry sidecar not found: {path}")
    records: list[FaceGeometry] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise GeometryError(f"sidecar line {line_no}: invalid JSON: {exc}") from exc
            if not isinstance(doc, dict) or "frame" not in doc:
                raise GeometryError(f"sidecar line {line_no}: record must have a 'frame' field")
            idx = doc["frame"]
            if idx != len(records):
                raise GeometryError(
                    f"sidecar line {line_no}: frame {idx} out of order (expected {len(records)})"
                )
            records.append(
                FaceGeometry(
                    frame_index=idx,
                    box=_parse_box(doc.get("bbox"), line_no),
                    landmarks=_parse_landmarks(doc.get("landmarks"), line_no),
                )
            )
    if frame_count is not None and len(records) != frame_count:
        raise GeometryError(
            f"geometry/frame count mismatch: sidecar has {len(records)} records, "
            f"clip has {frame_count} frames"
        )
    return records


def write_geometry_sidecar(records, path: str) -> None:
    """Write sidecar records with a fixed field order (stable bytes)."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            bbox = None if rec.box is None else [rec.box.x, rec.box.y, rec.box.w, rec.box.h]
            lms = None if rec.landmarks is None else [[x, y] for x, y in rec.landmarks.points]
            fh.write(json.dumps({"frame": rec.frame_index, "bbox": bbox, "landmarks": lms}))
            fh.write("\n")


def _spec_from_doc(doc: dict) -> ForeheadSpec:
    if not isinstance(doc, dict):
        raise GeometryError("forehead spec must be a JSON object")
    fracs = doc.get("bbox_fracs")
    indices = doc.get("polygon_indices")
    if not (isinstance(fracs, list) and len(fracs) == 4):
        raise GeometryError("forehead spec needs bbox_fracs: [left,right,top,bottom]")
    if not isinstance(indices, list):
        raise GeometryError("forehead spec needs polygon_indices: [int,...]")
    left, right, top, bottom = (float(v) for v in fracs)
    return ForeheadSpec(
        left_frac=left,
        right_frac=right,
        top_frac=top,
        bottom_frac=bottom,
        polygon_indices=tuple(int(i) for i in indices),
    )


def load_forehead_spec(path: str) -> ForeheadSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise GeometryError(f"cannot read forehead spec {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise GeometryError(f"forehead spec is not valid JSON: {path}: {exc}") from exc
    return _spec_from_doc(doc)


@lru_cache(maxsize=1)
def default_forehead_spec() -> ForeheadSpec:
    """The shipped default: central upper band of the face box, and the
    4-point forehead polygon of the synthetic landmark template."""
    text = resources.files("rppgkit").joinpath("data/forehead_default.json").read_text()
    return _spec_from_doc(json.loads(text))
