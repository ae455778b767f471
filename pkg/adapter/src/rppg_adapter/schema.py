"""Validators for the toolkit's input file contracts.

Kept independent of the toolkit package on purpose: the adapter promises to
emit conforming files, so it carries its own checker for that promise.
"""
from __future__ import annotations

import json
import math
import os

MANIFEST_REQUIRED = ("width", "height", "fps", "frame_count", "pixel_format", "source")


def check_manifest(path: str) -> list[str]:
    """Return a list of contract violations (empty means conforming)."""
    problems: list[str] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        return [f"manifest unreadable: {exc}"]
    for key in MANIFEST_REQUIRED:
        if key not in doc:
            problems.append(f"manifest missing {key}")
    if problems:
        return problems
    if not (isinstance(doc["width"], int) and doc["width"] >= 1):
        problems.append("width must be a positive integer")
    if not (isinstance(doc["height"], int) and doc["height"] >= 1):
        problems.append("height must be a positive integer")
    if not (isinstance(doc["fps"], (int, float)) and doc["fps"] > 0):
        problems.append("fps must be positive")
    if not (isinstance(doc["frame_count"], int) and doc["frame_count"] >= 2):
        problems.append("frame_count must be an integer >= 2")
    if doc["pixel_format"] not in ("ppm_sequence", "raw_rgb24"):
        problems.append(f"unknown pixel_format {doc['pixel_format']!r}")
    if doc["pixel_format"] == "ppm_sequence" and "{index}" not in doc["source"]:
        problems.append("ppm_sequence source must contain {index}")

    base = os.path.dirname(os.path.abspath(path))
    if doc["pixel_format"] == "ppm_sequence":
        for index in (0, doc["frame_count"] - 1):
            frame = os.path.join(base, doc["source"].replace("{index}", f"{index:06d}"))
            if not os.path.isfile(frame):
                problems.append(f"frame file missing: {frame}")
            else:
                problems.extend(_check_ppm(frame, doc["width"], doc["height"]))
    else:
        raw = os.path.join(base, doc["source"])
        need = doc["frame_count"] * doc["width"] * doc["height"] * 3
        if not os.path.isfile(raw):
            problems.append(f"raw file missing: {raw}")
        elif os.path.getsize(raw) != need:
            problems.append(f"raw file is {os.path.getsize(raw)} bytes, expected {need}")
    return problems


def _check_ppm(path: str, width: int, height: int) -> list[str]:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P6"):
        return [f"{path}: not a P6 PPM"]
    fields = data.split(maxsplit=4)
    if len(fields) < 5:
        return [f"{path}: truncated header"]
    try:
        w, h, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    except ValueError:
        return [f"{path}: malformed header"]
    problems = []
    if (w, h) != (width, height):
        problems.append(f"{path}: header {w}x{h} does not match manifest {width}x{height}")
    if maxval != 255:
        problems.append(f"{path}: maxval {maxval} (must be 255)")
    header_len = len(data) - len(fields[4])
    if len(data) - header_len < w * h * 3:
        problems.append(f"{path}: payload shorter than {w}x{h}x3")
    return problems


def check_sidecar(path: str, frame_count: int) -> list[str]:
    """Contract check for the geometry sidecar against a known frame count."""
    problems: list[str] = []
    landmark_len = None
    try:
        lines = open(path, "r", encoding="utf-8").read().strip().split("\n")
    except OSError as exc:
        return [f"sidecar unreadable: {exc}"]
    if len(lines) != frame_count:
        problems.append(f"sidecar has {len(lines)} records, clip has {frame_count} frames")
    for lineno, line in enumerate(lines):
        try:
            rec = json.loads(line)
        except json.JSONDecodeError:
            problems.append(f"line {lineno + 1}: not JSON")
            continue
        if rec.get("frame") != lineno:
            problems.append(f"line {lineno + 1}: frame index {rec.get('frame')} out of order")
        box = rec.get("bbox")
        if box is not None:
            if not (isinstance(box, list) and len(box) == 4):
                problems.append(f"line {lineno + 1}: bbox must be [x,y,w,h] or null")
            elif not all(isinstance(v, (int, float)) and math.isfinite(v) for v in box):
                problems.append(f"line {lineno + 1}: bbox values must be finite numbers")
            elif not (0 <= box[0] and 0 <= box[1] and box[0] + box[2] <= 1 + 1e-9
                      and box[1] + box[3] <= 1 + 1e-9 and box[2] > 0 and box[3] > 0):
                problems.append(f"line {lineno + 1}: bbox {box} outside the unit square")
        landmarks = rec.get("landmarks")
        if landmarks is not None:
            if not isinstance(landmarks, list) or not landmarks:
                problems.append(f"line {lineno + 1}: landmarks must be a non-empty list or null")
                continue
            if landmark_len is None:
                landmark_len = len(landmarks)
            elif len(landmarks) != landmark_len:
                problems.append(
                    f"line {lineno + 1}: landmark count {len(landmarks)} != {landmark_len}"
                )
            for point in landmarks:
                if not (isinstance(point, list) and len(point) == 2):
                    problems.append(f"line {lineno + 1}: landmark {point} is not an [x,y] pair")
                    break
                if not all(0 <= v <= 1 for v in point):
                    problems.append(f"line {lineno + 1}: landmark {point} outside [0,1]")
                    break
    return problems
