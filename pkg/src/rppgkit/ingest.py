"""Frame-sequence ingestion: clip manifests, PPM and raw RGB24 decoding.

Two on-disk layouts are supported, both trivially decodable:

* ``ppm_sequence`` -- one binary PPM (P6, maxval 255) per frame, file names
  produced from a ``{index}`` pattern zero-padded to 6 digits.
* ``raw_rgb24`` -- a single headerless file holding all frames concatenated
  in index order, rows top-to-bottom, channels R,G,B.

The manifest is the single source of dimensional truth; PPM headers are
cross-checked against it.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .errors import FrameReadError, ManifestError

PIXEL_FORMATS = ("ppm_sequence", "raw_rgb24")


@dataclass(frozen=True)
class ClipManifest:
    width: int
    height: int
    fps: float
    frame_count: int
    pixel_format: str
    source: str
    base_dir: str = field(default=".", compare=False)

    @property
    def frame_bytes(self) -> int:
        return self.width * self.height * 3

    @property
    def duration_s(self) -> float:
        return self.frame_count / self.fps

    def frame_path(self, index: int) -> str:
        """Absolute path of the file backing frame ``index``."""
        if self.pixel_format == "ppm_sequence":
            name = self.source.replace("{index}", f"{index:06d}")
        else:
            name = self.source
        return os.path.join(self.base_dir, name)


@dataclass(frozen=True)
class Frame:
    index: int
    pixels: bytes  # row-major RGB, 8 bits per channel
    width: int
    height: int

    def __post_init__(self):
        expected = self.width * self.height * 3
        if len(self.pixels) != expected:
            raise FrameReadError(
                f"frame {self.index}: pixel buffer is {len(self.pixels)} bytes, "
                f"expected {self.width}x{self.height}x3 = {expected}"
            )

    def green(self) -> bytes:
        """The green plane, one byte per pixel, row-major."""
        return self.pixels[1::3]


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ManifestError(message)


def validate_manifest(doc: dict, base_dir: str = ".") -> ClipManifest:
    """Check manifest fields and invariants; unknown keys are ignored."""
    for key in ("width", "height", "fps", "frame_count", "pixel_format", "source"):
        _require(key in doc, f"manifest is missing required field '{key}'")
    width, height = doc["width"], doc["height"]
    fps, frame_count = doc["fps"], doc["frame_count"]
    _require(isinstance(width, int) and not isinstance(width, bool), "width must be an integer")
    _require(isinstance(height, int) and not isinstance(height, bool), "height must be an integer")
    _require(isinstance(frame_count, int) and not isinstance(frame_count, bool), "frame_count must be an integer")
    _require(isinstance(fps, (int, float)) and not isinstance(fps, bool), "fps must be a number")
    _require(width >= 1, "width must be positive")
    _require(height >= 1, "height must be positive")
    _require(fps > 0, "fps must be positive")
    _require(frame_count >= 2, "need at least 2 frames")
    _require(doc["pixel_format"] in PIXEL_FORMATS, f"pixel_format must be one of {PIXEL_FORMATS}")
    _require(isinstance(doc["source"], str) and doc["source"] != "", "source must be a non-empty path")
    if doc["pixel_format"] == "ppm_sequence":
        _require("{index}" in doc["source"], "source pattern must contain '{index}' for ppm_sequence")
    return ClipManifest(
        width=width,
        height=height,
        fps=float(fps),
        frame_count=frame_count,
        pixel_format=doc["pixel_format"],
        source=doc["source"],
        base_dir=base_dir,
    )


def load_manifest(path: str) -> ClipManifest:
    """Read and validate a ``manifest.json``; source paths resolve relative to it."""
    if not os.path.isfile(path):
        raise ManifestError(f"manifest not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ManifestError(f"manifest is not valid JSON: {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ManifestError("manifest must be a JSON object")
    return validate_manifest(doc, base_dir=os.path.dirname(os.path.abspath(path)))


def _parse_ppm_header(data: bytes, path: str) -> tuple[int, int, int, int]:
    """Return (width, height, maxval, payload_offset) of a binary PPM.

    Accepts ``#`` comments and arbitrary whitespace between header tokens;
    exactly one whitespace byte separates the maxval token from the payload.
    """
    if not data.startswith(b"P6"):
        raise FrameReadError(f"{path}: not a binary PPM (missing P6 magic)")
    pos = 2
    tokens: list[int] = []
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FrameReadError(f"{path}: truncated PPM header")
        try:
            tokens.append(int(data[start:pos]))
        except ValueError:
            raise FrameReadError(f"{path}: bad PPM header token {data[start:pos]!r}") from None
    if pos >= len(data):
        raise FrameReadError(f"{path}: truncated PPM header")
    pos += 1  # the single whitespace after maxval
    return tokens[0], tokens[1], tokens[2], pos


def decode_ppm(data: bytes, path: str = "<bytes>") -> tuple[int, int, bytes]:
    """Decode binary PPM bytes to (width, height, rgb_payload)."""
    width, height, maxval, offset = _parse_ppm_header(data, path)
    if maxval != 255:
        raise FrameReadError(f"{path}: unsupported PPM maxval {maxval} (only 255)")
    need = width * height * 3
    payload = data[offset : offset + need]
    if len(payload) < need:
        raise FrameReadError(f"{path}: PPM payload has {len(payload)} bytes, expected {need}")
    return width, height, payload


def encode_ppm(frame: Frame) -> bytes:
    """Canonical binary PPM encoding: ``P6\\n<w> <h>\\n255\\n`` then payload."""
    header = f"P6\n{frame.width} {frame.height}\n255\n".encode("ascii")
    return header + frame.pixels


def load_frame(manifest: ClipManifest, index: int) -> Frame:
    """Decode frame ``index`` from the clip's backing file(s)."""
    if not 0 <= index < manifest.frame_count:
        raise FrameReadError(
            f"frame index {index} out of range [0, {manifest.frame_count})"
        )
    path = manifest.frame_path(index)
    if manifest.pixel_format == "ppm_sequence":
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise FrameReadError(f"cannot read frame file {path}: {exc}") from exc
        width, height, payload = decode_ppm(data, path)
        if (width, height) != (manifest.width, manifest.height):
            raise FrameReadError(
                f"{path}: PPM header says {width}x{height}, manifest says "
                f"{manifest.width}x{manifest.height}"
            )
        return Frame(index=index, pixels=payload, width=width, height=height)

    # raw_rgb24: one flat file, frames at fixed offsets
    stride = manifest.frame_bytes
    offset = index * stride
    try:
        with open(path, "rb") as fh:
            fh.seek(offset)
            payload = fh.read(stride)
    except OSError as exc:
        raise FrameReadError(f"cannot read frame file {path}: {exc}") from exc
    if len(payload) < stride:
        raise FrameReadError(
            f"{path}: truncated at frame {index}: need {offset + stride} bytes total"
        )
    return Frame(index=index, pixels=payload, width=manifest.width, height=manifest.height)


def write_frame(frame: Frame, pixel_format: str) -> bytes:
    """Encode a frame as it would appear on disk for the given format.

    ``ppm_sequence`` yields a canonical P6 file; ``raw_rgb24`` yields the
    frame's slice of the concatenated raw file. Loading toolkit-written bytes
    and re-encoding reproduces them exactly.
    """
    if pixel_format == "ppm_sequence":
        return encode_ppm(frame)
    if pixel_format == "raw_rgb24":
        return frame.pixels
    raise ManifestError(f"pixel_format must be one of {PIXEL_FORMATS}")


def write_manifest(manifest: ClipManifest, path: str) -> None:
    """Serialize a manifest with fixed key order (stable bytes for a config)."""
    doc = {
        "width": manifest.width,
        "height": manifest.height,
        "fps": manifest.fps,
        "frame_count": manifest.frame_count,
        "pixel_format": manifest.pixel_format,
        "source": manifest.source,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
