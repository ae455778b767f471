import json

import pytest

from rppgkit.errors import FrameReadError, ManifestError
from rppgkit.ingest import (
    Frame,
    decode_ppm,
    encode_ppm,
    load_frame,
    load_manifest,
    write_frame,
)


def test_load_manifest_valid(write_manifest, tmp_path):
    path = write_manifest(
        {"width": 1280, "height": 720, "fps": 30.0, "frame_count": 300,
         "pixel_format": "ppm_sequence", "source": "frames/{index}.ppm"}
    )
    m = load_manifest(path)
    assert (m.width, m.height, m.fps, m.frame_count) == (1280, 720, 30.0, 300)
    assert m.base_dir == str(tmp_path)
    assert m.frame_path(7).endswith("frames/000007.ppm")


@pytest.mark.parametrize(
    "patch,fragment",
    [
        ({"fps": 0}, "fps must be positive"),
        ({"fps": -1.0}, "fps must be positive"),
        ({"frame_count": 1}, "need at least 2 frames"),
        ({"width": 0}, "width must be positive"),
        ({"height": -3}, "height must be positive"),
        ({"pixel_format": "mp4"}, "pixel_format"),
        ({"source": ""}, "source"),
        ({"width": 2.5}, "width must be an integer"),
        ({"fps": True}, "fps must be a number"),
    ],
)
def test_load_manifest_invalid_fields(write_manifest, patch, fragment):
    path = write_manifest(patch)
    with pytest.raises(ManifestError, match=fragment):
        load_manifest(path)


def test_load_manifest_missing_field(write_manifest, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"width": 4}))
    with pytest.raises(ManifestError, match="missing required field"):
        load_manifest(str(path))


def test_load_manifest_missing_file(tmp_path):
    with pytest.raises(ManifestError, match="not found"):
        load_manifest(str(tmp_path / "nope.json"))


def test_load_manifest_bad_json(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("{not json")
    with pytest.raises(ManifestError, match="not valid JSON"):
        load_manifest(str(path))


def test_ppm_pattern_requires_index_placeholder(write_manifest):
    path = write_manifest({"pixel_format": "ppm_sequence", "source": "frames/all.ppm"})
    with pytest.raises(ManifestError, match="{index}"):
        load_manifest(path)


def _raw_clip(tmp_path, width=2, height=2, frames=2):
    payload = bytes(range(width * height * 3 * frames))
    (tmp_path / "frames.rgb24").write_bytes(payload)
    doc = {
        "width": width,
        "height": height,
        "fps": 10.0,
        "frame_count": frames,
        "pixel_format": "raw_rgb24",
        "source": "frames.rgb24",
    }
    mpath = tmp_path / "manifest.json"
    mpath.write_text(json.dumps(doc))
    return load_manifest(str(mpath)), payload


def test_load_frame_raw_offsets(tmp_path):
    manifest, payload = _raw_clip(tmp_path)
    frame = load_frame(manifest, 1)
    assert frame.pixels == payload[12:24]
    assert (frame.width, frame.height, frame.index) == (2, 2, 1)


def test_load_frame_order_independent(tmp_path):
    manifest, _ = _raw_clip(tmp_path)
    direct = load_frame(manifest, 0).pixels
    load_frame(manifest, 1)
    assert load_frame(manifest, 0).pixels == direct


@pytest.mark.parametrize("index", [-1, 2, 100])
def test_load_frame_index_out_of_range(tmp_path, index):
    manifest, _ = _raw_clip(tmp_path)
    with pytest.raises(FrameReadError, match="out of range"):
        load_frame(manifest, index)


def test_load_frame_truncated_raw(tmp_path):
    manifest, payload = _raw_clip(tmp_path)
    (tmp_path / "frames.rgb24").write_bytes(payload[:-5])
    with pytest.raises(FrameReadError, match="truncated"):
        load_frame(manifest, 1)


def test_decode_ppm_minimal():
    data = b"P6 2 2 255\n" + bytes(range(12))
    width, height, payload = decode_ppm(data)
    assert (width, height) == (2, 2)
    assert payload == bytes(range(12))


def test_decode_ppm_with_comments():
    data = b"P6\n# camera rig A\n2 1\n# exposure lock\n255\n" + bytes(6)
    width, height, payload = decode_ppm(data)
    assert (width, height) == (2, 1)
    assert payload == bytes(6)


def test_decode_ppm_rejects_other_maxval():
    with pytest.raises(FrameReadError, match="maxval"):
        decode_ppm(b"P6 2 2 65535\n" + bytes(24))


def test_decode_ppm_rejects_short_payload():
    with pytest.raises(FrameReadError, match="payload"):
        decode_ppm(b"P6 2 2 255\n" + bytes(5))


def test_decode_ppm_rejects_bad_magic():
    with pytest.raises(FrameReadError, match="P6"):
        decode_ppm(b"P3 2 2 255\n" + bytes(12))


def test_load_frame_ppm_header_mismatch(tmp_path):
    frames = tmp_path / "frames"
    frames.mkdir()
    frame = Frame(index=0, pixels=bytes(27), width=3, height=3)
    (frames / "000000.ppm").write_bytes(encode_ppm(frame))
    (frames / "000001.ppm").write_bytes(encode_ppm(frame))
    doc = {
        "width": 2,
        "height": 3,
        "fps": 10.0,
        "frame_count": 2,
        "pixel_format": "ppm_sequence",
        "source": "frames/{index}.ppm",
    }
    mpath = tmp_path / "manifest.json"
    mpath.write_text(json.dumps(doc))
    with pytest.raises(FrameReadError, match="manifest says"):
        load_frame(load_manifest(str(mpath)), 0)


@pytest.mark.parametrize("pixel_format", ["ppm_sequence", "raw_rgb24"])
def test_round_trip_byte_exact(tmp_path, pixel_format):
    frame = Frame(index=0, pixels=bytes(range(48)) + bytes(range(48)), width=4, height=8)
    encoded = write_frame(frame, pixel_format)
    if pixel_format == "ppm_sequence":
        width, height, payload = decode_ppm(encoded)
        decoded = Frame(index=0, pixels=payload, width=width, height=height)
    else:
        decoded = Frame(index=0, pixels=encoded, width=4, height=8)
    assert write_frame(decoded, pixel_format) == encoded
    assert decoded.pixels == frame.pixels


def test_frame_rejects_wrong_buffer_length():
    with pytest.raises(FrameReadError, match="pixel buffer"):
        Frame(index=0, pixels=bytes(10), width=2, height=2)


def test_green_plane_extraction():
    frame = Frame(index=0, pixels=bytes([1, 2, 3, 4, 5, 6]), width=2, height=1)
    assert frame.green() == bytes([2, 5])
