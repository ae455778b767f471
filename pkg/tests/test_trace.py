import random

import pytest

from oracles import green_sum_oracle
from rppgkit.errors import CoverageError, EmptyRoiError, GeometryError
from rppgkit.ingest import Frame
from rppgkit.roi import FaceBox, FaceGeometry, ForeheadSpec, LandmarkSet, RoiMask, forehead_rect
from rppgkit.synth import SynthConfig, generate_clip
from rppgkit.trace import GreenTrace, extract_trace, spatial_mean_green, trace_csv


def _uniform_frame(width, height, g):
    return Frame(index=0, pixels=bytes([0, g, 0]) * (width * height), width=width, height=height)


def _mask(runs, frame_index=0):
    return RoiMask(frame_index=frame_index, runs=tuple(runs))


def test_uniform_frame_mean_is_constant():
    frame = _uniform_frame(8, 8, 100)
    mask = _mask([(2, 1, 5), (3, 0, 8)])
    assert spatial_mean_green(frame, mask) == 100.0


def test_two_pixel_mean():
    pixels = bytes([0, 0, 0, 0, 255, 0])
    frame = Frame(index=0, pixels=pixels, width=2, height=1)
    assert spatial_mean_green(frame, _mask([(0, 0, 2)])) == 127.5


def test_random_frames_match_bruteforce_oracle_exactly():
    rng = random.Random(2024)
    for _ in range(100):
        width, height = 16, 16
        pixels = bytes(rng.randrange(256) for _ in range(width * height * 3))
        frame = Frame(index=0, pixels=pixels, width=width, height=height)
        cells = rng.sample([(c, r) for c in range(width) for r in range(height)], 60)
        runs = tuple((r, c, c + 1) for c, r in sorted(cells, key=lambda p: (p[1], p[0])))
        mask = _mask(runs)
        expected = green_sum_oracle(pixels, width, cells) / 60
        assert spatial_mean_green(frame, mask) == expected


def test_mask_permutation_invariance():
    rng = random.Random(5)
    pixels = bytes(rng.randrange(256) for _ in range(12 * 12 * 3))
    frame = Frame(index=0, pixels=pixels, width=12, height=12)
    runs = [(r, 2, 9) for r in range(3, 8)]
    forward = spatial_mean_green(frame, _mask(runs))
    backward = spatial_mean_green(frame, _mask(reversed(runs)))
    assert forward == backward


def test_empty_mask_rejected():
    frame = _uniform_frame(4, 4, 10)
    with pytest.raises(EmptyRoiError):
        spatial_mean_green(frame, _mask([]))


def test_out_of_bounds_mask_rejected():
    frame = _uniform_frame(4, 4, 10)
    with pytest.raises(GeometryError, match="bounds"):
        spatial_mean_green(frame, _mask([(3, 2, 6)]))


@pytest.fixture(scope="module")
def synth_clip(tmp_path_factory):
    out = tmp_path_factory.mktemp("clip")
    config = SynthConfig(bpm=72.0, seed=21)
    manifest = generate_clip(config, str(out))
    from rppgkit.roi import load_geometry_sidecar

    geometry = load_geometry_sidecar(str(out / "geometry.ndjson"), manifest.frame_count)
    return manifest, geometry, config


def test_extract_trace_full_coverage(synth_clip):
    manifest, geometry, _ = synth_clip
    trace = extract_trace(manifest, geometry, "bbox", ForeheadSpec())
    assert len(trace.samples) == manifest.frame_count
    assert trace.skipped_frames == ()
    assert all(0.0 <= s <= 255.0 for s in trace.samples)
    assert trace.fps == manifest.fps


def test_extract_trace_single_gap_is_skipped(synth_clip):
    manifest, geometry, _ = synth_clip
    patched = list(geometry)
    patched[7] = FaceGeometry(frame_index=7, box=None, landmarks=geometry[7].landmarks)
    trace = extract_trace(manifest, patched, "bbox", ForeheadSpec())
    assert len(trace.samples) == manifest.frame_count - 1
    assert trace.skipped_frames == (7,)


def test_extract_trace_insufficient_coverage(synth_clip):
    manifest, geometry, _ = synth_clip
    cut = int(manifest.frame_count * 0.25)
    patched = [
        FaceGeometry(frame_index=g.frame_index, box=None, landmarks=None)
        if g.frame_index < cut
        else g
        for g in geometry
    ]
    with pytest.raises(CoverageError, match="insufficient geometry coverage"):
        extract_trace(manifest, patched, "bbox", ForeheadSpec())


def test_extract_trace_parallel_matches_sequential(synth_clip):
    manifest, geometry, _ = synth_clip
    spec = ForeheadSpec()
    seq = extract_trace(manifest, geometry, "landmark", spec, workers=1)
    par = extract_trace(manifest, geometry, "landmark", spec, workers=4)
    assert seq.samples == par.samples
    assert seq.skipped_frames == par.skipped_frames


def test_extract_trace_matches_straight_line_composition(synth_clip):
    manifest, geometry, _ = synth_clip
    spec = ForeheadSpec()
    trace = extract_trace(manifest, geometry, "bbox", spec)
    from rppgkit.ingest import load_frame

    reference = []
    for geom in geometry:
        mask = forehead_rect(geom.box, spec, manifest.width, manifest.height,
                             frame_index=geom.frame_index)
        reference.append(spatial_mean_green(load_frame(manifest, geom.frame_index), mask))
    assert list(trace.samples) == reference


def test_extract_trace_count_mismatch(synth_clip):
    manifest, geometry, _ = synth_clip
    with pytest.raises(GeometryError, match="count mismatch"):
        extract_trace(manifest, geometry[:-1], "bbox", ForeheadSpec())


def test_extract_trace_rejects_unknown_method(synth_clip):
    manifest, geometry, _ = synth_clip
    with pytest.raises(Exception, match="method"):
        extract_trace(manifest, geometry, "chrom", ForeheadSpec())


def test_trace_csv_layout():
    trace = GreenTrace(samples=(120.0, 121.5), fps=30.0, skipped_frames=(1,))
    text = trace_csv(trace)
    lines = text.strip().split("\n")
    assert lines[0] == "frame,t_seconds,green_mean"
    assert lines[1] == "0,0.000000,120.000000"
    # frame 1 was skipped; the second retained frame is index 2
    assert lines[2] == "2,0.066667,121.500000"


def test_trace_frame_bookkeeping():
    trace = GreenTrace(samples=(1.0, 2.0, 3.0), fps=10.0, skipped_frames=(1, 3))
    assert trace.frame_count == 5
    assert trace.retained_indices() == [0, 2, 4]
