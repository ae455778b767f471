import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import rasterize_oracle
from rppgkit.errors import EmptyRoiError, GeometryError
from rppgkit.roi import (
    FaceBox,
    ForeheadSpec,
    LandmarkSet,
    default_forehead_spec,
    forehead_polygon,
    forehead_rect,
    load_forehead_spec,
    load_geometry_sidecar,
    rasterize_polygon,
)

FULL_BOX = FaceBox(x=0.0, y=0.0, w=1.0, h=1.0)

# Computed with the brute-force point-in-polygon oracle over all pixel
# centers; pixels exactly on the hypotenuse resolve by the half-open rule.
TRIANGLE_8x8 = frozenset(
    (c, r) for c in range(7) for r in range(7 - c)
)

BOWTIE_4x4 = frozenset(
    [(0, 1), (0, 2), (2, 1), (2, 2), (3, 0), (3, 1), (3, 2), (3, 3)]
)


def test_rect_fractions_select_band():
    spec = ForeheadSpec(0.25, 0.75, 0.10, 0.30)
    mask = forehead_rect(FULL_BOX, spec, 100, 100)
    assert mask.pixel_count == 50 * 20
    cols = {c for c, _ in mask.pixels}
    rows = {r for _, r in mask.pixels}
    assert cols == set(range(25, 75))
    assert rows == set(range(10, 30))


def test_rect_identity_fractions_select_whole_box():
    spec = ForeheadSpec(0.0, 1.0, 0.0, 1.0)
    mask = forehead_rect(FaceBox(0.5, 0.5, 0.5, 0.5), spec, 10, 10)
    assert mask.pixels == {(c, r) for c in range(5, 10) for r in range(5, 10)}
    assert mask.pixel_count == 25


def test_rect_degenerate_box_raises_with_frame_index():
    spec = ForeheadSpec(0.25, 0.75, 0.10, 0.30)
    with pytest.raises(EmptyRoiError, match="frame 17"):
        forehead_rect(FaceBox(0.5, 0.5, 0.001, 0.001), spec, 10, 10, frame_index=17)


def test_polygon_full_frame_square():
    landmarks = LandmarkSet(points=((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)))
    spec = ForeheadSpec(polygon_indices=(0, 1, 2, 3))
    mask = forehead_polygon(landmarks, spec, 2, 2)
    assert mask.pixels == {(0, 0), (1, 0), (0, 1), (1, 1)}


def test_polygon_triangle_matches_oracle():
    landmarks = LandmarkSet(points=((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)))
    spec = ForeheadSpec(polygon_indices=(0, 1, 2))
    mask = forehead_polygon(landmarks, spec, 8, 8)
    assert mask.pixels == TRIANGLE_8x8
    assert mask.pixels == rasterize_oracle([(0, 0), (8, 0), (0, 8)], 8, 8)


def test_polygon_index_out_of_range():
    points = tuple((i / 1000, i / 1000) for i in range(468))
    spec = ForeheadSpec(polygon_indices=(0, 1, 468))
    with pytest.raises(GeometryError, match="468"):
        forehead_polygon(LandmarkSet(points=points), spec, 64, 64)


def test_polygon_degenerate_raises_empty_roi():
    landmarks = LandmarkSet(points=((0.5, 0.5), (0.5, 0.5), (0.5, 0.5)))
    spec = ForeheadSpec(polygon_indices=(0, 1, 2))
    with pytest.raises(EmptyRoiError):
        forehead_polygon(landmarks, spec, 10, 10)


def test_spec_requires_three_polygon_indices():
    with pytest.raises(GeometryError, match="at least 3"):
        ForeheadSpec(polygon_indices=(0, 1))


def test_spec_validates_fraction_order():
    with pytest.raises(GeometryError, match="left_frac"):
        ForeheadSpec(left_frac=0.8, right_frac=0.2)
    with pytest.raises(GeometryError, match="top_frac"):
        ForeheadSpec(top_frac=0.5, bottom_frac=0.5)


def test_rasterize_rejects_short_vertex_list():
    with pytest.raises(GeometryError, match="3 vertices"):
        rasterize_polygon([(0, 0), (1, 1)], 4, 4)


def test_rasterize_bowtie_matches_oracle():
    verts = [(0.0, 0.0), (4.0, 4.0), (4.0, 0.0), (0.0, 4.0)]
    mask = rasterize_polygon(verts, 4, 4)
    assert mask.pixels == BOWTIE_4x4
    assert mask.pixels == rasterize_oracle(verts, 4, 4)


def test_rasterize_outside_frame_is_empty():
    mask = rasterize_polygon([(10.0, 10.0), (20.0, 10.0), (15.0, 20.0)], 8, 8)
    assert mask.pixel_count == 0
    assert mask.runs == ()


def test_rasterize_random_polygons_match_oracle():
    rng = random.Random(1234)
    for _ in range(60):
        n = rng.randint(3, 9)
        verts = [(rng.uniform(-4, 36), rng.uniform(-4, 36)) for _ in range(n)]
        mask = rasterize_polygon(verts, 32, 32)
        assert mask.pixels == rasterize_oracle(verts, 32, 32)


def test_rect_equals_rasterized_corners_exactly():
    spec = ForeheadSpec(0.25, 0.75, 0.10, 0.30)
    for box in (FULL_BOX, FaceBox(0.13, 0.27, 0.55, 0.41), FaceBox(0.5, 0.5, 0.5, 0.5)):
        rect = forehead_rect(box, spec, 97, 61)
        xa = (box.x + spec.left_frac * box.w) * 97
        xb = (box.x + spec.right_frac * box.w) * 97
        ya = (box.y + spec.top_frac * box.h) * 61
        yb = (box.y + spec.bottom_frac * box.h) * 61
        poly = rasterize_polygon([(xa, ya), (xb, ya), (xb, yb), (xa, yb)], 97, 61)
        assert rect.pixels == poly.pixels


@settings(max_examples=60, deadline=None)
@given(
    x=st.floats(0, 0.9), y=st.floats(0, 0.9),
    w=st.floats(0.05, 1.0), h=st.floats(0.05, 1.0),
    width=st.integers(4, 60), height=st.integers(4, 60),
)
def test_consistency_rect_vs_polygon_property(x, y, w, h, width, height):
    box = FaceBox(x=x, y=y, w=min(w, 1 - x), h=min(h, 1 - y))
    spec = ForeheadSpec(0.2, 0.8, 0.1, 0.4)
    xa = (box.x + spec.left_frac * box.w) * width
    xb = (box.x + spec.right_frac * box.w) * width
    ya = (box.y + spec.top_frac * box.h) * height
    yb = (box.y + spec.bottom_frac * box.h) * height
    poly = rasterize_polygon([(xa, ya), (xb, ya), (xb, yb), (xa, yb)], width, height)
    try:
        rect = forehead_rect(box, spec, width, height)
    except EmptyRoiError:
        assert poly.pixel_count == 0
        return
    assert rect.pixels == poly.pixels


@settings(max_examples=80, deadline=None)
@given(
    x=st.floats(-0.5, 1.5), y=st.floats(-0.5, 1.5),
    w=st.floats(0.01, 2.0), h=st.floats(0.01, 2.0),
)
def test_rect_clamps_arbitrary_boxes(x, y, w, h):
    spec = ForeheadSpec(0.25, 0.75, 0.10, 0.30)
    try:
        mask = forehead_rect(FaceBox(x=x, y=y, w=w, h=h), spec, 20, 20)
    except EmptyRoiError:
        return
    assert mask.bounds_ok(20, 20)


@settings(max_examples=40, deadline=None)
@given(
    verts=st.lists(
        st.tuples(st.floats(-50, 50), st.floats(-50, 50)), min_size=3, max_size=8
    )
)
def test_rasterize_clamps_arbitrary_polygons(verts):
    mask = rasterize_polygon(verts, 16, 16)
    assert mask.bounds_ok(16, 16)


@settings(max_examples=40, deadline=None)
@given(bottom=st.floats(0.31, 1.0), extra=st.floats(0.0, 0.5))
def test_growing_bottom_frac_is_monotone(bottom, extra):
    bigger = min(bottom + extra, 1.0)
    small = forehead_rect(FULL_BOX, ForeheadSpec(0.25, 0.75, 0.10, bottom), 33, 47)
    large = forehead_rect(FULL_BOX, ForeheadSpec(0.25, 0.75, 0.10, bigger), 33, 47)
    assert small.pixels <= large.pixels


def test_rasterize_deterministic():
    verts = [(1.2, 0.7), (14.9, 3.1), (7.4, 13.8)]
    a = rasterize_polygon(verts, 16, 16)
    b = rasterize_polygon(verts, 16, 16)
    assert a.runs == b.runs


def _write_sidecar(tmp_path, lines):
    path = tmp_path / "geometry.ndjson"
    path.write_text("\n".join(json.dumps(rec) for rec in lines) + "\n")
    return str(path)


def test_sidecar_parses_boxes_and_landmarks(tmp_path):
    path = _write_sidecar(
        tmp_path,
        [
            {"frame": 0, "bbox": [0.1, 0.2, 0.3, 0.4], "landmarks": [[0.5, 0.5], [0.6, 0.6], [0.7, 0.5]]},
            {"frame": 1, "bbox": None, "landmarks": None},
        ],
    )
    records = load_geometry_sidecar(path, frame_count=2)
    assert records[0].box == FaceBox(0.1, 0.2, 0.3, 0.4)
    assert records[0].landmarks.count == 3
    assert records[1].box is None and records[1].landmarks is None


def test_sidecar_clamps_overshooting_box(tmp_path):
    path = _write_sidecar(tmp_path, [{"frame": 0, "bbox": [-0.1, 0.9, 0.5, 0.4], "landmarks": None},
                                     {"frame": 1, "bbox": None, "landmarks": None}])
    rec = load_geometry_sidecar(path)[0]
    assert rec.box == FaceBox(0.0, 0.9, 0.4, pytest.approx(0.1))


def test_sidecar_out_of_order_rejected(tmp_path):
    path = _write_sidecar(tmp_path, [{"frame": 1, "bbox": None, "landmarks": None}])
    with pytest.raises(GeometryError, match="out of order"):
        load_geometry_sidecar(path)


def test_sidecar_count_mismatch(tmp_path):
    path = _write_sidecar(tmp_path, [{"frame": 0, "bbox": None, "landmarks": None}])
    with pytest.raises(GeometryError, match="count mismatch"):
        load_geometry_sidecar(path, frame_count=2)


def test_sidecar_malformed_bbox(tmp_path):
    path = _write_sidecar(tmp_path, [{"frame": 0, "bbox": [0.1, 0.2], "landmarks": None}])
    with pytest.raises(GeometryError, match="bbox"):
        load_geometry_sidecar(path)


def test_default_spec_loads_from_package_data():
    spec = default_forehead_spec()
    assert (spec.left_frac, spec.right_frac) == (0.25, 0.75)
    assert (spec.top_frac, spec.bottom_frac) == (0.10, 0.30)
    assert spec.polygon_indices == (0, 1, 2, 3)


def test_spec_file_round_trip(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"bbox_fracs": [0.3, 0.7, 0.05, 0.25], "polygon_indices": [2, 3, 4]}))
    spec = load_forehead_spec(str(path))
    assert spec.bottom_frac == 0.25
    assert spec.polygon_indices == (2, 3, 4)
