"""Shape gallery and the spec-string mini-grammar."""
import math

import numpy as np
import pytest

from mureach import (GeometryError, GraphCurve, ParametricCurve, PointCloud,
                     eval_distance, generalized_gradient, make_calpha_compact,
                     make_parabola, make_triangle_wave, shape_from_spec,
                     triangle_wave_layout, triangle_wave_probes)
from mureach.shapes import default_symmetry_axis


def test_parabola_graph():
    shape = make_parabola(2.0)
    assert isinstance(shape, GraphCurve)
    assert shape.domain == (-2.0, 2.0)
    np.testing.assert_allclose(shape.point(1.5), [1.5, 2.25])


def test_spec_grammar():
    assert isinstance(shape_from_spec("parabola:2"), GraphCurve)
    assert isinstance(shape_from_spec("calpha:0.5:8"), GraphCurve)
    assert isinstance(shape_from_spec("calphacompact:0.5:2"),
                      ParametricCurve)
    assert isinstance(shape_from_spec("trianglewave:0.5:3:0.05,0.03,0.02"),
                      ParametricCurve)
    cloud = shape_from_spec("cloud:inline", cloud_points=[[0, 0], [1, 1]])
    assert isinstance(cloud, PointCloud)


def test_spec_grammar_rejects_malformed():
    for bad in ("parabola", "parabola:x", "calpha:0.5", "nosuch:1",
                "trianglewave:0.5:3", ""):
        with pytest.raises(GeometryError):
            shape_from_spec(bad)


def test_cloud_spec_reads_csv(tmp_path):
    path = tmp_path / "pts.csv"
    path.write_text("0.0,0.0\n3.0,4.0\n")
    cloud = shape_from_spec(f"cloud:{path}")
    assert isinstance(cloud, PointCloud)
    assert eval_distance(cloud, (0.0, 1.0)) == pytest.approx(1.0)


def test_default_symmetry_axis():
    assert default_symmetry_axis("parabola:2") == ((0.0, 0.0), (0.0, 1.0))
    assert default_symmetry_axis("calpha:0.5:8") == ((0.0, 0.0), (0.0, 1.0))
    assert default_symmetry_axis("trianglewave:0.5:3:0.05,0.05,0.05") is None
    assert default_symmetry_axis("cloud:x.csv") is None


def test_compact_calpha_is_closed_and_matches_graph_near_origin():
    shape = make_calpha_compact(0.5, 2.0)
    assert shape.closed
    t0, t1 = shape.domain
    np.testing.assert_allclose(shape.point(t0), shape.point(t1), atol=1e-9)
    # below the origin the curve is convex: unique projection at the origin
    d = eval_distance(shape, (0.0, -0.05))
    assert d == pytest.approx(0.05, abs=1e-9)


def test_compact_calpha_chord_continuity():
    shape = make_calpha_compact(0.5, 2.0)
    t0, t1 = shape.domain
    ts = np.linspace(t0, t1, 4000)
    pts = shape.point(ts)
    gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    assert gaps.max() < 0.05  # no jumps between pieces


def test_triangle_wave_layout_slope_and_vertices():
    mu = 0.5
    lay = triangle_wave_layout(mu, 3, [0.05, 0.03, 0.02])
    assert lay["s"] == pytest.approx(math.sqrt(1.0 / mu ** 2 - 1.0),
                                     abs=1e-15)
    # peaks at height 1, valleys at 0, spaced 1/s apart
    assert lay["interior_valley_x"]
    assert len(lay["interior_valley_r"]) == len(lay["interior_valley_x"])


def test_triangle_wave_probe_norm_equals_mu():
    for mu in (0.3, 0.5, 0.7):
        shape = make_triangle_wave(mu, 3, [0.05, 0.03, 0.02])
        for p in triangle_wave_probes(mu, 3, [0.05, 0.03, 0.02]):
            info = generalized_gradient(shape, p)
            assert info.grad_norm == pytest.approx(mu, abs=1e-9)
            assert len(info.projections) == 2


def test_triangle_wave_rejects_oversized_rounding():
    with pytest.raises(GeometryError):
        make_triangle_wave(0.9, 3, [5.0, 5.0, 5.0])
