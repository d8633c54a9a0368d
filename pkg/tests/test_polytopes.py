"""Planar hull and point-set geometry used by the region containers.

Core claims:
    - vertices_of_halfplanes enumerates the corners of small polygons over
      the nonnegative quadrant
    - hull2 returns a CCW hull without duplicates or collinear points
    - polygon_area handles degenerate hulls (empty, point, segment)
    - hausdorff and hull_distance match hand values and edge conventions
    - pareto_corners keeps exactly the maximal points of a 3D cloud
"""

import math

from pytest import approx

from bcsi.polytopes import (
    dedupe_points,
    halfplanes_unbounded,
    hausdorff,
    hull2,
    hull_distance,
    pareto_corners,
    polygon_area,
    vertices_of_halfplanes,
)


def test_box_vertices():
    rows = [(1, 0, 2.0), (0, 1, 1.0)]
    verts = set(map(tuple, vertices_of_halfplanes(rows)))
    assert verts == {(0.0, 0.0), (2.0, 0.0), (0.0, 1.0), (2.0, 1.0)}


def test_triangle_with_sum_row():
    rows = [(1, 0, 2.0), (0, 1, 1.0), (1, 1, 2.5)]
    verts = hull2(vertices_of_halfplanes(rows))
    assert set(map(tuple, verts)) == {
        (0.0, 0.0),
        (2.0, 0.0),
        (2.0, 0.5),
        (1.5, 1.0),
        (0.0, 1.0),
    }
    assert polygon_area(verts) == approx(2.0 - 0.25 / 2)


def test_hull2_is_ccw_and_deduped():
    pts = [(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5), (1, 0), (0.5, 0.0)]
    h = hull2(pts)
    assert len(h) == 4
    area2 = sum(
        h[i][0] * h[(i + 1) % 4][1] - h[(i + 1) % 4][0] * h[i][1] for i in range(4)
    )
    assert area2 > 0  # CCW orientation


def test_polygon_area_degenerate():
    assert polygon_area([]) == 0.0
    assert polygon_area([(1.0, 2.0)]) == 0.0
    assert polygon_area([(0.0, 0.0), (1.0, 1.0)]) == 0.0


def test_hull2_vertical_sliver_keeps_extremes():
    # x varies only by rounding noise; the segment must still span the full
    # y range or membership checks near the ends go wrong
    noise = 1.1102230246251565e-16
    pts = [(noise, 0.0), (0.0, 0.027), (0.0, 0.061), (noise, 0.045), (0.0, 0.042)]
    h = hull2(pts)
    assert len(h) == 2
    assert hull_distance(h, (0.0, 0.0)) <= 1e-12
    assert hull_distance(h, (0.0, 0.061)) <= 1e-12


def test_hausdorff():
    a = [(0.0, 0.0), (1.0, 0.0)]
    b = [(0.0, 0.0), (1.0, 1.0)]
    assert hausdorff(a, b) == approx(1.0)
    assert hausdorff(a, a) == 0.0
    assert hausdorff([], []) == 0.0
    assert hausdorff(a, []) == math.inf
    assert hausdorff(a, b) == hausdorff(b, a)


def test_hausdorff_3d_points():
    a = [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)]
    b = [(0.0, 0.0, 0.0), (1.0, 0.0, 2.0)]
    assert hausdorff(a, b) == approx(2.0)


def test_hull_distance():
    square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    assert hull_distance(square, (0.5, 0.5)) == approx(0.0, abs=1e-12)
    assert hull_distance(square, (1.0, 1.0)) == approx(0.0, abs=1e-12)
    assert hull_distance(square, (2.0, 1.0)) == approx(1.0, abs=1e-9)
    # degenerate hulls still answer membership questions; metric is L-inf
    assert hull_distance([(0.0, 0.0)], (0.0, 0.0)) == approx(0.0, abs=1e-12)
    assert hull_distance([(0.0, 0.0)], (3.0, 4.0)) == approx(4.0, abs=1e-9)


def test_pareto_corners():
    cloud = [
        (1.0, 1.0, 1.0),
        (0.5, 0.5, 0.5),  # dominated
        (2.0, 0.0, 0.0),
        (0.0, 2.0, 0.0),
        (1.0, 1.0, 0.5),  # dominated
    ]
    corners = set(pareto_corners(cloud))
    assert corners == {(1.0, 1.0, 1.0), (2.0, 0.0, 0.0), (0.0, 2.0, 0.0)}


def test_dedupe_points():
    pts = [(0.0, 0.0), (1e-12, 0.0), (1.0, 0.0)]
    assert len(dedupe_points(pts, 1e-9)) == 2


def test_unbounded_detection():
    assert halfplanes_unbounded([(1, 0, 1.0)])  # nothing caps the y axis
    assert not halfplanes_unbounded([(1, 0, 1.0), (0, 1, 1.0)])
    assert not halfplanes_unbounded([(1, 1, 1.0)])
