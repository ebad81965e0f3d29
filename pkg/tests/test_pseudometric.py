import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.geometry.constant_width import reuleaux_polygon
from core.geometry.curves import DiskCurve, PointCurve, PolygonCurve, minkowski_combine
from core.geometry.pseudometric import (
    exact_if_possible,
    interjacent_breakpoints,
    interjacent_line,
    pdist,
    pdist_estimate,
    point_pdist,
    pper,
    signed_arc_integral,
    signed_line_integral,
    triangle_excess,
)
from core.geometry.quadrature import QuadratureSpec

coords = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
points = st.tuples(coords, coords)


def test_pdist_of_two_points(exact):
    assert pdist(PointCurve((0, 0)), PointCurve((3, 4)), exact) == pytest.approx(10.0)


def test_pdist_estimate_reports_exact_error(exact):
    result = pdist_estimate(PointCurve((0, 0)), PointCurve((3, 4)), exact)
    assert result.error == 0.0
    assert result.panels > 0


def test_concentric_disks_are_at_pseudodistance_zero():
    assert pdist(DiskCurve((1, 1), 1.0), DiskCurve((1, 1), 3.0)) == pytest.approx(0.0, abs=1e-10)


def test_boundary_point_of_disk(unit_disk):
    assert point_pdist((1.0, 0.0), unit_disk) == pytest.approx(2.0, abs=1e-9)
    assert point_pdist((0.0, 0.0), unit_disk) == pytest.approx(0.0, abs=1e-10)


def test_pper_against_disk_is_perimeter(unit_square):
    # every normal line of the disk passes through its centre inside the square
    d = DiskCurve((0.5, 0.5), 10.0)
    assert pper(d, unit_square) == pytest.approx(4.0, abs=1e-9)


def test_pper_of_the_reference_itself(unit_disk):
    assert pper(unit_disk, unit_disk) == pytest.approx(2 * math.pi, abs=1e-9)


def test_half_range_against_constant_width(reuleaux_triangle):
    tri = PolygonCurve([(0.1, 0.0), (0.2, 0.3), (-0.2, 0.1)])
    full = pper(reuleaux_triangle, tri)
    half = pper(reuleaux_triangle, tri, half_range=True)
    assert half == pytest.approx(full, abs=1e-8)


def test_exact_if_possible_switches_methods(unit_square, unit_disk):
    assert exact_if_possible(QuadratureSpec(), unit_square, PointCurve((0, 0))).method == 'exact'
    assert exact_if_possible(QuadratureSpec(method='exact'), unit_square, unit_disk).method == 'adaptive'
    assert exact_if_possible(QuadratureSpec(method='fixed'), unit_disk).method == 'fixed'


def test_signed_arc_integral_matches_closed_form(unit_square, reuleaux_triangle):
    for curve in (DiskCurve((0.3, -0.2), 1.5), unit_square, reuleaux_triangle):
        value, closed = signed_arc_integral(curve, 0.3, 2.9)
        assert value == pytest.approx(closed, abs=1e-8)


def test_signed_line_integral_vanishes(unit_square, unit_disk):
    assert signed_line_integral(unit_square, unit_disk) == pytest.approx(0.0, abs=1e-9)
    assert signed_line_integral(unit_disk, unit_disk) == 0.0


@settings(max_examples=40, deadline=None)
@given(points, points, points)
def test_point_pdist_is_a_pseudometric(a, b, c):
    q = QuadratureSpec(method='exact')
    ab = pdist(PointCurve(a), PointCurve(b), q)
    bc = pdist(PointCurve(b), PointCurve(c), q)
    ac = pdist(PointCurve(a), PointCurve(c), q)
    assert ab >= 0.0
    assert ab == pytest.approx(pdist(PointCurve(b), PointCurve(a), q), abs=1e-9)
    assert ac <= ab + bc + 1e-9
    # between points the pseudodistance is twice the euclidean one
    assert ab == pytest.approx(2 * math.dist(a, b), abs=1e-9)


def test_interjacent_line_takes_the_middle_vertex():
    line = interjacent_line((0, 0), (1, 0), (0, 2), 0.0)
    # horizontal lines: heights 0, 0 and 2; ties go to the first vertex
    assert line.base == pytest.approx((0.0, 0.0))
    line = interjacent_line((0, 0), (1, 1), (0, 2), 0.0)
    assert line.base == pytest.approx((1.0, 1.0))


def test_interjacent_breakpoints_are_side_directions():
    assert interjacent_breakpoints((0, 0), (1, 0), (0, 1)) == pytest.approx([0.0, math.pi / 2, 3 * math.pi / 4])


def test_triangle_excess_two_evaluations_agree(reuleaux_triangle):
    excess = triangle_excess((0.1, 0.0), (0.2, 0.3), (-0.2, 0.1), reuleaux_triangle)
    assert excess.lhs_value == pytest.approx(excess.rhs_value, abs=1e-8)
    assert 0.0 <= excess.value <= reuleaux_triangle.width + 1e-9


def test_triangle_excess_of_a_point_triple(reuleaux_triangle):
    # a degenerate triangle at one point has excess pdist(a, D)
    excess = triangle_excess((0.0, 0.0), (0.0, 0.0), (0.0, 0.0), reuleaux_triangle)
    assert excess.value == pytest.approx(point_pdist((0.0, 0.0), reuleaux_triangle, half_range=True), abs=1e-8)


@st.composite
def convex_curves(draw):
    center = (draw(coords), draw(coords))
    size = draw(st.floats(0.1, 2.0))
    rotation = draw(st.floats(0.0, 2 * math.pi))
    kind = draw(st.sampled_from(['polygon', 'disk', 'reuleaux']))
    if kind == 'disk':
        return DiskCurve(center, size)
    if kind == 'reuleaux':
        return reuleaux_polygon(draw(st.sampled_from([3, 5, 7])), size, center=center, rotation=rotation).curve
    n = draw(st.integers(3, 8))
    angles = rotation + 2 * math.pi * np.arange(n) / n
    return PolygonCurve(np.array(center) + size * np.stack([np.cos(angles), np.sin(angles)], axis=1))


@settings(max_examples=25, deadline=None)
@given(convex_curves(), convex_curves(), convex_curves())
def test_pdist_is_a_pseudometric_on_curves(a, b, c):
    ab, bc, ac = pdist(a, b), pdist(b, c), pdist(a, c)
    assert ab >= 0.0
    assert pdist(a, a) <= 1e-8
    assert ab == pytest.approx(pdist(b, a), abs=1e-8)
    assert ac <= ab + bc + 1e-7


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 1.0), convex_curves(), convex_curves(), convex_curves())
def test_pdist_is_convex_under_minkowski_combination(t, c1, c2, d):
    mixed = pdist(minkowski_combine(t, c1, c2), d)
    assert mixed <= t * pdist(c1, d) + (1 - t) * pdist(c2, d) + 1e-7


def test_minkowski_convexity_gap_with_lines_on_opposite_sides():
    c1, c2 = PointCurve((-1.0, 0.0)), PointCurve((1.0, 0.0))
    d = DiskCurve((0.0, 0.0), 0.2)
    # at theta = pi/2 the normal lines are x = -1, x = 1 and x = 0
    v = np.array([1.0, 0.0])
    offsets = [(c.support_point(math.pi / 2) - d.support_point(math.pi / 2)) @ v for c in (c1, c2)]
    assert offsets[0] < 0.0 < offsets[1]
    mixed = pdist(minkowski_combine(0.5, c1, c2), d)
    bound = 0.5 * pdist(c1, d) + 0.5 * pdist(c2, d)
    assert mixed == pytest.approx(0.0, abs=1e-8)
    assert bound - mixed > 1e-3
    assert bound == pytest.approx(2.0, abs=1e-6)
