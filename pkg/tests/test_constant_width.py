import math

import pytest

from core.errors import InvalidCurve, InvalidParameter, NotConvex
from core.geometry.constant_width import (
    complete_to_constant_width,
    cw_from_harmonics,
    is_constant_width,
    reuleaux_polygon,
    smooth_approx,
    support_continuity_ratio,
    validate_constant_width,
)
from core.geometry.curves import (
    DiskCurve,
    PointCurve,
    PolygonCurve,
    contains_curve,
    diameter,
    hausdorff_distance,
)


@pytest.mark.parametrize('n', [3, 5, 7])
def test_reuleaux_perimeter_is_pi_times_width(n):
    body = reuleaux_polygon(n, 2.0)
    assert body.width == pytest.approx(2.0)
    assert body.curve.perimeter() == pytest.approx(2.0 * math.pi)
    assert is_constant_width(body).max_deficit < 1e-9


def test_reuleaux_triangle_area(reuleaux_triangle):
    assert reuleaux_triangle.curve.area() == pytest.approx((math.pi - math.sqrt(3.0)) / 2.0)


def test_reuleaux_rejects_even_n():
    with pytest.raises(InvalidParameter):
        reuleaux_polygon(4, 1.0)


def test_barbier_on_harmonic_body():
    body = cw_from_harmonics(1.0, [(3, 0.05, 0.0)])
    assert body.curve.perimeter() == pytest.approx(math.pi, abs=1e-8)
    report = is_constant_width(body)
    assert report.is_constant
    assert report.width == pytest.approx(1.0)


def test_harmonics_must_stay_convex():
    with pytest.raises(NotConvex):
        cw_from_harmonics(1.0, [(3, 0.2, 0.0)])


def test_harmonic_orders_must_be_odd():
    with pytest.raises(InvalidParameter):
        cw_from_harmonics(1.0, [(2, 0.01, 0.0)])


def test_square_is_not_constant_width(unit_square):
    report = is_constant_width(unit_square)
    assert not report.is_constant
    assert report.max_deficit == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-6)
    with pytest.raises(InvalidCurve):
        validate_constant_width(unit_square)


def test_disk_is_constant_width(unit_disk):
    assert validate_constant_width(unit_disk).width == pytest.approx(2.0)


def test_smooth_approx_widens_by_twice_eps(reuleaux_triangle):
    smooth = smooth_approx(reuleaux_triangle, 0.1)
    assert smooth.width == pytest.approx(1.2)
    assert is_constant_width(smooth).width == pytest.approx(1.2, abs=1e-9)
    assert smooth.curve.perimeter() == pytest.approx(1.2 * math.pi, abs=1e-8)
    assert support_continuity_ratio(smooth) <= 1.0 + 1e-6
    assert smooth_approx(reuleaux_triangle, 0.0) is reuleaux_triangle
    with pytest.raises(InvalidParameter):
        smooth_approx(reuleaux_triangle, -0.1)


def test_triangle_completes_to_reuleaux_triangle():
    h = math.sqrt(3.0) / 2.0
    triangle = PolygonCurve([(0, 0), (1, 0), (0.5, h)])
    body = complete_to_constant_width(triangle)
    expected = reuleaux_polygon(3, 1.0, center=(0.5, h / 3.0), rotation=math.pi / 2)
    assert body.width == pytest.approx(1.0)
    assert hausdorff_distance(body.curve, expected.curve) < 1e-4


def test_completion_contains_input_and_keeps_diameter():
    poly = PolygonCurve([(0, 0), (1.0, 0.1), (0.8, 0.7), (0.1, 0.5)])
    body = complete_to_constant_width(poly)
    assert contains_curve(body.curve, poly, tol=1e-6)
    assert body.width == pytest.approx(diameter(poly), abs=1e-9)
    assert is_constant_width(body, tol=1e-6).is_constant


def test_completion_of_constant_width_input_is_identity(unit_disk):
    assert complete_to_constant_width(unit_disk).curve is unit_disk


def test_completion_of_a_point_fails():
    with pytest.raises(InvalidParameter):
        complete_to_constant_width(PointCurve((1.0, 1.0)))


def test_constant_width_body_diameter_is_width(reuleaux_triangle):
    assert reuleaux_triangle.diameter == reuleaux_triangle.width
    assert diameter(reuleaux_triangle.curve) == pytest.approx(1.0, abs=1e-6)


def test_disk_width_report_fields():
    report = is_constant_width(DiskCurve((3, -1), 0.25))
    assert report.min_width == pytest.approx(0.5)
    assert report.max_width == pytest.approx(0.5)
