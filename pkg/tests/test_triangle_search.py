import numpy as np
import pytest

from core.analyzer.triangle_search import TriangleExcessSearch, check_triangle_search, maximize_triangle_excess
from core.geometry.constant_width import validate_constant_width
from core.geometry.curves import DiskCurve, contains


def test_zero_budget_still_evaluates_one_triangle(reuleaux_triangle):
    result = maximize_triangle_excess(reuleaux_triangle, budget=0, seed=1)
    assert result.evaluations == 1
    assert 0.0 <= result.value <= reuleaux_triangle.width + 1e-4


def test_search_stays_below_the_diameter(reuleaux_triangle):
    report = check_triangle_search(reuleaux_triangle, budget=400, seed=3)
    assert report.passed
    assert report.lhs <= 1.0 + 1e-4
    assert report.extra['evaluations'] <= 400


def test_search_in_a_disk():
    body = validate_constant_width(DiskCurve((0.0, 0.0), 1.0))
    result = maximize_triangle_excess(body, budget=300, seed=2)
    assert result.value <= 2.0 + 1e-4
    for p in result.triangle:
        assert contains(body.curve, p, tol=1e-9)


def test_search_is_deterministic(reuleaux_triangle):
    a = maximize_triangle_excess(reuleaux_triangle, budget=200, seed=7)
    b = maximize_triangle_excess(reuleaux_triangle, budget=200, seed=7)
    assert a.triangle == b.triangle
    assert a.value == b.value


def test_parameters_map_into_the_body(reuleaux_triangle):
    search = TriangleExcessSearch(reuleaux_triangle, budget=10, seed=0)
    pts = search.to_points(np.array([0.0, 1.0, 2.0, 0.5, 4.0, 0.0]))
    assert pts[2] == pytest.approx(search.center)
    for p in pts:
        assert contains(reuleaux_triangle.curve, p, tol=1e-9)
