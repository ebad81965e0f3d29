import math

import numpy as np
import pytest

from core.errors import IncompatibleMethod, QuadratureFailure
from core.geometry.curves import DiskCurve, PointCurve, PolygonCurve
from core.geometry.quadrature import (
    TWO_PI,
    LineTerm,
    QuadratureSpec,
    breakpoints_in,
    integrate_function,
    integrate_line_terms,
)


def test_adaptive_sine():
    result = integrate_function(np.sin, 0.0, math.pi, [], QuadratureSpec())
    assert result.value == pytest.approx(2.0, abs=1e-10)
    assert result.error < 1e-9


def test_fixed_abs_sine_with_kink():
    result = integrate_function(lambda t: np.abs(np.sin(t)), 0.0, TWO_PI, [math.pi],
                                QuadratureSpec(method='fixed', grid_size=512))
    assert result.value == pytest.approx(4.0, abs=1e-8)


def test_empty_range():
    assert integrate_function(np.cos, 1.0, 1.0, [], QuadratureSpec()).value == 0.0


def test_exact_rejects_plain_functions():
    with pytest.raises(IncompatibleMethod):
        integrate_function(np.sin, 0.0, 1.0, [], QuadratureSpec(method='exact'))


def test_exact_rejects_curved_tracks(unit_disk):
    term = LineTerm(PointCurve((0, 0)).track(), unit_disk.track())
    with pytest.raises(IncompatibleMethod):
        integrate_line_terms([term], 0.0, TWO_PI, QuadratureSpec(method='exact'))


def test_adaptive_budget_exhausted_reports_estimate():
    spec = QuadratureSpec(max_subdivisions=1)
    with pytest.raises(QuadratureFailure) as info:
        integrate_function(np.sin, 0.0, math.pi, [], spec)
    assert info.value.estimate is not None


def test_breakpoints_wrap_around_turns():
    pts = breakpoints_in([0.5], 0.0, 2 * TWO_PI)
    assert pts == pytest.approx([0.0, 0.5, 0.5 + TWO_PI, 2 * TWO_PI])


def test_breakpoints_without_kinks():
    assert list(breakpoints_in([], 0.0, 1.0)) == [0.0, 1.0]


@pytest.mark.parametrize('method', ['exact', 'adaptive', 'fixed'])
def test_methods_agree_on_polygons(method, unit_square):
    triangle = PolygonCurve([(0.2, 0.1), (0.9, 0.3), (0.4, 0.8)])
    term = LineTerm(unit_square.track(), triangle.track())
    spec = QuadratureSpec(method=method, grid_size=8192)
    reference = integrate_line_terms([term], 0.0, TWO_PI, QuadratureSpec(method='exact')).value
    assert integrate_line_terms([term], 0.0, TWO_PI, spec).value == pytest.approx(reference, abs=1e-5)


def test_line_distance_of_two_points_is_closed_form():
    # |d . v_theta| integrates to 4 |d| over a full turn
    term = LineTerm(PointCurve((0, 0)).track(), PointCurve((3, 4)).track())
    assert integrate_line_terms([term], 0.0, TWO_PI, QuadratureSpec(method='exact')).value == pytest.approx(20.0)


def test_signed_integrand_vanishes_over_full_turn():
    term = LineTerm(PointCurve((1, 2)).track(), DiskCurve((0, 0), 1.0).track())
    result = integrate_line_terms([term], 0.0, TWO_PI, QuadratureSpec(), signed=True)
    assert result.value == pytest.approx(0.0, abs=1e-9)
