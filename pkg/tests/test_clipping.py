import math

import pytest
from hypothesis import given, settings, strategies as st

from core.errors import InvalidParameter
from core.geometry.clipping import (
    ClippedCurve,
    HalfPlane,
    boundary_gap,
    clip,
    line_curve_intersection,
    ray_exit,
)
from core.geometry.curves import DiskCurve, PointCurve, PolygonCurve, width

from conftest import x_at_least, x_at_most, y_at_least


def test_left_of_orientation():
    h = HalfPlane.left_of((0, 0), (1, 0))
    assert h.contains((0.3, 1.0))
    assert not h.contains((0.3, -1.0))
    assert h.flipped().contains((0.3, -1.0))


def test_zero_normal_is_rejected():
    with pytest.raises(InvalidParameter):
        HalfPlane((0.0, 0.0), 1.0)


def test_clip_square_in_half(unit_square):
    half = clip(unit_square, [x_at_most(0.5)])
    assert isinstance(half, PolygonCurve)
    assert half.area() == pytest.approx(0.5)
    assert half.perimeter() == pytest.approx(3.0)


def test_clip_to_nothing(unit_square):
    assert clip(unit_square, [x_at_least(2.0)]) is None


def test_clip_without_halfplanes_is_identity(unit_disk):
    assert clip(unit_disk, []) is unit_disk


def test_clip_point():
    p = PointCurve((0.2, 0.2))
    assert clip(p, [x_at_most(0.5)]) is p
    assert clip(p, [x_at_least(0.5)]) is None


def test_half_disk(unit_disk):
    half = clip(unit_disk, [y_at_least(0.0)])
    assert isinstance(half, ClippedCurve)
    assert half.has_arcs
    assert half.area() == pytest.approx(math.pi / 2, abs=1e-8)
    assert half.perimeter() == pytest.approx(math.pi + 2.0, abs=1e-8)
    assert width(half, 0.0) == pytest.approx(1.0, abs=1e-9)
    assert width(half, math.pi / 2) == pytest.approx(2.0, abs=1e-9)


def test_clipping_a_clipped_curve_uses_the_host(unit_disk):
    quarter = clip(clip(unit_disk, [y_at_least(0.0)]), [x_at_least(0.0)])
    assert isinstance(quarter, ClippedCurve)
    assert quarter.host is unit_disk
    assert quarter.area() == pytest.approx(math.pi / 4, abs=1e-8)


def test_line_far_from_disk_keeps_it_whole(unit_disk):
    assert clip(unit_disk, [y_at_least(2.0).flipped()]) is unit_disk
    assert clip(unit_disk, [y_at_least(2.0)]) is None


def test_line_through_disk(unit_disk):
    t_in, _, t_out, _ = line_curve_intersection(unit_disk, (0.0, 0.0), (1.0, 0.0))
    assert t_in == pytest.approx(-1.0, abs=1e-9)
    assert t_out == pytest.approx(1.0, abs=1e-9)
    assert line_curve_intersection(unit_disk, (0.0, 2.0), (1.0, 0.0)) is None


def test_ray_exit(unit_disk, unit_square):
    assert ray_exit(unit_disk, (0.0, 0.0), (0.0, 1.0)) == pytest.approx(1.0, abs=1e-9)
    assert ray_exit(unit_square, (0.5, 0.5), (1.0, 0.0)) == pytest.approx(0.5)


def test_boundary_gap(unit_square, unit_disk):
    assert boundary_gap(unit_square, (0.5, 0.5))[0] == pytest.approx(0.5)
    assert boundary_gap(unit_square, (1.5, 0.5))[0] == pytest.approx(-0.5)
    assert boundary_gap(unit_disk, (0.5, 0.0))[0] == pytest.approx(0.5, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 2 * math.pi), st.floats(-0.4, 0.4))
def test_two_sides_of_a_chord_tile_the_disk(angle, offset):
    disk = DiskCurve((0.0, 0.0), 1.0)
    n = (math.cos(angle), math.sin(angle))
    side = HalfPlane(n, offset)
    a, b = clip(disk, [side]), clip(disk, [side.flipped()])
    assert a.area() + b.area() == pytest.approx(math.pi, abs=1e-7)
    # the chord is counted once on each side
    chord = 2.0 * math.sqrt(1.0 - offset * offset)
    assert a.perimeter() + b.perimeter() == pytest.approx(2 * math.pi + 2 * chord, abs=1e-7)
