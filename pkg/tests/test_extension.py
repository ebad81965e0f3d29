import math

import pytest

from core.errors import ExtensionFailure, InvalidParameter
from core.geometry import extension as extension_module
from core.geometry.curves import DiskCurve, PolygonCurve
from core.geometry.extension import extend_to_container, restriction_error
from core.geometry.normalize import normalize_degree3
from core.geometry.partition import FaceLabel, build_partition, trivial_partition, validate
from core.render.figures import triangle_extension

from conftest import x_at_least, x_at_most


def test_triangle_extends_to_its_completion():
    outer, result = triangle_extension()
    assert outer.width == pytest.approx(1.0)
    assert len(result.added_segments) == 3
    # each spoke reaches the opposite arc of radius 1 through a side midpoint
    for segment in result.added_segments:
        assert segment.length == pytest.approx(1.0 - math.sqrt(3.0) / 2.0, abs=1e-6)
    assert result.total_added_length == pytest.approx(3.0 * (1.0 - math.sqrt(3.0) / 2.0), abs=1e-6)
    assert result.identity_error < 1e-6
    assert result.extended.k == 3
    assert validate(result.extended).valid


def test_trivial_partition_extends_trivially(unit_square):
    result = extend_to_container(trivial_partition(unit_square), DiskCurve((0.5, 0.5), 2.0))
    assert result.added_segments == ()
    assert result.lhs == pytest.approx(0.0)
    assert result.rhs == pytest.approx(0.0)
    assert result.extended.faces[0].region.perimeter() == pytest.approx(4.0 * math.pi)


def test_square_chord_reaches_large_disk(square_split):
    outer = DiskCurve((0.5, 0.5), 10.0)
    result = extend_to_container(square_split, outer)
    assert len(result.added_segments) == 2
    assert [s.length for s in result.added_segments] == pytest.approx([9.5, 9.5])
    assert result.extended.k == 2
    assert [f.region.area() for f in result.extended.faces] == pytest.approx([50 * math.pi, 50 * math.pi],
                                                                             abs=1e-6)
    assert result.identity_error < 1e-6


def test_outer_must_contain_inner(square_split):
    with pytest.raises(InvalidParameter):
        extend_to_container(square_split, DiskCurve((0.5, 0.5), 0.6))


def test_degenerate_faces_are_not_extended(grid_partition):
    with pytest.raises(InvalidParameter):
        extend_to_container(normalize_degree3(grid_partition), DiskCurve((1.0, 1.0), 5.0))


def test_extended_faces_restrict_to_the_originals(square_split):
    _, triangle = triangle_extension()
    assert triangle.restriction_error < 1e-10
    assert restriction_error(triangle.original, triangle.extended) < 1e-10
    chord = extend_to_container(square_split, DiskCurve((0.5, 0.5), 10.0))
    assert chord.restriction_error < 1e-10


def test_restriction_error_measures_moved_faces(square_split):
    wide = PolygonCurve([(-1, -1), (2, -1), (2, 2), (-1, 2)])
    shifted = build_partition(wide, [([x_at_most(0.4)], FaceLabel.BODY), ([x_at_least(0.4)], FaceLabel.BODY)])
    # each face gains or loses a 0.1 x 1 strip inside the unit square
    assert restriction_error(square_split, shifted) == pytest.approx(0.1)


def test_faces_that_do_not_restrict_are_rejected(square_split, monkeypatch):
    monkeypatch.setattr(extension_module, 'restriction_error', lambda *args: 1e-3)
    with pytest.raises(ExtensionFailure, match='miss the original faces'):
        extend_to_container(square_split, DiskCurve((0.5, 0.5), 10.0))
