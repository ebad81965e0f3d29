import numpy as np
import pytest

from core.errors import InvalidPartition
from core.geometry.clipping import HalfPlane
from core.geometry.curves import DiskCurve, PointCurve, PolygonCurve
from core.geometry.normalize import normalize_degree3
from core.geometry.partition import (
    Face,
    FaceLabel,
    PlanarPartition,
    build_partition,
    euler_vertex_count,
    face_perimeters,
    partition_identity_check,
    validate,
)


def test_grid_centre_becomes_degenerate_hole(grid_partition):
    normal = normalize_degree3(grid_partition)
    assert set(normal.degrees().values()) == {3}
    assert len(normal.vertices) == 8
    assert normal.k == 4
    assert normal.l == 1
    assert euler_vertex_count(normal) == 8
    hole = normal.holes[0]
    assert isinstance(hole.region, PointCurve)
    assert hole.region.at == pytest.approx([1.0, 1.0])
    assert len(hole.vertex_cycle) == 4


def test_normalization_keeps_face_geometry(grid_partition):
    normal = normalize_degree3(grid_partition)
    before = sorted(face_perimeters(grid_partition))
    after = sorted(p for f, p in zip(normal.faces, face_perimeters(normal)) if not f.is_hole)
    assert after == pytest.approx(before)


def test_degree3_partition_is_unchanged(square_split):
    normal = normalize_degree3(square_split)
    assert len(normal.vertices) == len(square_split.vertices)
    assert len(normal.edges) == len(square_split.edges)


def test_identity_survives_normalization(grid_partition):
    d = DiskCurve((0.7, 1.2), 5.0)
    before = partition_identity_check(grid_partition, d)
    after = partition_identity_check(normalize_degree3(grid_partition), d)
    assert after.passed
    # the hole adds 2 pdist(centre, D) to both sides
    assert after.rhs - before.rhs == pytest.approx(after.lhs - before.lhs, abs=1e-8)


def test_coincident_vertices_share_coordinates(grid_partition):
    normal = normalize_degree3(grid_partition)
    at_centre = [v for v in normal.vertices.values() if np.allclose(v.xy, (1.0, 1.0))]
    assert len(at_centre) == 4
    zero_edges = [e for e in normal.edges.values() if normal.edge_length(e.id) == 0.0]
    assert len(zero_edges) == 4


def test_invalid_partition_is_rejected(unit_square):
    both = PlanarPartition(unit_square, {}, {}, (Face(0, (), (), FaceLabel.BODY, unit_square),
                                                 Face(1, (), (), FaceLabel.BODY, unit_square)))
    with pytest.raises(InvalidPartition) as info:
        normalize_degree3(both)
    assert info.value.violations


@pytest.fixture
def boundary_fan(unit_square):
    """Two cuts from (0.5, 0) on the bottom side to the top corners."""
    foot = (0.5, 0.0)
    return build_partition(unit_square, [
        ([HalfPlane.left_of(foot, (0.0, 1.0))], FaceLabel.BODY),
        ([HalfPlane.left_of(foot, (1.0, 1.0)), HalfPlane.left_of((0.0, 1.0), foot)], FaceLabel.BODY),
        ([HalfPlane.left_of((1.0, 1.0), foot)], FaceLabel.BODY),
    ])


@pytest.fixture
def hole_with_three_lines():
    """A triangular hole whose three side lines cut the square [0, 2]^2 into six bodies."""
    a, b, c = (1.0, 0.8), (1.4, 1.4), (0.6, 1.4)
    sides = [HalfPlane.left_of(a, b), HalfPlane.left_of(b, c), HalfPlane.left_of(c, a)]
    regions = [(sides, FaceLabel.HOLE)]
    for signs in ((-1, 1, 1), (1, -1, 1), (1, 1, -1), (-1, -1, 1), (1, -1, -1), (-1, 1, -1)):
        regions.append(([h if s > 0 else h.flipped() for h, s in zip(sides, signs)], FaceLabel.BODY))
    return build_partition(PolygonCurve([(0, 0), (2, 0), (2, 2), (0, 2)]), regions)


def test_boundary_vertex_splits_into_a_chain(boundary_fan):
    assert max(boundary_fan.degrees().values()) == 4
    normal = normalize_degree3(boundary_fan)
    assert set(normal.degrees().values()) == {3}
    assert len(normal.vertices) == 4
    assert (normal.k, normal.l) == (3, 0)
    assert euler_vertex_count(normal) == 4
    assert validate(normal).valid
    at_foot = [v for v in normal.vertices.values() if np.allclose(v.xy, (0.5, 0.0))]
    assert len(at_foot) == 2
    assert partition_identity_check(normal, DiskCurve((0.5, 0.5), 10.0)).passed


def test_hole_vertices_split_into_chains(hole_with_three_lines):
    assert validate(hole_with_three_lines).valid
    normal = normalize_degree3(hole_with_three_lines)
    assert set(normal.degrees().values()) == {3}
    assert len(normal.vertices) == 12
    assert (normal.k, normal.l) == (6, 1)
    assert euler_vertex_count(normal) == 12
    assert validate(normal).valid
    assert len(normal.holes[0].vertex_cycle) == 6
    assert partition_identity_check(normal, DiskCurve((1.0, 1.0), 10.0)).passed
