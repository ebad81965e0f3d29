import pytest

from core.errors import DegenerateInstance, InvalidPartition
from core.geometry.curves import DiskCurve, PolygonCurve
from core.geometry.partition import (
    Edge,
    EdgeKind,
    Face,
    FaceLabel,
    PlanarPartition,
    Vertex,
    build_partition,
    euler_vertex_count,
    face_perimeters,
    partition_from_cycles,
    partition_identity_check,
    total_body_perimeter,
    trivial_partition,
    validate,
)
from core.services.scenario_service import random_partition, spoke_partition

from conftest import x_at_least, x_at_most

SPLIT_VERTICES = [Vertex(0, (0.5, 0.0)), Vertex(1, (0.5, 1.0))]
SPLIT_EDGES = [Edge(0, 0, 1, EdgeKind.SEGMENT), Edge(1, 1, 0, EdgeKind.ARC), Edge(2, 0, 1, EdgeKind.ARC)]


def test_square_split_graph(square_split):
    assert square_split.k == 2
    assert square_split.l == 0
    assert len(square_split.vertices) == 2
    assert sorted(square_split.degrees().values()) == [3, 3]
    kinds = sorted(e.kind.value for e in square_split.edges.values())
    assert kinds == ['arc', 'arc', 'segment']


def test_square_split_is_valid(square_split):
    report = validate(square_split)
    assert report.valid, report.violations
    assert report.area_error < 1e-12
    assert report.min_degree == report.max_degree == 3


def test_face_perimeters(square_split, exact):
    assert face_perimeters(square_split) == pytest.approx([3.0, 3.0])
    assert total_body_perimeter(square_split, exact) == pytest.approx(6.0)


def test_edge_lengths(square_split):
    lengths = sorted(square_split.edge_length(eid) for eid in square_split.edges)
    assert lengths == pytest.approx([1.0, 2.0, 2.0])


def test_euler_counts(square_split, grid_partition, unit_square):
    assert euler_vertex_count(square_split) == 2
    assert euler_vertex_count(trivial_partition(unit_square)) == 0
    with pytest.raises(InvalidPartition):
        # the centre of the grid has degree 4
        euler_vertex_count(grid_partition)


def test_grid_partition(grid_partition):
    assert grid_partition.k == 4
    assert len(grid_partition.vertices) == 5
    assert max(grid_partition.degrees().values()) == 4
    assert validate(grid_partition).valid


def test_partition_identity_on_square_split(square_split, exact):
    report = partition_identity_check(square_split, DiskCurve((0.5, 0.5), 10.0), exact)
    assert report.lhs == pytest.approx(6.0)
    assert report.rhs == pytest.approx(6.0)
    assert report.passed


def test_partition_identity_counts_high_degree(grid_partition):
    # the degree-4 centre weighs two
    report = partition_identity_check(grid_partition, DiskCurve((1.0, 1.0), 10.0))
    assert report.passed
    assert report.lhs == pytest.approx(16.0, abs=1e-8)


def test_partition_from_cycles(unit_square):
    faces = [(0, [1, 0], FaceLabel.BODY), (1, [0, 2], FaceLabel.BODY)]
    partition = partition_from_cycles(unit_square, SPLIT_VERTICES, SPLIT_EDGES, faces)
    assert [f.region.area() for f in partition.faces] == pytest.approx([0.5, 0.5])
    assert partition.faces[1].vertex_cycle == (0, 1)
    assert validate(partition).valid


def test_partition_from_cycles_rejects_open_cycle(unit_square):
    with pytest.raises(InvalidPartition):
        partition_from_cycles(unit_square, SPLIT_VERTICES, SPLIT_EDGES, [(0, [0], FaceLabel.BODY)])


def test_partition_from_cycles_rejects_unknown_edges(unit_square):
    with pytest.raises(InvalidPartition):
        partition_from_cycles(unit_square, SPLIT_VERTICES, SPLIT_EDGES, [(0, [0, 7], FaceLabel.BODY)])


def test_partition_from_cycles_rejects_dangling_edges(unit_square):
    with pytest.raises(InvalidPartition):
        partition_from_cycles(unit_square, SPLIT_VERTICES, [Edge(0, 0, 5)], [])


def test_validate_reports_overlap(unit_square):
    both = PlanarPartition(unit_square, {}, {}, (Face(0, (), (), FaceLabel.BODY, unit_square),
                                                 Face(1, (), (), FaceLabel.BODY, unit_square)))
    report = validate(both)
    assert not report.valid
    assert any('tile' in v for v in report.violations)
    assert 'interiors not disjoint' in report.violations


def test_validate_reports_hole_on_boundary(unit_square):
    inner = PolygonCurve([(0, 0), (0.5, 0), (0.5, 0.5), (0, 0.5)])
    partition = PlanarPartition(unit_square, {}, {}, (Face(0, (), (), FaceLabel.HOLE, inner),))
    report = validate(partition)
    assert any('touches the container boundary' in v for v in report.violations)


def test_spoke_partition_of_a_triangle():
    partition = spoke_partition([(0, 0), (1, 0), (0.5, 3 ** 0.5 / 2)])
    assert partition.k == 3
    assert euler_vertex_count(partition) == 4
    assert validate(partition).valid


@pytest.mark.parametrize('seed', [1, 2])
def test_random_partition_with_a_hole(seed, unit_square):
    partition = random_partition(seed, unit_square, cuts=2, holes=1)
    assert partition.l == 1
    assert validate(partition).valid
    assert euler_vertex_count(partition) == 2 * (partition.k + partition.l - 1)


def test_random_partition_is_deterministic(unit_square):
    a = random_partition(7, unit_square, cuts=3, holes=0)
    b = random_partition(7, unit_square, cuts=3, holes=0)
    assert [v.xy for v in a.vertices.values()] == [v.xy for v in b.vertices.values()]


def test_zero_area_face_is_rejected(unit_square):
    # the first face is the segment x = 0.5
    with pytest.raises(DegenerateInstance, match='empty interior'):
        build_partition(unit_square, [([x_at_most(0.5), x_at_least(0.5)], FaceLabel.BODY),
                                      ([x_at_least(0.5)], FaceLabel.BODY)])
