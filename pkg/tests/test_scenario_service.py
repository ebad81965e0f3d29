import numpy as np
import pytest

from core.data.schemas.harness.scenario_schema import ScenarioKind, ScenarioSchema
from core.errors import DegenerateInstance, InvalidParameter
from core.geometry.curves import PolygonCurve, contains_curve
from core.services.scenario_service import (
    assert_disjoint,
    balitskiy_length,
    disjoint_bodies,
    generate,
    random_cw_body,
    voronoi_cells,
)
from core.geometry.constant_width import is_constant_width
from core.utils.generate import make_rng


def test_make_rng_streams_are_independent():
    a = make_rng(5, 'x', 1).uniform(size=3)
    b = make_rng(5, 'x', 1).uniform(size=3)
    c = make_rng(5, 'x', 2).uniform(size=3)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


@pytest.mark.parametrize('kind', [k.value for k in ScenarioKind])
def test_generate_is_deterministic(kind):
    first = generate(kind, 11, {})
    second = generate(kind, 11, {})
    assert first.to_json() == second.to_json()
    assert first.kind.value == kind
    assert ScenarioSchema.model_validate_json(first.to_json()).seed == 11


def test_different_seeds_differ():
    assert generate('polygon-in-cw', 1).to_json() != generate('polygon-in-cw', 2).to_json()


def test_unknown_kind():
    with pytest.raises(InvalidParameter):
        generate('ellipses', 1)


def test_disjoint_bodies_fit_and_do_not_overlap(unit_square):
    bodies = disjoint_bodies(3, 6, unit_square)
    assert len(bodies) == 6
    for body in bodies:
        assert contains_curve(unit_square, body, tol=1e-9)
    assert_disjoint(bodies)


def test_disjoint_bodies_needs_one(unit_square):
    with pytest.raises(InvalidParameter):
        disjoint_bodies(3, 0, unit_square)


def test_overlap_is_detected(unit_square):
    with pytest.raises(DegenerateInstance):
        assert_disjoint([unit_square, PolygonCurve([(0.5, 0.5), (1.5, 0.5), (1.5, 1.5), (0.5, 1.5)])])


def test_voronoi_cells_tile_the_container(unit_square):
    sites = np.array([[0.2, 0.2], [0.8, 0.3], [0.5, 0.8]])
    cells = voronoi_cells(unit_square, sites)
    assert sum(c.area() for c in cells) == pytest.approx(1.0)


def test_random_cw_bodies_have_constant_width():
    rng = make_rng(0, 'cw')
    for _ in range(6):
        body = random_cw_body(rng)
        assert is_constant_width(body, tol=1e-8).is_constant


def test_balitskiy_length_scales_half_perimeter():
    tri = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    half = 0.5 * (2.0 + 2 ** 0.5)
    assert balitskiy_length(tri, 0.0) == pytest.approx(half)
    assert balitskiy_length(tri, 1.0) == pytest.approx(2 * half)


def test_generated_parameters_are_recorded():
    scenario = generate('partition-with-holes', 4, {'cuts': 2, 'holes': 1})
    assert scenario.params == {'cuts': 2, 'holes': 1}
    partition = scenario.payload.partition.to_partition()
    assert partition.l == 1
