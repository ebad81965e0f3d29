import json
import math
from pathlib import Path

import pytest
from pydantic import ValidationError

from core.data.schemas.geometry.curve_schema import (
    ClippedSchema,
    PolygonSchema,
    body_from_schema,
    curve_to_dict,
    curve_to_schema,
    parse_curve,
    parse_curve_json,
)
from core.data.schemas.geometry.partition_schema import PartitionSchema
from core.data.schemas.harness.report_schema import CheckKind, VerificationReport
from core.data.schemas.harness.scenario_schema import ScenarioSchema
from core.data.schemas.render.scene_schema import SceneSchema
from core.geometry.constant_width import ConstantWidthBody, smooth_approx
from core.geometry.curves import DiskCurve, MinkowskiCurve, PolygonCurve, hausdorff_distance
from core.geometry.partition import EdgeKind, euler_vertex_count

CONFIGS = Path(__file__).resolve().parents[1] / 'configs'


def test_polygon_json():
    curve = parse_curve_json('{"type": "polygon", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}').to_curve()
    assert isinstance(curve, PolygonCurve)
    assert curve.perimeter() == pytest.approx(4.0)


def test_short_polygons_become_segments_and_points():
    seg = PolygonSchema(vertices=[(0, 0), (2, 0)]).to_curve()
    assert seg.perimeter() == pytest.approx(4.0)
    assert PolygonSchema(vertices=[(1, 1)]).to_curve().perimeter() == 0.0


@pytest.mark.parametrize('data', [
    {'type': 'reuleaux', 'n': 4, 'width': 1.0},
    {'type': 'disk', 'radius': -1.0},
    {'type': 'ellipse', 'a': 1.0},
    {'type': 'point', 'at': [0, 0], 'colour': 'red'},
    {'type': 'minkowski', 't': 1.5, 'a': {'type': 'point', 'at': [0, 0]}, 'b': {'type': 'point', 'at': [1, 1]}},
])
def test_invalid_curves_are_rejected(data):
    with pytest.raises(ValidationError):
        parse_curve(data)


def test_constant_width_kinds_come_back_certified():
    body = body_from_schema(parse_curve({'type': 'reuleaux', 'n': 3, 'width': 2.0}))
    assert isinstance(body, ConstantWidthBody)
    assert body.width == pytest.approx(2.0)
    assert not isinstance(body_from_schema(parse_curve({'type': 'disk', 'radius': 1.0})), ConstantWidthBody)


def test_nested_curves(reuleaux_triangle, unit_square):
    curves = [
        MinkowskiCurve(0.3, DiskCurve((0, 0), 1.0), unit_square),
        smooth_approx(reuleaux_triangle, 0.1).curve,
    ]
    for curve in curves:
        back = parse_curve_json(json.dumps(curve_to_dict(curve))).to_curve()
        assert hausdorff_distance(back, curve) == pytest.approx(0.0, abs=1e-12)


def test_clipped_schema():
    half = ClippedSchema(host={'type': 'disk', 'radius': 1.0}, halfplanes=[(0.0, -1.0, 0.0)]).to_curve()
    assert half.area() == pytest.approx(math.pi / 2, abs=1e-8)
    assert curve_to_schema(half).type == 'clipped'
    with pytest.raises(ValueError):
        ClippedSchema(host={'type': 'disk', 'radius': 1.0}, halfplanes=[(0.0, 1.0, -5.0)]).to_curve()


def test_partition_schema_from_scene_file():
    scene = SceneSchema.model_validate_json((CONFIGS / 'triangle_scene.json').read_text(encoding='utf-8'))
    schema = next(item.partition for item in scene.items if item.item == 'partition')
    partition = schema.to_partition()
    assert partition.k == 3
    assert euler_vertex_count(partition) == 4
    arcs = [e for e in partition.edges.values() if e.kind is EdgeKind.ARC]
    assert len(arcs) == 3


def test_partition_schema_preserves_graph(square_split):
    schema = PartitionSchema.partition_to_schema(square_split)
    back = schema.to_partition()
    assert sorted(back.degrees().values()) == [3, 3]
    assert sorted(f.region.area() for f in back.faces) == pytest.approx([0.5, 0.5])


def test_partition_edges_default_to_segments():
    schema = PartitionSchema.model_validate({
        'container': {'type': 'polygon', 'vertices': [[0, 0], [1, 0], [1, 1], [0, 1]]},
        'vertices': [[0, 0.5, 0.0], [1, 0.5, 1.0]],
        'edges': [[0, 0, 1], [1, 1, 0, 'arc'], [2, 0, 1, 'arc']],
        'faces': [{'id': 0, 'cycle': [1, 0]}, {'id': 1, 'cycle': [2, 0]}],
    })
    assert schema.to_partition().edges[0].kind is EdgeKind.SEGMENT


def _scenario(kind, payload):
    return {'seed': 1, 'kind': kind, 'payload': payload}


def test_scenario_kind_must_match_payload():
    payload = {'kind': 'polygon-in-cw', 'body': {'type': 'disk', 'radius': 1.0}, 'polygon': [[0, 0]]}
    assert ScenarioSchema.model_validate(_scenario('polygon-in-cw', payload)).seed == 1
    with pytest.raises(ValidationError):
        ScenarioSchema.model_validate(_scenario('triangle-family', payload))


def test_triangle_family_needs_one_length_per_triangle():
    payload = {'kind': 'triangle-family', 'body': {'type': 'disk', 'radius': 1.0},
               'triangles': [[[0, 0], [0.1, 0], [0, 0.1]]], 'lengths': [1.0, 2.0]}
    with pytest.raises(ValidationError):
        ScenarioSchema.model_validate(_scenario('triangle-family', payload))


def test_report_kinds():
    assert VerificationReport.evaluate('c', 1.0, 1.0 - 1e-7, 1e-6).passed
    assert not VerificationReport.evaluate('c', 1.0, 0.9, 1e-6).passed
    assert not VerificationReport.evaluate('c', 1.0, 1.1, 1e-6, CheckKind.IDENTITY).passed
    assert not VerificationReport.evaluate('c', 1.0, 1.0, 0.0, CheckKind.STRICT).passed
    assert VerificationReport.evaluate('c', 5.0, 1.0, 0.0, CheckKind.REPORT).passed


def test_report_json_uses_pass_and_hides_runtime():
    report = VerificationReport.evaluate('c', 1.0, 2.0, 1e-6, runtime=0.5, seed=3)
    data = json.loads(report.to_json())
    assert data['pass'] is True
    assert data['slack'] == pytest.approx(1.0)
    assert 'runtime' not in data
    assert json.loads(report.to_json(include_timing=True))['runtime'] == 0.5


def test_failure_report():
    report = VerificationReport.failure('pipeline', ValueError('boom'), instance=2)
    assert not report.passed
    assert report.detail == 'ValueError: boom'
    assert math.isnan(report.slack)
