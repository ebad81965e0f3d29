import xml.etree.ElementTree as ET

from core.data.schemas.geometry.curve_schema import curve_to_schema
from core.data.schemas.geometry.partition_schema import PartitionSchema
from core.data.schemas.render.scene_schema import CurveItem, SceneSchema
from core.geometry.normalize import normalize_degree3
from core.render.figures import triangle_scene
from core.render.svg_render import partition_scene, render_scene
from core.utils.config import RenderConfig

SVG = '{http://www.w3.org/2000/svg}'


def _groups(svg: str) -> dict:
    root = ET.fromstring(svg)
    return {g.get('id'): list(g) for g in root.iter(f'{SVG}g')}


def test_empty_scene():
    root = ET.fromstring(render_scene(SceneSchema()))
    assert root.get('viewBox') == '0 0 1 1'
    assert list(root.iter(f'{SVG}g')) == []


def test_rendering_is_deterministic():
    assert render_scene(triangle_scene()) == render_scene(triangle_scene())


def test_triangle_scene_items():
    groups = _groups(render_scene(triangle_scene()))
    assert set(groups) == {'completion', 'partition', 'extension'}
    assert len(groups['completion']) == 1
    assert len(groups['partition']) == 3
    assert [child.tag for child in groups['extension']] == [f'{SVG}line'] * 3


def test_canvas_and_precision():
    svg = render_scene(triangle_scene(), RenderConfig(canvas_width=300, canvas_height=200, precision=2))
    root = ET.fromstring(svg)
    assert root.get('width') == '300px'
    assert root.get('height') == '200px'
    for value in root.get('viewBox').split():
        assert len(value.split('.')[-1]) <= 2


def test_y_axis_points_up(unit_square):
    svg = render_scene(SceneSchema(items=[CurveItem(id='sq', curve=curve_to_schema(unit_square))]))
    polygon = _groups(svg)['sq'][0]
    ys = {float(pair.split(',')[1]) for pair in polygon.get('points').split()}
    assert ys == {0.0, -1.0}


def test_holes_take_the_hole_style(grid_partition):
    scene = partition_scene(PartitionSchema.partition_to_schema(normalize_degree3(grid_partition)))
    faces = _groups(render_scene(scene))['partition']
    assert len(faces) == 5
    # the degenerate hole is drawn as a dot
    assert [f.tag for f in faces].count(f'{SVG}circle') == 1


def test_unnamed_items_get_positional_ids(unit_disk):
    svg = render_scene(SceneSchema(items=[CurveItem(curve=curve_to_schema(unit_disk))]))
    assert set(_groups(svg)) == {'item0'}
