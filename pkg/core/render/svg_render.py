"""
Deterministic SVG output for scenes of curves, partitions and segments.

Coordinates are flipped (SVG y grows downwards) and rounded to a fixed number
of decimals, so the same scene always produces the same bytes.
"""
import logging
from typing import Optional, Sequence

import numpy as np
import svgwrite

from core.data.schemas.geometry.partition_schema import PartitionSchema
from core.data.schemas.render.scene_schema import CurveItem, PartitionItem, SceneSchema, SegmentsItem, StyleSchema
from core.geometry.curves import ConvexCurve, PointCurve, PolygonCurve
from core.geometry.partition import FaceLabel
from core.utils.config import RenderConfig

logger = logging.getLogger(__name__)

CURVE_SAMPLES = 720


class SceneRenderer:
    def __init__(self, config: RenderConfig = RenderConfig()):
        self.config = config
        self.precision = config.precision

    def _r(self, x: float) -> float:
        # +0.0 turns -0.0 into 0.0
        return round(float(x), self.precision) + 0.0

    def _points(self, pts: np.ndarray) -> list[tuple[float, float]]:
        return [(self._r(x), self._r(-y)) for x, y in np.asarray(pts, dtype=float).reshape(-1, 2)]

    def _style(self, style: StyleSchema, scale: float) -> dict:
        width = style.stroke_width if style.stroke_width is not None else self.config.stroke_width
        attrs = {'stroke': style.stroke, 'fill': style.fill,
                 'stroke_width': self._r(width * scale), 'opacity': style.opacity}
        if style.dashed:
            attrs['stroke_dasharray'] = f"{self._r(4 * width * scale)},{self._r(2 * width * scale)}"
        return attrs

    @staticmethod
    def _outline(curve: ConvexCurve) -> np.ndarray:
        if isinstance(curve, PolygonCurve):
            return curve.vertices
        return curve.boundary_polyline(CURVE_SAMPLES)

    def _shape(self, dwg: svgwrite.Drawing, curve: ConvexCurve, attrs: dict, scale: float):
        if isinstance(curve, PointCurve):
            return dwg.circle(center=self._points(curve.at)[0], r=self._r(2.0 * scale), **{**attrs, 'fill': attrs['stroke']})
        pts = self._outline(curve)
        if len(pts) == 2:
            return dwg.polyline(points=self._points(pts), **attrs)
        return dwg.polygon(points=self._points(pts), **attrs)

    def _bounds(self, scene: SceneSchema) -> Optional[np.ndarray]:
        clouds = []
        for item in scene.items:
            if isinstance(item, CurveItem):
                clouds.append(self._outline(item.curve.to_curve()).reshape(-1, 2))
            elif isinstance(item, PartitionItem):
                clouds.append(self._outline(item.partition.container.to_curve()).reshape(-1, 2))
            elif item.segments:
                clouds.append(np.asarray(item.segments, dtype=float).reshape(-1, 2))
        if not clouds:
            return None
        pts = np.vstack(clouds)
        return np.array([pts.min(axis=0), pts.max(axis=0)])

    def render(self, scene: SceneSchema) -> str:
        width = scene.canvas_width or self.config.canvas_width
        height = scene.canvas_height or self.config.canvas_height
        dwg = svgwrite.Drawing(size=(f"{width}px", f"{height}px"), profile='tiny', debug=False)

        bounds = self._bounds(scene)
        if bounds is None:
            dwg.attribs['viewBox'] = "0 0 1 1"
            logger.info("rendering an empty scene")
            return dwg.tostring()

        (xmin, ymin), (xmax, ymax) = bounds
        span = max(xmax - xmin, ymax - ymin, 1e-12)
        pad = scene.margin * span
        dwg.attribs['viewBox'] = ' '.join(str(self._r(v)) for v in
                                          (xmin - pad, -ymax - pad, xmax - xmin + 2 * pad, ymax - ymin + 2 * pad))
        # stroke widths are given in canvas pixels
        scale = (span + 2 * pad) / max(width, height)

        for index, item in enumerate(scene.items):
            group = dwg.g(id=item.id or f"item{index}")
            if isinstance(item, CurveItem):
                group.add(self._shape(dwg, item.curve.to_curve(), self._style(item.style, scale), scale))
            elif isinstance(item, PartitionItem):
                self._partition(dwg, group, item, scale)
            else:
                self._segments(dwg, group, item, scale)
            dwg.add(group)
        logger.info("rendered %d scene items", len(scene.items))
        return dwg.tostring()

    def _partition(self, dwg, group, item: PartitionItem, scale: float) -> None:
        partition = item.partition.to_partition()
        body, hole = self._style(item.style, scale), self._style(item.hole_style, scale)
        for face in sorted(partition.faces, key=lambda f: f.id):
            attrs = hole if face.label is FaceLabel.HOLE else body
            group.add(self._shape(dwg, face.region, attrs, scale))

    def _segments(self, dwg, group, item: SegmentsItem, scale: float) -> None:
        attrs = self._style(item.style, scale)
        for a, b in item.segments:
            (x1, y1), (x2, y2) = self._points(np.array([a, b]))
            group.add(dwg.line(start=(x1, y1), end=(x2, y2), **attrs))


def render_scene(scene: SceneSchema, config: RenderConfig = RenderConfig()) -> str:
    return SceneRenderer(config).render(scene)


def partition_scene(partition: PartitionSchema, segments: Sequence[tuple] = (),
                    outer: Optional[CurveItem] = None) -> SceneSchema:
    items: list = []
    if outer is not None:
        items.append(outer)
    items.append(PartitionItem(id='partition', partition=partition))
    if segments:
        items.append(SegmentsItem(id='added', segments=list(segments)))
    return SceneSchema(items=items)
