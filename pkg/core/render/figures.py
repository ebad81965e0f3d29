"""
The triangle partition extended to its Reuleaux completion.

An equilateral triangle of side 1 is cut by the three perpendiculars from its
centre to the sides; completing the triangle gives the Reuleaux triangle on
the same vertices, and the perpendiculars continue up to its arcs.
"""
import math

import numpy as np

from core.data.schemas.geometry.curve_schema import curve_to_schema
from core.data.schemas.geometry.partition_schema import PartitionSchema
from core.data.schemas.render.scene_schema import CurveItem, PartitionItem, SceneSchema, SegmentsItem, StyleSchema
from core.geometry.constant_width import ConstantWidthBody, complete_to_constant_width
from core.geometry.curves import PolygonCurve
from core.geometry.extension import ExtensionResult, extend_to_container
from core.geometry.partition import PlanarPartition
from core.services.scenario_service import spoke_partition

TRIANGLE = np.array([(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3.0) / 2.0)])


def triangle_partition() -> PlanarPartition:
    return spoke_partition(TRIANGLE, TRIANGLE.mean(axis=0))


def triangle_extension() -> tuple[ConstantWidthBody, ExtensionResult]:
    partition = triangle_partition()
    outer = complete_to_constant_width(PolygonCurve(TRIANGLE))
    return outer, extend_to_container(partition, outer)


def triangle_scene() -> SceneSchema:
    outer, extension = triangle_extension()
    segments = [(s.start, s.end) for s in extension.added_segments]
    return SceneSchema(items=[
        CurveItem(id='completion', curve=curve_to_schema(outer), style=StyleSchema(stroke='#111')),
        PartitionItem(id='partition', partition=PartitionSchema.partition_to_schema(extension.original),
                      style=StyleSchema(stroke='#1f5fbf', fill='#dfe9f7')),
        SegmentsItem(id='extension', segments=segments),
    ])
