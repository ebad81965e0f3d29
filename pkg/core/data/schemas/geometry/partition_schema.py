from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field

from core.data.schemas.geometry.curve_schema import CurveSchema, curve_to_schema
from core.geometry.partition import Edge, EdgeKind, FaceLabel, PlanarPartition, Vertex, partition_from_cycles

EdgeRow = Union[tuple[int, int, int], tuple[int, int, int, Literal['segment', 'arc']]]


class FaceSchema(BaseModel):
    model_config = ConfigDict(extra='forbid')

    id: int
    cycle: list[int]
    label: FaceLabel = FaceLabel.BODY


class PartitionSchema(BaseModel):
    """
    Edges are [id, v1, v2] or [id, v1, v2, kind]; kind defaults to "segment".
    Arc edges run counterclockwise along the container from v1 to v2.
    """
    model_config = ConfigDict(extra='forbid')

    container: CurveSchema
    vertices: list[tuple[int, float, float]] = Field(default_factory=list)
    edges: list[EdgeRow] = Field(default_factory=list)
    faces: list[FaceSchema] = Field(min_length=1)

    def to_partition(self) -> PlanarPartition:
        vertices = [Vertex(vid, (x, y)) for vid, x, y in self.vertices]
        edges = [Edge(row[0], row[1], row[2], EdgeKind(row[3]) if len(row) > 3 else EdgeKind.SEGMENT)
                 for row in self.edges]
        faces = [(f.id, f.cycle, f.label) for f in self.faces]
        return partition_from_cycles(self.container.to_curve(), vertices, edges, faces)

    @staticmethod
    def partition_to_schema(partition: PlanarPartition) -> 'PartitionSchema':
        return PartitionSchema(
            container=curve_to_schema(partition.container),
            vertices=[(v.id, v.xy[0], v.xy[1]) for v in sorted(partition.vertices.values(), key=lambda v: v.id)],
            edges=[(e.id, e.v1, e.v2, e.kind.value) for e in sorted(partition.edges.values(), key=lambda e: e.id)],
            faces=[FaceSchema(id=f.id, cycle=list(f.edge_cycle), label=f.label) for f in partition.faces],
        )
