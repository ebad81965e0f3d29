from enum import Enum
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.data.schemas.geometry.curve_schema import CurveSchema, Point
from core.data.schemas.geometry.partition_schema import PartitionSchema

SCENARIO_SCHEMA_VERSION = 1


class ScenarioKind(str, Enum):
    DISJOINT_BODIES = 'disjoint-bodies'
    PARTITION_WITH_HOLES = 'partition-with-holes'
    POLYGON_IN_CW = 'polygon-in-cw'
    TRIANGLE_FAMILY = 'triangle-family'


class DisjointBodiesPayload(BaseModel):
    model_config = ConfigDict(extra='forbid')

    kind: Literal['disjoint-bodies'] = 'disjoint-bodies'
    container: CurveSchema
    bodies: list[CurveSchema] = Field(min_length=1)


class PartitionPayload(BaseModel):
    """A degree-3 partition of a constant-width container."""
    model_config = ConfigDict(extra='forbid')

    kind: Literal['partition-with-holes'] = 'partition-with-holes'
    partition: PartitionSchema


class PolygonInBodyPayload(BaseModel):
    model_config = ConfigDict(extra='forbid')

    kind: Literal['polygon-in-cw'] = 'polygon-in-cw'
    body: CurveSchema
    polygon: list[Point] = Field(min_length=1)


class TriangleFamilyPayload(BaseModel):
    """Triangles inside a constant-width body, each with a bisector length for the Balitskiy check."""
    model_config = ConfigDict(extra='forbid')

    kind: Literal['triangle-family'] = 'triangle-family'
    body: CurveSchema
    triangles: list[tuple[Point, Point, Point]] = Field(min_length=1)
    lengths: list[float]

    @model_validator(mode='after')
    def _one_length_per_triangle(self):
        if len(self.lengths) != len(self.triangles):
            raise ValueError("need exactly one bisector length per triangle")
        return self


Payload = Annotated[
    Union[DisjointBodiesPayload, PartitionPayload, PolygonInBodyPayload, TriangleFamilyPayload],
    Field(discriminator='kind'),
]


class ScenarioSchema(BaseModel):
    model_config = ConfigDict(extra='forbid')

    schema_version: int = SCENARIO_SCHEMA_VERSION
    seed: int
    kind: ScenarioKind
    params: dict[str, float | int | str] = Field(default_factory=dict)
    payload: Payload

    @model_validator(mode='after')
    def _kind_matches_payload(self):
        if self.payload.kind != self.kind.value:
            raise ValueError(f"scenario kind {self.kind.value!r} does not match payload kind {self.payload.kind!r}")
        return self

    def to_json(self) -> str:
        return self.model_dump_json()
