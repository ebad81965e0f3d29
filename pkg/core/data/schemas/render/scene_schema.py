from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from core.data.schemas.geometry.curve_schema import CurveSchema, Point
from core.data.schemas.geometry.partition_schema import PartitionSchema


class StyleSchema(BaseModel):
    model_config = ConfigDict(extra='forbid')

    stroke: str = '#111'
    fill: str = 'none'
    stroke_width: Optional[float] = Field(None, gt=0)
    opacity: float = Field(1.0, ge=0.0, le=1.0)
    dashed: bool = False


class CurveItem(BaseModel):
    model_config = ConfigDict(extra='forbid')

    item: Literal['curve'] = 'curve'
    id: Optional[str] = None
    curve: CurveSchema
    style: StyleSchema = StyleSchema()


class PartitionItem(BaseModel):
    """Faces are drawn one path each; holes take `hole_style`."""
    model_config = ConfigDict(extra='forbid')

    item: Literal['partition'] = 'partition'
    id: Optional[str] = None
    partition: PartitionSchema
    style: StyleSchema = StyleSchema()
    hole_style: StyleSchema = StyleSchema(fill='#ccc')


class SegmentsItem(BaseModel):
    model_config = ConfigDict(extra='forbid')

    item: Literal['segments'] = 'segments'
    id: Optional[str] = None
    segments: list[tuple[Point, Point]]
    style: StyleSchema = StyleSchema(stroke='#d11', dashed=True)


SceneItem = Annotated[Union[CurveItem, PartitionItem, SegmentsItem], Field(discriminator='item')]


class SceneSchema(BaseModel):
    model_config = ConfigDict(extra='forbid')

    canvas_width: Optional[int] = Field(None, gt=0)
    canvas_height: Optional[int] = Field(None, gt=0)
    margin: float = Field(0.05, ge=0.0)
    items: list[SceneItem] = Field(default_factory=list)
