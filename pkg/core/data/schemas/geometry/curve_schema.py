from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator

from core.geometry.clipping import ClippedCurve, HalfPlane, clip
from core.geometry.constant_width import ConstantWidthBody, cw_from_harmonics, reuleaux_polygon
from core.geometry.curves import (
    ConvexCurve,
    DiskCurve,
    HarmonicCurve,
    HomotheticCurve,
    MinkowskiCurve,
    OffsetCurve,
    PointCurve,
    PolygonCurve,
    ReuleauxCurve,
    SampledSupportCurve,
    convex_hull_curve,
)
from core.geometry.disk_polygon import CompletionCurve, DiskPolygon

Point = tuple[float, float]


class _CurveBase(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class PolygonSchema(_CurveBase):
    type: Literal['polygon'] = 'polygon'
    vertices: list[Point] = Field(min_length=1)

    def to_curve(self) -> ConvexCurve:
        if len(self.vertices) < 3:
            return convex_hull_curve(self.vertices)
        return PolygonCurve(self.vertices)


class PointSchema(_CurveBase):
    type: Literal['point'] = 'point'
    at: Point

    def to_curve(self) -> ConvexCurve:
        return PointCurve(self.at)


class DiskSchema(_CurveBase):
    type: Literal['disk'] = 'disk'
    center: Point = (0.0, 0.0)
    radius: float = Field(gt=0)

    def to_curve(self) -> ConvexCurve:
        return DiskCurve(self.center, self.radius)


class ReuleauxSchema(_CurveBase):
    type: Literal['reuleaux'] = 'reuleaux'
    n: int = Field(ge=3)
    width: float = Field(gt=0)
    center: Point = (0.0, 0.0)
    rotation: float = 0.0

    @field_validator('n')
    @classmethod
    def _odd(cls, n: int) -> int:
        if n % 2 == 0:
            raise ValueError(f"Reuleaux polygons need an odd number of vertices, got {n}")
        return n

    def to_body(self) -> ConstantWidthBody:
        return reuleaux_polygon(self.n, self.width, self.center, self.rotation)

    def to_curve(self) -> ConvexCurve:
        return self.to_body().curve


class HarmonicsSchema(_CurveBase):
    type: Literal['cw_harmonics'] = 'cw_harmonics'
    width: float = Field(gt=0)
    coeffs: list[tuple[int, float, float]] = Field(default_factory=list)
    center: Point = (0.0, 0.0)

    def to_body(self) -> ConstantWidthBody:
        return cw_from_harmonics(self.width, self.coeffs, self.center)

    def to_curve(self) -> ConvexCurve:
        return self.to_body().curve


class SupportSamplesSchema(_CurveBase):
    type: Literal['support_samples'] = 'support_samples'
    h: list[float] = Field(min_length=8)

    def to_curve(self) -> ConvexCurve:
        return SampledSupportCurve(self.h)


class DiskPolygonSchema(_CurveBase):
    type: Literal['disk_polygon'] = 'disk_polygon'
    centers: list[Point] = Field(min_length=1)
    radius: float = Field(gt=0)

    def to_curve(self) -> ConvexCurve:
        return DiskPolygon(self.centers, self.radius)


class CompletionSchema(_CurveBase):
    type: Literal['completion'] = 'completion'
    points: list[Point] = Field(min_length=2)
    width: float = Field(gt=0)

    def to_body(self) -> ConstantWidthBody:
        return ConstantWidthBody(self.to_curve(), self.width, 1e-9)

    def to_curve(self) -> ConvexCurve:
        return CompletionCurve(self.points, self.width)


class MinkowskiSchema(_CurveBase):
    type: Literal['minkowski'] = 'minkowski'
    t: float = Field(ge=0.0, le=1.0)
    a: 'CurveSchema'
    b: 'CurveSchema'

    def to_curve(self) -> ConvexCurve:
        return MinkowskiCurve(self.t, self.a.to_curve(), self.b.to_curve())


class HomothetySchema(_CurveBase):
    type: Literal['homothety'] = 'homothety'
    center: Point
    scale: float = Field(gt=0)
    base: 'CurveSchema'

    def to_curve(self) -> ConvexCurve:
        return HomotheticCurve(self.base.to_curve(), self.center, self.scale)


class OffsetSchema(_CurveBase):
    type: Literal['offset'] = 'offset'
    eps: float = Field(ge=0)
    base: 'CurveSchema'

    def to_curve(self) -> ConvexCurve:
        return OffsetCurve(self.base.to_curve(), self.eps)


class ClippedSchema(_CurveBase):
    """host ∩ {x : n . x <= c} for every [nx, ny, c]."""
    type: Literal['clipped'] = 'clipped'
    host: 'CurveSchema'
    halfplanes: list[tuple[float, float, float]]

    def to_curve(self) -> ConvexCurve:
        region = clip(self.host.to_curve(), [HalfPlane((nx, ny), c) for nx, ny, c in self.halfplanes])
        if region is None:
            raise ValueError("clipped curve is empty")
        return region


CurveSchema = Annotated[
    Union[PolygonSchema, PointSchema, DiskSchema, ReuleauxSchema, HarmonicsSchema, SupportSamplesSchema,
          DiskPolygonSchema, CompletionSchema, MinkowskiSchema, HomothetySchema, OffsetSchema, ClippedSchema],
    Field(discriminator='type'),
]

for _model in (MinkowskiSchema, HomothetySchema, OffsetSchema, ClippedSchema):
    _model.model_rebuild()

curve_adapter = TypeAdapter(CurveSchema)


def parse_curve(data) -> CurveSchema:
    return curve_adapter.validate_python(data)


def parse_curve_json(text: str | bytes) -> CurveSchema:
    return curve_adapter.validate_json(text)


def body_from_schema(schema: CurveSchema) -> ConvexCurve | ConstantWidthBody:
    """Constant-width kinds come back certified, everything else as a plain curve."""
    if isinstance(schema, (ReuleauxSchema, HarmonicsSchema, CompletionSchema)):
        return schema.to_body()
    return schema.to_curve()


def _pt(p) -> Point:
    return float(p[0]), float(p[1])


def curve_to_schema(curve: ConvexCurve | ConstantWidthBody) -> CurveSchema:
    if isinstance(curve, ConstantWidthBody):
        curve = curve.curve
    if isinstance(curve, PointCurve):
        return PointSchema(at=_pt(curve.at))
    if isinstance(curve, PolygonCurve):
        return PolygonSchema(vertices=[_pt(v) for v in curve.vertices])
    if isinstance(curve, DiskCurve):
        return DiskSchema(center=_pt(curve.center), radius=curve.radius)
    if isinstance(curve, ReuleauxCurve):
        return ReuleauxSchema(n=curve.n, width=curve.width, center=_pt(curve.center), rotation=curve.rotation)
    if isinstance(curve, HarmonicCurve):
        return HarmonicsSchema(width=curve.width, coeffs=list(curve.coeffs), center=_pt(curve.center))
    if isinstance(curve, SampledSupportCurve):
        return SupportSamplesSchema(h=[float(x) for x in curve.samples])
    if isinstance(curve, CompletionCurve):
        return CompletionSchema(points=[_pt(p) for p in curve.points], width=curve.width)
    if isinstance(curve, DiskPolygon):
        return DiskPolygonSchema(centers=[_pt(p) for p in curve.centers], radius=curve.radius)
    if isinstance(curve, MinkowskiCurve):
        return MinkowskiSchema(t=curve.t, a=curve_to_schema(curve.a), b=curve_to_schema(curve.b))
    if isinstance(curve, HomotheticCurve):
        return HomothetySchema(center=_pt(curve.center), scale=curve.scale, base=curve_to_schema(curve.base))
    if isinstance(curve, OffsetCurve):
        return OffsetSchema(eps=curve.eps, base=curve_to_schema(curve.base))
    if isinstance(curve, ClippedCurve):
        return ClippedSchema(host=curve_to_schema(curve.host), halfplanes=[tuple(h.as_list()) for h in curve.halfplanes])
    raise TypeError(f"no JSON form for {type(curve).__name__}")


def curve_to_dict(curve: ConvexCurve | ConstantWidthBody) -> dict:
    return curve_to_schema(curve).model_dump(mode='json')
