"""Extending a partition of D to a partition of a larger container D'."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from core.errors import ExtensionFailure, InvalidParameter
from core.geometry.clipping import clip, ray_exit
from core.geometry.constant_width import ConstantWidthBody, as_curve
from core.geometry.curves import ConvexCurve, PointCurve, PolygonCurve, contains_curve
from core.geometry.partition import (
    EdgeKind,
    PlanarPartition,
    build_partition,
    validate,
)
from core.geometry.quadrature import QuadratureSpec

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-6
# area of the symmetric difference between a face and its extension cut back to the old container
RESTRICTION_TOL = 1e-10


@dataclass(frozen=True)
class AddedSegment:
    start: tuple[float, float]
    end: tuple[float, float]
    length: float
    edge: int


@dataclass(frozen=True, eq=False)
class ExtensionResult:
    original: PlanarPartition
    extended: PlanarPartition
    added_segments: tuple[AddedSegment, ...]
    lhs: float
    rhs: float
    restriction_error: float = 0.0

    @property
    def total_added_length(self) -> float:
        return math.fsum(s.length for s in self.added_segments)

    @property
    def identity_error(self) -> float:
        return abs(self.lhs - self.rhs)


def _boundary_vertices(partition: PlanarPartition) -> set[int]:
    return {v for e in partition.edges.values() if e.kind is EdgeKind.ARC for v in (e.v1, e.v2)}


def _added_segments(partition: PlanarPartition, outer: ConvexCurve) -> list[AddedSegment]:
    on_boundary = _boundary_vertices(partition)
    out = []
    for eid in sorted(partition.edges):
        e = partition.edges[eid]
        if e.kind is not EdgeKind.SEGMENT:
            continue
        for v, w in ((e.v1, e.v2), (e.v2, e.v1)):
            if v not in on_boundary:
                continue
            p, q = partition.point(v), partition.point(w)
            direction = p - q
            if np.linalg.norm(direction) == 0.0:
                continue
            direction = direction / np.linalg.norm(direction)
            t = ray_exit(outer, p, direction)
            end = p + t * direction
            out.append(AddedSegment((float(p[0]), float(p[1])), (float(end[0]), float(end[1])), float(t), eid))
    return out


def restriction_error(partition: PlanarPartition, extended: PlanarPartition,
                      q: QuadratureSpec = QuadratureSpec()) -> float:
    """
    Largest area of the symmetric difference between a face of `partition` and
    the matching face of `extended` cut back to the old container.
    """
    inner = partition.container
    worst = 0.0
    for face, wide in zip(partition.faces, extended.faces):
        own, other = partition.halfplanes(face), extended.halfplanes(wide)
        restricted = clip(inner, other)
        common = clip(inner, own + other)
        sym = (face.region.area(q) + (restricted.area(q) if restricted is not None else 0.0)
               - 2.0 * (common.area(q) if common is not None else 0.0))
        worst = max(worst, abs(sym))
    return worst


def _restriction_tol(inner: ConvexCurve, q: QuadratureSpec) -> float:
    scale = max(1.0, inner.area(q))
    if isinstance(inner, PolygonCurve):
        return RESTRICTION_TOL * scale
    # curved pieces carry the quadrature error of their areas
    return (RESTRICTION_TOL + 10.0 * q.abs_tol) * scale


def extend_to_container(partition: PlanarPartition, outer: ConvexCurve | ConstantWidthBody,
                        q: QuadratureSpec = QuadratureSpec(), tolerance: float = IDENTITY_TOL) -> ExtensionResult:
    """
    Partition of `outer` whose faces restrict to the faces of `partition`.

    Every segment reaching the boundary of the old container is continued
    along its own line up to the new boundary; faces keep their half-planes,
    so faces strictly inside the old container are unchanged.
    """
    outer = as_curve(outer)
    inner = partition.container
    if not contains_curve(outer, inner, tol=1e-9):
        raise InvalidParameter("the new container must contain the partitioned body")
    if any(isinstance(f.region, PointCurve) for f in partition.faces):
        raise InvalidParameter("degenerate faces cannot be extended; extend before degree-3 normalization")

    if not partition.edges:
        extended = build_partition(outer, [([], f.label) for f in partition.faces])
        lhs = math.fsum(f.region.perimeter(q) for f in partition.faces) - inner.perimeter(q)
        rhs = math.fsum(f.region.perimeter(q) for f in extended.faces) - outer.perimeter(q)
        return ExtensionResult(partition, extended, (), lhs, rhs)

    regions = [(partition.halfplanes(f), f.label) for f in partition.faces]
    for (hps, _), face in zip(regions, partition.faces):
        if clip(outer, hps) is None:
            raise ExtensionFailure(f"face {face.id} vanishes in the new container")
    try:
        extended = build_partition(outer, regions)
    except ValueError as exc:
        raise ExtensionFailure(f"extended faces do not form a partition: {exc}") from exc
    report = validate(extended)
    if not report.valid:
        raise ExtensionFailure("extended faces do not form a partition: " + "; ".join(report.violations))
    restricted = restriction_error(partition, extended, q)
    if restricted > _restriction_tol(inner, q):
        raise ExtensionFailure(f"extended faces cut back to the old container miss the original faces "
                               f"by area {restricted:.3g}")

    added = _added_segments(partition, outer)
    lhs = math.fsum(f.region.perimeter(q) for f in partition.faces) - inner.perimeter(q)
    rhs = (math.fsum(f.region.perimeter(q) for f in extended.faces) - outer.perimeter(q)
           - 2.0 * math.fsum(s.length for s in added))
    result = ExtensionResult(partition, extended, tuple(added), lhs, rhs, restricted)
    scale = max(1.0, outer.perimeter(q))
    if result.identity_error > tolerance * scale:
        raise ExtensionFailure(f"perimeter bookkeeping off by {result.identity_error:.3g}")
    logger.debug("extended %d faces, %d segments added, total length %.12g",
                 len(extended.faces), len(added), result.total_added_length)
    return result
