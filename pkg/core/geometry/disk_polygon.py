"""
Intersections of equal disks and the constant-width body they induce.

For a finite set X with diam(X) <= d, let P = ∩_{x in X} B(x, d). P is a
summand of the disk of radius d, so its d-dual has support d - H_P(phi + pi),
and the mean of the two bodies

    H(phi) = (d + H_P(phi) - H_P(phi + pi)) / 2

has constant width d, contains conv(X) and has diameter d.
"""
from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np

from core.errors import InvalidParameter
from core.geometry.curves import (
    ConvexCurve,
    PointCurve,
    PolygonCurve,
    SupportCurve,
    _cross,
    convex_hull_curve,
    reduce_angle,
    unit_vectors,
)
from core.geometry.quadrature import TWO_PI, QuadratureSpec

logger = logging.getLogger(__name__)

_DEFAULT_QUADRATURE = QuadratureSpec()
_ARC_EPS = 1e-15


def _extreme_points(points: np.ndarray) -> np.ndarray:
    hull = convex_hull_curve(points)
    if isinstance(hull, PointCurve):
        return hull.at[None, :]
    return np.asarray(hull.vertices)


class DiskPolygon(SupportCurve):
    """∩ B(x, radius) over the given centers, boundary made of circular arcs."""

    kind = 'disk_polygon'

    def __init__(self, centers: Sequence[Sequence[float]], radius: float):
        pts = np.asarray(centers, dtype=float).reshape(-1, 2)
        if len(pts) == 0:
            raise InvalidParameter("disk polygon needs at least one center")
        if not radius > 0:
            raise InvalidParameter(f"disk polygon radius must be positive, got {radius!r}")
        self.centers = pts
        self.centers.setflags(write=False)
        self.radius = float(radius)
        # only extreme centers constrain the intersection
        self._active = _extreme_points(pts)
        self._build_arcs()

    def __repr__(self):
        return f"DiskPolygon({len(self.centers)} centers, radius={self.radius})"

    def _arc_of(self, c: np.ndarray) -> tuple[float, float] | None:
        lo, hi = -math.pi, math.pi
        first = True
        for x in self._active:
            offset = x - c
            r = float(np.hypot(*offset))
            if r <= 1e-15:
                continue
            ratio = r / (2.0 * self.radius)
            if ratio > 1.0 + 1e-12:
                raise InvalidParameter("disks do not intersect: centers farther apart than twice the radius")
            half = math.acos(min(1.0, ratio))
            psi = math.atan2(offset[1], offset[0])
            a, b = psi - half, psi + half
            if first:
                lo, hi = a, b
                first = False
                continue
            mid, mid_new = 0.5 * (lo + hi), psi
            shift = TWO_PI * round((mid - mid_new) / TWO_PI)
            lo, hi = max(lo, a + shift), min(hi, b + shift)
            if hi - lo <= _ARC_EPS:
                return None
        return lo, hi

    def _build_arcs(self):
        arcs = []
        for c in self._active:
            arc = self._arc_of(c)
            if arc is not None:
                arcs.append((arc[0], arc[1], c))
        if not arcs:
            raise InvalidParameter("intersection of the disks is empty")

        arcs.sort(key=lambda a: float(reduce_angle(a[0])))
        base = float(reduce_angle(arcs[0][0]))
        bounds, centers = [], []
        for lo, hi, c in arcs:
            start = base + float(np.mod(lo - base, TWO_PI)) if bounds else base
            bounds.extend([start, start + (hi - lo)])
            centers.append(c)
        self._bounds = np.asarray(bounds)
        self._arc_centers = np.asarray(centers)
        logger.debug("disk polygon with %d arcs from %d centers", len(centers), len(self.centers))

    @property
    def arc_count(self) -> int:
        return len(self._arc_centers)

    @property
    def vertices(self) -> np.ndarray:
        """Boundary points where two arcs meet, counterclockwise."""
        if self.arc_count == 1 and self._bounds[1] - self._bounds[0] >= TWO_PI - 1e-12:
            return np.empty((0, 2))
        ends = self._bounds[1::2]
        return self._arc_centers + self.radius * unit_vectors(ends)

    def _locate(self, phis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x = self._bounds[0] + np.mod(np.asarray(phis, dtype=float) - self._bounds[0], TWO_PI)
        j = np.searchsorted(self._bounds, x, side='right') - 1
        j = np.clip(j, 0, len(self._bounds) - 1)
        return x, j

    def boundary_points(self, phis):
        x, j = self._locate(phis)
        arc = j // 2
        on_arc = (j % 2) == 0
        ends = self._bounds[2 * arc + 1]
        direction = np.where(on_arc, x, ends)
        return self._arc_centers[arc] + self.radius * unit_vectors(direction)

    def support_function(self, phis):
        return np.einsum('ij,ij->i', self.boundary_points(phis), unit_vectors(phis))

    def support_derivative(self, phis):
        phis = np.asarray(phis, dtype=float)
        t = np.stack([-np.sin(phis), np.cos(phis)], axis=-1)
        return np.einsum('ij,ij->i', self.boundary_points(phis), t)

    def curvature_radius(self, phis):
        _, j = self._locate(phis)
        return np.where((j % 2) == 0, self.radius, 0.0)

    @property
    def kinks(self):
        return tuple(sorted(float(k) for k in reduce_angle(self._bounds - math.pi)))

    def perimeter(self, q: QuadratureSpec = _DEFAULT_QUADRATURE) -> float:
        return self.radius * float(np.sum(self._bounds[1::2] - self._bounds[0::2]))

    def area(self, q: QuadratureSpec = _DEFAULT_QUADRATURE) -> float:
        spans = self._bounds[1::2] - self._bounds[0::2]
        segments = 0.5 * self.radius ** 2 * float(np.sum(spans - np.sin(spans)))
        v = self.vertices
        if len(v) == 0:
            return math.pi * self.radius ** 2
        starts = self._arc_centers + self.radius * unit_vectors(self._bounds[0::2])
        # chord polygon through arc endpoints (each arc contributes its chord)
        chord = 0.5 * float(np.sum(_cross(starts, v)))
        return chord + segments

    def centroid_hint(self):
        return self._active.mean(axis=0)


class CompletionCurve(SupportCurve):
    """Constant-width body of width d built from the disk polygon of a point set."""

    kind = 'completion'

    def __init__(self, points: Sequence[Sequence[float]], width: float):
        self.points = np.asarray(points, dtype=float).reshape(-1, 2)
        self.width = float(width)
        self.disk_polygon = DiskPolygon(self.points, self.width)

    def __repr__(self):
        return f"CompletionCurve({len(self.points)} points, width={self.width})"

    def boundary_points(self, phis):
        phis = np.asarray(phis, dtype=float)
        p = self.disk_polygon
        return 0.5 * (p.boundary_points(phis) + p.boundary_points(phis + math.pi)
                      + self.width * unit_vectors(phis))

    def support_function(self, phis):
        p = self.disk_polygon
        phis = np.asarray(phis, dtype=float)
        return 0.5 * (self.width + p.support_function(phis) - p.support_function(phis + math.pi))

    def support_derivative(self, phis):
        phis = np.asarray(phis, dtype=float)
        t = np.stack([-np.sin(phis), np.cos(phis)], axis=-1)
        return np.einsum('ij,ij->i', self.boundary_points(phis), t)

    def curvature_radius(self, phis):
        p = self.disk_polygon
        phis = np.asarray(phis, dtype=float)
        return 0.5 * (p.curvature_radius(phis) + self.width - p.curvature_radius(phis + math.pi))

    @property
    def kinks(self):
        own = np.asarray(self.disk_polygon.kinks)
        return tuple(sorted(set(float(k) for k in reduce_angle(np.concatenate([own, own + math.pi])))))

    def perimeter(self, q: QuadratureSpec = _DEFAULT_QUADRATURE) -> float:
        return math.pi * self.width

    def centroid_hint(self):
        return self.disk_polygon.centroid_hint()


def seed_points(curve: ConvexCurve, size: int = 256) -> np.ndarray:
    """Finite point set spanning a curve: vertices when it has them, a boundary sample otherwise."""
    if isinstance(curve, PointCurve):
        return curve.at[None, :]
    if isinstance(curve, PolygonCurve):
        return np.asarray(curve.vertices)
    return curve.boundary_polyline(size)
