"""
Closed convex planar curves parametrized by inward normal direction.

Conventions used across the package:
  u_theta = (cos theta, sin theta)   inward normal
  v_theta = (sin theta, -cos theta)  u_theta rotated a quarter turn clockwise
  gamma(theta)                       boundary point minimizing <x, u_theta>
  H(phi)                             outward support function, H(phi) = max <x, n(phi)>
so gamma(theta) is the boundary point with outward normal phi = theta + pi.
"""
from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import minimize_scalar
from shapely.geometry import MultiPoint, Polygon
from shapely.geometry.polygon import orient

from core.errors import InvalidCurve, InvalidParameter, NotConvex
from core.geometry.quadrature import (
    LineTrack,
    QuadratureSpec,
    TWO_PI,
    integrate_function,
    tangent_vectors,
)

logger = logging.getLogger(__name__)

GRID_SIZE = 4096
FACET_TOL = 1e-12
DIRECTION_TOL = 1e-12
CONVEXITY_TOL = 1e-8
DEGENERATE_AREA = 1e-12

_DEFAULT_QUADRATURE = QuadratureSpec()


# ---------------- angles ----------------

def reduce_angle(theta):
    return np.mod(theta, TWO_PI)


def angle_diff(a, b):
    """Signed circular difference a - b in [-pi, pi)."""
    return np.mod(np.asarray(a) - np.asarray(b) + math.pi, TWO_PI) - math.pi


def unit_vectors(thetas) -> np.ndarray:
    thetas = np.asarray(thetas, dtype=float)
    return np.stack([np.cos(thetas), np.sin(thetas)], axis=-1)


def angle_grid(size: int = GRID_SIZE) -> np.ndarray:
    return np.arange(size) * (TWO_PI / size)


def _as_point(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float).reshape(-1)
    if arr.shape != (2,) or not np.all(np.isfinite(arr)):
        raise InvalidParameter(f"expected a finite 2D point, got {p!r}")
    return arr


def _cross(a: np.ndarray, b: np.ndarray):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


# ---------------- lines ----------------

@dataclass(frozen=True)
class DirectedLine:
    base: tuple[float, float]
    direction: tuple[float, float]

    def __post_init__(self):
        norm = math.hypot(*self.direction)
        if abs(norm - 1.0) > DIRECTION_TOL:
            raise InvalidParameter(f"line direction must be a unit vector, norm is {norm!r}")

    @classmethod
    def through(cls, base, theta: float) -> 'DirectedLine':
        b = _as_point(base)
        return cls((float(b[0]), float(b[1])), (math.cos(theta), math.sin(theta)))

    @property
    def normal(self) -> np.ndarray:
        # direction rotated +pi/2
        return np.array([-self.direction[1], self.direction[0]])

    def is_parallel(self, other: 'DirectedLine', tol: float = DIRECTION_TOL) -> bool:
        return abs(_cross(np.asarray(self.direction), np.asarray(other.direction))) <= tol

    def signed_distance_to(self, other: 'DirectedLine') -> float:
        """Offset of this line from `other`, measured along other's direction rotated +pi/2."""
        if not self.is_parallel(other):
            raise InvalidParameter("distance is only defined between parallel lines")
        return float(np.dot(np.subtract(self.base, other.base), other.normal))

    def distance_to(self, other: 'DirectedLine') -> float:
        return abs(self.signed_distance_to(other))


# ---------------- curve base ----------------

class ConvexCurve(ABC):
    """A closed convex curve answering support queries for every direction."""

    kind: str = 'curve'

    @abstractmethod
    def support_points(self, thetas: np.ndarray) -> np.ndarray:
        """gamma(theta) for an array of inward normal angles, shape (N, 2)."""

    @property
    def kinks(self) -> tuple[float, ...]:
        """Inward normal angles where gamma is not smooth."""
        return ()

    @property
    def piecewise_constant(self) -> bool:
        return False

    def support_point(self, theta: float) -> np.ndarray:
        return self.support_points(np.array([float(theta)]))[0]

    def support_values(self, phis: np.ndarray) -> np.ndarray:
        """Outward support function H(phi)."""
        phis = np.asarray(phis, dtype=float)
        pts = self.support_points(phis + math.pi)
        return np.einsum('ij,ij->i', pts, unit_vectors(phis))

    def curvature_radius(self, phis: np.ndarray) -> np.ndarray:
        # only defined when the curvature measure has a density (no straight edges)
        raise NotImplementedError(f"{type(self).__name__} has no curvature radius")

    @property
    def has_curvature(self) -> bool:
        try:
            self.curvature_radius(np.zeros(1))
        except NotImplementedError:
            return False
        return True

    def track(self, shift: float = 0.0) -> LineTrack:
        """Base points of the normal lines theta -> gamma(theta + shift)."""
        kinks = tuple(float(k) for k in reduce_angle(np.asarray(self.kinks, dtype=float) - shift))
        if shift == 0.0:
            return LineTrack(self.support_points, kinks, self.piecewise_constant)
        return LineTrack(lambda th: self.support_points(th + shift), kinks, self.piecewise_constant)

    def boundary_polyline(self, size: int = GRID_SIZE) -> np.ndarray:
        pts = self.support_points(angle_grid(size) + math.pi)
        keep = np.concatenate([[True], np.any(np.abs(np.diff(pts, axis=0)) > 1e-15, axis=1)])
        return pts[keep]

    def area(self, q: QuadratureSpec = _DEFAULT_QUADRATURE) -> float:
        if self.has_curvature:
            spec = q if q.method != 'exact' else QuadratureSpec(abs_tol=q.abs_tol)
            kinks = [k + math.pi for k in self.kinks]
            f = lambda phi: self.support_values(phi) * self.curvature_radius(phi)
            return 0.5 * integrate_function(f, 0.0, TWO_PI, kinks, spec).value
        return float(Polygon(self.boundary_polyline(8 * GRID_SIZE)).area)

    def perimeter(self, q: QuadratureSpec = _DEFAULT_QUADRATURE) -> float:
        # Cauchy: half the integral of the width
        spec = q if q.method != 'exact' else QuadratureSpec(abs_tol=q.abs_tol)
        kinks = [k - math.pi / 2 for k in self.kinks] + [k + math.pi / 2 for k in self.kinks]
        return 0.5 * integrate_function(lambda th: widths(self, th), 0.0, TWO_PI, kinks, spec).value

    def centroid_hint(self) -> np.ndarray:
        """A point in the interior (or the point itself for degenerate curves)."""
        return self.support_points(angle_grid(64)).mean(axis=0)


# ---------------- points and polygons ----------------

class PointCurve(ConvexCurve):
    kind = 'point'

    def __init__(self, at):
        self.at = _as_point(at)
        self.at.setflags(write=False)

    def __repr__(self):
        return f"PointCurve({self.at.tolist()})"

    @property
    def piecewise_constant(self) -> bool:
        return True

    def support_points(self, thetas):
        thetas = np.asarray(thetas, dtype=float)
        return np.broadcast_to(self.at, thetas.shape + (2,)).copy()

    def curvature_radius(self, phis):
        return np.zeros_like(np.asarray(phis, dtype=float))

    def area(self, q=_DEFAULT_QUADRATURE) -> float:
        return 0.0

    def perimeter(self, q=_DEFAULT_QUADRATURE) -> float:
        return 0.0

    def centroid_hint(self):
        return self.at.copy()


def _clean_ring(points: np.ndarray) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(points))))
    pts = list(points)
    changed = True
    while changed and len(pts) > 2:
        changed = False
        for i in range(len(pts)):
            prev_pt, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
            if np.linalg.norm(cur - prev_pt) <= 1e-14 * scale:
                del pts[i]
                changed = True
                break
            if abs(_cross(cur - prev_pt, nxt - cur)) <= 1e-14 * scale * scale and np.dot(cur - prev_pt, nxt - cur) > 0:
                del pts[i]
                changed = True
                break
    return np.array(pts, dtype=float)


class PolygonCurve(ConvexCurve):
    """Convex polygon with strictly counterclockwise vertices; two vertices make a segment."""

    kind = 'polygon'

    def __init__(self, vertices: Sequence[Sequence[float]]):
        pts = np.asarray(vertices, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2 or not np.all(np.isfinite(pts)):
            raise InvalidCurve("polygon needs at least two finite 2D vertices")
        pts = _clean_ring(pts)
        if len(pts) < 2:
            raise InvalidCurve("polygon collapses to a point")
        if len(pts) == 2 and np.allclose(pts[0], pts[1], atol=0.0):
            raise InvalidCurve("polygon collapses to a point")
        if len(pts) >= 3:
            edges = np.roll(pts, -1, axis=0) - pts
            turns = _cross(edges, np.roll(edges, -1, axis=0))
            if np.any(turns <= 0):
                raise InvalidCurve("polygon vertices are not strictly convex in counterclockwise order")
            turning = np.arctan2(turns, np.einsum('ij,ij->i', edges, np.roll(edges, -1, axis=0)))
            if abs(float(turning.sum()) - TWO_PI) > 1e-9:
                raise InvalidCurve("polygon boundary winds more than once")

        edges = np.roll(pts, -1, axis=0) - pts
        beta = reduce_angle(np.arctan2(edges[:, 0], -edges[:, 1]))
        start = int(np.argmin(beta))
        self._vertices = np.roll(pts, -start, axis=0)
        self._beta = np.roll(beta, -start)
        self._vertices.setflags(write=False)
        self._beta.setflags(write=False)

    @classmethod
    def from_points(cls, points) -> 'ConvexCurve':
        return convex_hull_curve(points)

    def __repr__(self):
        return f"PolygonCurve({self._vertices.tolist()})"

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def edge_normals(self) -> np.ndarray:
        """Inward normal angle of edge i (from vertex i to vertex i+1), ascending."""
        return self._beta

    @property
    def kinks(self):
        return tuple(float(b) for b in self._beta)

    @property
    def piecewise_constant(self) -> bool:
        return True

    def support_points(self, thetas):
        t = reduce_angle(np.asarray(thetas, dtype=float))
        m = len(self._vertices)
        idx = np.searchsorted(self._beta, t, side='right') - 1
        idx = np.where(idx < 0, m - 1, idx)
        out = self._vertices[(idx + 1) % m].copy()

        nxt = (idx + 1) % m
        mid = 0.5 * (self._vertices + np.roll(self._vertices, -1, axis=0))
        on_edge = np.abs(angle_diff(t, self._beta[idx])) <= FACET_TOL
        on_next = np.abs(angle_diff(t, self._beta[nxt])) <= FACET_TOL
        out[on_edge] = mid[idx[on_edge]]
        out[on_next] = mid[nxt[on_next]]
        return out

    def area(self, q=_DEFAULT_QUADRATURE) -> float:
        v = self._vertices
        return 0.5 * float(np.sum(_cross(v, np.roll(v, -1, axis=0))))

    def perimeter(self, q=_DEFAULT_QUADRATURE) -> float:
        if len(self._vertices) == 2:
            return 2.0 * float(np.linalg.norm(self._vertices[1] - self._vertices[0]))
        return float(np.sum(np.linalg.norm(np.roll(self._vertices, -1, axis=0) - self._vertices, axis=1)))

    def boundary_polyline(self, size: int = GRID_SIZE) -> np.ndarray:
        return self._vertices.copy()

    def centroid_hint(self):
        return self._vertices.mean(axis=0)

    def diameter(self) -> float:
        """Rotating calipers over the counterclockwise vertex ring."""
        p = self._vertices
        m = len(p)
        if m == 2:
            return float(np.linalg.norm(p[1] - p[0]))
        best = 0.0
        j = 1
        for i in range(m):
            ni = (i + 1) % m
            edge = p[ni] - p[i]
            while _cross(edge, p[(j + 1) % m] - p[i]) > _cross(edge, p[j] - p[i]):
                j = (j + 1) % m
            for a, b in ((i, j), (ni, j), (i, (j + 1) % m)):
                best = max(best, float(np.linalg.norm(p[a] - p[b])))
        return best


def convex_hull_curve(points) -> ConvexCurve:
    """Point, segment or polygon spanned by the given points."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise InvalidCurve("no points given")
    hull = MultiPoint([tuple(p) for p in pts]).convex_hull
    if hull.geom_type == 'Point':
        return PointCurve(pts[0])
    if hull.geom_type == 'Polygon' and hull.area >= DEGENERATE_AREA:
        ring = np.asarray(orient(hull, sign=1.0).exterior.coords)[:-1]
        return PolygonCurve(ring)
    # collinear or nearly so: the segment between the farthest pair
    diff = pts[:, None, :] - pts[None, :, :]
    i, j = np.unravel_index(np.argmax(np.einsum('ijk,ijk->ij', diff, diff)), (len(pts), len(pts)))
    if np.allclose(pts[i], pts[j], atol=0.0):
        return PointCurve(pts[i])
    return PolygonCurve([pts[i], pts[j]])


# ---------------- support-function curves ----------------

class SupportCurve(ConvexCurve):
    """Curve given by its outward support function H(phi)."""

    @abstractmethod
    def support_function(self, phis: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def support_derivative(self, phis: np.ndarray) -> np.ndarray: ...

    def boundary_points(self, phis: np.ndarray) -> np.ndarray:
        phis = np.asarray(phis, dtype=float)
        n = unit_vectors(phis)
        t = np.stack([-np.sin(phis), np.cos(phis)], axis=-1)
        return self.support_function(phis)[:, None] * n + self.support_derivative(phis)[:, None] * t

    def support_points(self, thetas):
        return self.boundary_points(np.asarray(thetas, dtype=float) + math.pi)

    def support_values(self, phis):
        return self.support_function(np.asarray(phis, dtype=float))

    def validate_convexity(self, size: int = GRID_SIZE) -> None:
        phis = angle_grid(size)
        rho = self.curvature_radius(phis)
        worst = int(np.argmin(rho))
        if rho[worst] < -CONVEXITY_TOL:
            raise NotConvex(
                f"support function violates h + h'' >= 0 at phi={phis[worst]:.6g} (value {rho[worst]:.3g})",
                theta=float(phis[worst]), value=float(rho[worst]),
            )


class DiskCurve(SupportCurve):
    kind = 'disk'

    def __init__(self, center, radius: float):
        self.center = _as_point(center)
        if not radius > 0 or not math.isfinite(radius):
            raise InvalidCurve(f"disk radius must be positive, got {radius!r}")
        self.radius = float(radius)

    def __repr__(self):
        return f"DiskCurve({self.center.tolist()}, {self.radius})"

    def support_function(self, phis):
        return self.radius + unit_vectors(phis) @ self.center

    def support_derivative(self, phis):
        phis = np.asarray(phis, dtype=float)
        return -np.sin(phis) * self.center[0] + np.cos(phis) * self.center[1]

    def curvature_radius(self, phis):
        return np.full(np.shape(phis), self.radius)

    def support_points(self, thetas):
        return self.center - self.radius * unit_vectors(thetas)

    def area(self, q=_DEFAULT_QUADRATURE):
        return math.pi * self.radius ** 2

    def perimeter(self, q=_DEFAULT_QUADRATURE):
        return TWO_PI * self.radius

    def centroid_hint(self):
        return self.center.copy()


class HarmonicCurve(SupportCurve):
    """H(phi) = width/2 + sum_k (a_k cos k phi + b_k sin k phi) + <center, n(phi)>."""

    kind = 'cw_harmonics'

    def __init__(self, width: float, coeffs: Sequence[tuple[int, float, float]] = (), center=(0.0, 0.0),
                 validate: bool = True):
        if not width > 0:
            raise InvalidCurve(f"width must be positive, got {width!r}")
        self.width = float(width)
        self.coeffs = tuple((int(k), float(a), float(b)) for k, a, b in coeffs)
        self.center = _as_point(center)
        if validate:
            self.validate_convexity()

    def __repr__(self):
        return f"HarmonicCurve({self.width}, {list(self.coeffs)})"

    def _series(self, phis, order: int) -> np.ndarray:
        phis = np.asarray(phis, dtype=float)
        out = np.zeros_like(phis)
        for k, a, b in self.coeffs:
            c, s = np.cos(k * phis), np.sin(k * phis)
            if order == 0:
                out += a * c + b * s
            elif order == 1:
                out += k * (-a * s + b * c)
            else:
                out += -k * k * (a * c + b * s)
        return out

    def support_function(self, phis):
        return 0.5 * self.width + self._series(phis, 0) + unit_vectors(phis) @ self.center

    def support_derivative(self, phis):
        phis = np.asarray(phis, dtype=float)
        return self._series(phis, 1) - np.sin(phis) * self.center[0] + np.cos(phis) * self.center[1]

    def curvature_radius(self, phis):
        return 0.5 * self.width + self._series(phis, 0) + self._series(phis, 2)


class ReuleauxCurve(SupportCurve):
    """Reuleaux polygon over a regular n-gon (n odd) of diameter `width`."""

    kind = 'reuleaux'

    def __init__(self, n: int, width: float, center=(0.0, 0.0), rotation: float = 0.0):
        if n < 3 or n % 2 == 0:
            raise InvalidParameter(f"Reuleaux polygons need an odd n >= 3, got {n}")
        if not width > 0:
            raise InvalidParameter(f"width must be positive, got {width!r}")
        self.n = int(n)
        self.width = float(width)
        self.center = _as_point(center)
        self.rotation = float(rotation)
        circumradius = self.width / (2.0 * math.cos(math.pi / (2 * self.n)))
        alphas = self.rotation + TWO_PI * np.arange(self.n) / self.n
        self.vertices = self.center + circumradius * unit_vectors(alphas)
        self.vertices.setflags(write=False)

    def __repr__(self):
        return f"ReuleauxCurve(n={self.n}, width={self.width}, center={self.center.tolist()}, rotation={self.rotation})"

    def _classify(self, phis) -> tuple[np.ndarray, np.ndarray]:
        # half-steps of pi/n: even index -> vertex cone, odd index -> arc
        half = np.rint((np.asarray(phis, dtype=float) - self.rotation) / (math.pi / self.n)).astype(np.int64)
        is_vertex = (half % 2) == 0
        vertex_idx = np.mod(half // 2, self.n)
        arc_idx = np.mod((half - self.n) // 2, self.n)
        return is_vertex, np.where(is_vertex, vertex_idx, arc_idx)

    def boundary_points(self, phis):
        phis = np.asarray(phis, dtype=float)
        is_vertex, idx = self._classify(phis)
        base = self.vertices[idx]
        return np.where(is_vertex[:, None], base, base + self.width * unit_vectors(phis))

    def support_function(self, phis):
        return np.einsum('ij,ij->i', self.boundary_points(phis), unit_vectors(phis))

    def support_derivative(self, phis):
        phis = np.asarray(phis, dtype=float)
        t = np.stack([-np.sin(phis), np.cos(phis)], axis=-1)
        return np.einsum('ij,ij->i', self.boundary_points(phis), t)

    def curvature_radius(self, phis):
        is_vertex, _ = self._classify(phis)
        return np.where(is_vertex, 0.0, self.width)

    @property
    def kinks(self):
        phis = self.rotation + (np.arange(2 * self.n) + 0.5) * math.pi / self.n
        return tuple(float(t) for t in reduce_angle(phis - math.pi))

    def perimeter(self, q=_DEFAULT_QUADRATURE):
        return math.pi * self.width

    def area(self, q=_DEFAULT_QUADRATURE):
        # n circular sectors of angle pi/n minus the overlap with the n-gon counted n-1 times
        n, w = self.n, self.width
        polygon = PolygonCurve(self.vertices).area()
        sector = 0.5 * w * w * (math.pi / n)
        tri = 0.5 * w * w * math.sin(math.pi / n)
        return polygon + n * (sector - tri)

    def centroid_hint(self):
        return self.center.copy()


class SampledSupportCurve(SupportCurve):
    """Periodic cubic interpolation of H sampled on a uniform outward-normal grid starting at 0."""

    kind = 'support_samples'

    def __init__(self, samples: Sequence[float], validate: bool = True):
        h = np.asarray(samples, dtype=float).reshape(-1)
        if len(h) < 8 or not np.all(np.isfinite(h)):
            raise InvalidCurve("support samples need at least 8 finite values")
        self.samples = h
        self.samples.setflags(write=False)
        grid = np.arange(len(h) + 1) * (TWO_PI / len(h))
        self._spline = CubicSpline(grid, np.append(h, h[0]), bc_type='periodic')
        if validate:
            self._validate_samples()

    def _validate_samples(self):
        # second differences on the sample grid
        h = self.samples
        step = TWO_PI / len(h)
        rho = h + (np.roll(h, -1) - 2.0 * h + np.roll(h, 1)) / (step * step)
        worst = int(np.argmin(rho))
        if rho[worst] < -CONVEXITY_TOL:
            raise NotConvex(
                f"sampled support function violates h + h'' >= 0 at sample {worst}",
                theta=worst * step, value=float(rho[worst]),
            )

    def support_function(self, phis):
        return self._spline(reduce_angle(phis))

    def support_derivative(self, phis):
        return self._spline(reduce_angle(phis), 1)

    def curvature_radius(self, phis):
        p = reduce_angle(phis)
        return np.maximum(self._spline(p) + self._spline(p, 2), 0.0)

    @property
    def kinks(self):
        # spline knots
        grid = np.arange(len(self.samples)) * (TWO_PI / len(self.samples))
        return tuple(float(t) for t in reduce_angle(grid - math.pi))


# ---------------- derived curves ----------------

class MinkowskiCurve(ConvexCurve):
    """t*A + (1-t)*B."""

    kind = 'minkowski'

    def __init__(self, t: float, a: ConvexCurve, b: ConvexCurve):
        if not 0.0 <= t <= 1.0:
            raise InvalidParameter(f"Minkowski weight must lie in [0, 1], got {t!r}")
        self.t = float(t)
        self.a = a
        self.b = b

    def __repr__(self):
        return f"MinkowskiCurve({self.t}, {self.a!r}, {self.b!r})"

    def support_points(self, thetas):
        return self.t * self.a.support_points(thetas) + (1.0 - self.t) * self.b.support_points(thetas)

    def support_values(self, phis):
        return self.t * self.a.support_values(phis) + (1.0 - self.t) * self.b.support_values(phis)

    @property
    def kinks(self):
        return tuple(sorted(set(self.a.kinks) | set(self.b.kinks)))

    @property
    def piecewise_constant(self):
        return self.a.piecewise_constant and self.b.piecewise_constant

    def curvature_radius(self, phis):
        return self.t * self.a.curvature_radius(phis) + (1.0 - self.t) * self.b.curvature_radius(phis)

    def perimeter(self, q=_DEFAULT_QUADRATURE):
        return self.t * self.a.perimeter(q) + (1.0 - self.t) * self.b.perimeter(q)


class OffsetCurve(ConvexCurve):
    """Minkowski sum of a curve with a disk of radius eps centred at the origin."""

    kind = 'offset'

    def __init__(self, base: ConvexCurve, eps: float):
        if eps < 0:
            raise InvalidParameter(f"offset must be non-negative, got {eps!r}")
        self.base = base
        self.eps = float(eps)

    def __repr__(self):
        return f"OffsetCurve({self.base!r}, {self.eps})"

    def support_points(self, thetas):
        return self.base.support_points(thetas) - self.eps * unit_vectors(thetas)

    def support_values(self, phis):
        return self.base.support_values(phis) + self.eps

    @property
    def kinks(self):
        return self.base.kinks

    @property
    def piecewise_constant(self):
        return self.eps == 0.0 and self.base.piecewise_constant

    def curvature_radius(self, phis):
        return self.base.curvature_radius(phis) + self.eps

    def perimeter(self, q=_DEFAULT_QUADRATURE):
        return self.base.perimeter(q) + TWO_PI * self.eps

    def area(self, q=_DEFAULT_QUADRATURE):
        # Steiner formula
        return self.base.area(q) + self.eps * self.base.perimeter(q) + math.pi * self.eps ** 2

    def centroid_hint(self):
        return self.base.centroid_hint()


class HomotheticCurve(ConvexCurve):
    """center + scale * (base - center)."""

    kind = 'homothety'

    def __init__(self, base: ConvexCurve, center, scale: float):
        if not scale > 0:
            raise InvalidParameter(f"homothety scale must be positive, got {scale!r}")
        self.base = base
        self.center = _as_point(center)
        self.scale = float(scale)

    def __repr__(self):
        return f"HomotheticCurve({self.base!r}, {self.center.tolist()}, {self.scale})"

    def support_points(self, thetas):
        return self.center + self.scale * (self.base.support_points(thetas) - self.center)

    @property
    def kinks(self):
        return self.base.kinks

    @property
    def piecewise_constant(self):
        return self.base.piecewise_constant

    def curvature_radius(self, phis):
        return self.scale * self.base.curvature_radius(phis)

    def area(self, q=_DEFAULT_QUADRATURE):
        return self.scale ** 2 * self.base.area(q)

    def perimeter(self, q=_DEFAULT_QUADRATURE):
        return self.scale * self.base.perimeter(q)

    def centroid_hint(self):
        return self.center + self.scale * (self.base.centroid_hint() - self.center)


def homothety(curve: ConvexCurve, center, scale: float) -> ConvexCurve:
    """Homothetic copy; polygons and points stay in their own variant."""
    c = _as_point(center)
    if isinstance(curve, PolygonCurve):
        return PolygonCurve(c + scale * (curve.vertices - c))
    if isinstance(curve, PointCurve):
        return PointCurve(c + scale * (curve.at - c))
    return HomotheticCurve(curve, c, scale)


# ---------------- queries ----------------

def support_point(curve: ConvexCurve, theta: float) -> np.ndarray:
    return curve.support_point(theta)


def normal_line(curve: ConvexCurve, theta: float) -> DirectedLine:
    return DirectedLine.through(curve.support_point(theta), float(theta))


def supporting_lines(curve: ConvexCurve, theta: float) -> tuple[DirectedLine, DirectedLine]:
    """The two supporting lines with direction u_theta: (right, left)."""
    right = DirectedLine.through(curve.support_point(theta + math.pi / 2), float(theta))
    left = DirectedLine.through(curve.support_point(theta - math.pi / 2), float(theta))
    return right, left


def widths(curve: ConvexCurve, thetas) -> np.ndarray:
    thetas = np.asarray(thetas, dtype=float)
    d = curve.support_points(thetas + math.pi / 2) - curve.support_points(thetas - math.pi / 2)
    return np.abs(np.einsum('ij,ij->i', d, tangent_vectors(thetas)))


def width(curve: ConvexCurve, theta: float) -> float:
    return float(widths(curve, np.array([float(theta)]))[0])


def perimeter(curve: ConvexCurve, q: QuadratureSpec = _DEFAULT_QUADRATURE) -> float:
    return float(curve.perimeter(q))


def area(curve: ConvexCurve, q: QuadratureSpec = _DEFAULT_QUADRATURE) -> float:
    return float(curve.area(q))


def diameter(curve: ConvexCurve, grid: int = GRID_SIZE) -> float:
    if isinstance(curve, PolygonCurve):
        return curve.diameter()
    if isinstance(curve, PointCurve):
        return 0.0
    if isinstance(curve, ReuleauxCurve):
        return curve.width
    if isinstance(curve, DiskCurve):
        return 2.0 * curve.radius

    # widths over a half turn, refined around the best grid direction
    thetas = angle_grid(grid)[: grid // 2]
    w = widths(curve, thetas)
    best = int(np.argmax(w))
    step = math.pi / (grid // 2)
    res = minimize_scalar(
        lambda th: -width(curve, th),
        bounds=(thetas[best] - step, thetas[best] + step),
        method='bounded',
        options={'xatol': 1e-12},
    )
    return float(max(w[best], -res.fun))


def minkowski_combine(t: float, c1: ConvexCurve, c2: ConvexCurve) -> ConvexCurve:
    if not 0.0 <= t <= 1.0:
        raise InvalidParameter(f"Minkowski weight must lie in [0, 1], got {t!r}")
    if t == 1.0:
        return c1
    if t == 0.0:
        return c2
    if isinstance(c1, PointCurve) and isinstance(c2, PointCurve):
        return PointCurve(t * c1.at + (1.0 - t) * c2.at)
    if isinstance(c1, DiskCurve) and isinstance(c2, DiskCurve):
        return DiskCurve(t * c1.center + (1.0 - t) * c2.center, t * c1.radius + (1.0 - t) * c2.radius)
    if c1.piecewise_constant and c2.piecewise_constant:
        pts1, pts2 = _vertex_array(c1), _vertex_array(c2)
        sums = (t * pts1[:, None, :] + (1.0 - t) * pts2[None, :, :]).reshape(-1, 2)
        return convex_hull_curve(sums)
    return MinkowskiCurve(t, c1, c2)


def _vertex_array(curve: ConvexCurve) -> np.ndarray:
    if isinstance(curve, PointCurve):
        return curve.at[None, :]
    if isinstance(curve, PolygonCurve):
        return curve.vertices
    # piecewise-constant support: one point per normal cone
    kinks = np.sort(np.asarray(curve.kinks, dtype=float))
    if len(kinks) == 0:
        return curve.support_points(np.zeros(1))
    mids = 0.5 * (kinks + np.roll(kinks, -1))
    mids[-1] = 0.5 * (kinks[-1] + kinks[0] + TWO_PI)
    return curve.support_points(mids)


def contains(curve: ConvexCurve, point, tol: float = 1e-9, grid: int = GRID_SIZE) -> bool:
    """Closed-body membership; boundary points count as inside."""
    p = _as_point(point)
    if isinstance(curve, PointCurve):
        return bool(np.linalg.norm(p - curve.at) <= tol)
    if isinstance(curve, PolygonCurve):
        v = curve.vertices
        if len(v) == 2:
            d = v[1] - v[0]
            s = np.clip(np.dot(p - v[0], d) / np.dot(d, d), 0.0, 1.0)
            return bool(np.linalg.norm(v[0] + s * d - p) <= tol)
        edges = np.roll(v, -1, axis=0) - v
        lengths = np.linalg.norm(edges, axis=1)
        return bool(np.all(_cross(edges, p - v) / lengths >= -tol))
    if hasattr(curve, 'contains_point'):
        return curve.contains_point(p, tol)
    phis = angle_grid(grid)
    return bool(np.all(unit_vectors(phis) @ p - curve.support_values(phis) <= tol))


def contains_curve(outer: ConvexCurve, inner: ConvexCurve, tol: float = 1e-9, grid: int = GRID_SIZE) -> bool:
    if isinstance(inner, (PointCurve, PolygonCurve)) and isinstance(outer, PolygonCurve):
        pts = inner.vertices if isinstance(inner, PolygonCurve) else inner.at[None, :]
        return all(contains(outer, p, tol) for p in pts)
    phis = angle_grid(grid)
    return bool(np.all(inner.support_values(phis) <= outer.support_values(phis) + tol))


def hausdorff_distance(a: ConvexCurve, b: ConvexCurve, grid: int = GRID_SIZE) -> float:
    phis = angle_grid(grid)
    return float(np.max(np.abs(a.support_values(phis) - b.support_values(phis))))


def support_gap(outer: ConvexCurve, inner: ConvexCurve, grid: int = GRID_SIZE) -> float:
    """min over directions of H_outer - H_inner; positive iff inner stays off the boundary."""
    phis = angle_grid(grid)
    return float(np.min(outer.support_values(phis) - inner.support_values(phis)))
