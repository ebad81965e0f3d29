"""
Convex curves cut by half-planes, and lines crossing convex curves.

Partition faces are always `container ∩ half-planes`; when the container is
curved the result keeps arcs of the container between straight corners.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from core.errors import InvalidParameter
from core.geometry.curves import (
    FACET_TOL,
    GRID_SIZE,
    ConvexCurve,
    PointCurve,
    PolygonCurve,
    _cross,
    angle_grid,
    contains,
    convex_hull_curve,
    reduce_angle,
    unit_vectors,
)
from core.geometry.quadrature import TWO_PI, QuadratureSpec, integrate_function

logger = logging.getLogger(__name__)

_CROSSING_GRID = 1024
_DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass(frozen=True)
class HalfPlane:
    """Closed half-plane n . x <= c."""
    normal: tuple[float, float]
    offset: float

    def __post_init__(self):
        if math.hypot(*self.normal) == 0.0:
            raise InvalidParameter("half-plane normal must be nonzero")

    @classmethod
    def left_of(cls, p, q) -> 'HalfPlane':
        """Points on the left of the directed line p -> q."""
        p = np.asarray(p, dtype=float)
        d = np.asarray(q, dtype=float) - p
        n = np.array([d[1], -d[0]])
        return cls((float(n[0]), float(n[1])), float(n @ p))

    def flipped(self) -> 'HalfPlane':
        return HalfPlane((-self.normal[0], -self.normal[1]), -self.offset)

    def values(self, pts: np.ndarray) -> np.ndarray:
        """Scaled signed distance; <= 0 inside."""
        n = np.asarray(self.normal)
        return (np.asarray(pts, dtype=float) @ n - self.offset) / float(np.linalg.norm(n))

    def contains(self, p, tol: float = 1e-9) -> bool:
        return bool(self.values(np.asarray(p, dtype=float)[None, :])[0] <= tol)

    def as_list(self) -> list[float]:
        return [self.normal[0], self.normal[1], self.offset]


# ---------------- polygon clipping ----------------

def clip_polygon(vertices: np.ndarray, halfplane: HalfPlane) -> np.ndarray:
    """One Sutherland-Hodgman pass of a convex counterclockwise ring."""
    if len(vertices) == 0:
        return vertices
    vals = halfplane.values(vertices)
    out = []
    m = len(vertices)
    for i in range(m):
        cur, nxt = vertices[i], vertices[(i + 1) % m]
        vc, vn = vals[i], vals[(i + 1) % m]
        if vc <= 0:
            out.append(cur)
        if (vc < 0 < vn) or (vn < 0 < vc):
            s = vc / (vc - vn)
            out.append(cur + s * (nxt - cur))
    return np.array(out, dtype=float).reshape(-1, 2)


def _polygon_from_ring(ring: np.ndarray) -> Optional[ConvexCurve]:
    if len(ring) == 0:
        return None
    return convex_hull_curve(ring)


def _bounding_ring(curve: ConvexCurve, grow: float = 1.0) -> np.ndarray:
    h = curve.support_values(np.array([0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi]))
    xmin, xmax, ymin, ymax = -h[2], h[0], -h[3], h[1]
    pad = grow * max(xmax - xmin, ymax - ymin, 1e-9)
    return np.array([[xmin - pad, ymin - pad], [xmax + pad, ymin - pad],
                     [xmax + pad, ymax + pad], [xmin - pad, ymax + pad]])


# ---------------- lines versus curves ----------------

def normal_parameter(curve: ConvexCurve, point, grid: int = GRID_SIZE) -> float:
    """An inward normal angle theta with gamma(theta) at `point` (a boundary point)."""
    return boundary_gap(curve, point, grid)[1]


def boundary_gap(curve: ConvexCurve, point, grid: int = GRID_SIZE) -> tuple[float, float]:
    """
    (min over theta of <p - gamma(theta), u_theta>, minimizing theta).

    For a point of the body the gap is its distance to the boundary; it is
    negative outside.
    """
    p = np.asarray(point, dtype=float)
    if isinstance(curve, PolygonCurve) and len(curve.vertices) >= 3:
        v = curve.vertices
        edges = np.roll(v, -1, axis=0) - v
        dist = _cross(edges, p - v) / np.linalg.norm(edges, axis=1)
        i = int(np.argmin(dist))
        return float(dist[i]), float(curve.edge_normals[i])
    thetas = angle_grid(grid)
    gap = unit_vectors(thetas) @ p - np.einsum('ij,ij->i', curve.support_points(thetas), unit_vectors(thetas))
    best = int(np.argmin(gap))
    step = TWO_PI / grid

    def f(th):
        u = np.array([math.cos(th), math.sin(th)])
        return float(u @ p - curve.support_point(th) @ u)

    res = minimize_scalar(f, bounds=(thetas[best] - step, thetas[best] + step), method='bounded',
                          options={'xatol': 1e-13})
    if res.fun <= gap[best]:
        return float(res.fun), float(reduce_angle(res.x))
    return float(gap[best]), float(reduce_angle(thetas[best]))


def _chord_crossing(curve: ConvexCurve, theta: float, p: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Point where the line meets the boundary near gamma(theta), across a facet if there is one."""
    before = curve.support_point(theta - 1e-10)
    after = curve.support_point(theta + 1e-10)
    if np.linalg.norm(after - before) <= 1e-9:
        return curve.support_point(theta)
    seg = after - before
    denom = _cross(d, seg)
    if denom == 0.0:
        return curve.support_point(theta)
    s = _cross(p - before, d) / denom
    return before + np.clip(s, 0.0, 1.0) * seg


def line_curve_intersection(curve: ConvexCurve, p, d) -> Optional[tuple[float, float, float, float]]:
    """
    Crossings of the line p + t*d with the boundary of a convex curve.

    Returns (t_in, theta_in, t_out, theta_out) with t_in <= t_out, where the
    theta are inward normal parameters of the crossing points, or None when
    the line misses the interior.
    """
    p = np.asarray(p, dtype=float)
    d = np.asarray(d, dtype=float)
    dd = float(d @ d)
    if dd == 0.0:
        raise InvalidParameter("line direction must be nonzero")

    if isinstance(curve, PointCurve):
        return None
    if isinstance(curve, PolygonCurve):
        return _polygon_line_crossing(curve, p, d)

    thetas = angle_grid(_CROSSING_GRID)
    side = _cross(d, curve.support_points(thetas) - p)
    sign = np.sign(side)
    changes = np.nonzero(sign != np.roll(sign, -1))[0]
    if len(changes) < 2:
        return None

    def f(th):
        return float(_cross(d, curve.support_point(th) - p))

    hits = []
    for i in changes:
        lo, hi = thetas[i], thetas[i] + TWO_PI / _CROSSING_GRID
        if f(lo) == 0.0:
            root = lo
        elif f(hi) == 0.0:
            root = hi
        else:
            root = brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)
        point = _chord_crossing(curve, root, p, d)
        hits.append((float((point - p) @ d / dd), float(reduce_angle(root))))

    hits.sort()
    (t_in, th_in), (t_out, th_out) = hits[0], hits[-1]
    if t_out - t_in <= 1e-14 * math.sqrt(dd):
        return None
    return t_in, th_in, t_out, th_out


def _polygon_line_crossing(poly: PolygonCurve, p: np.ndarray, d: np.ndarray):
    # Cyrus-Beck against the edge half-planes
    v = poly.vertices
    if len(v) < 3:
        return None
    edges = np.roll(v, -1, axis=0) - v
    t_in, t_out = -math.inf, math.inf
    th_in = th_out = 0.0
    for i in range(len(v)):
        num = _cross(edges[i], p - v[i])     # >= 0 inside
        den = _cross(edges[i], d)
        if den == 0.0:
            if num < 0:
                return None
            continue
        t = -num / den
        if den > 0:
            if t > t_in:
                t_in, th_in = t, float(poly.edge_normals[i])
        elif t < t_out:
            t_out, th_out = t, float(poly.edge_normals[i])
    if t_in >= t_out:
        return None
    return float(t_in), th_in, float(t_out), th_out


def ray_exit(curve: ConvexCurve, start, direction) -> float:
    """Distance from an inner point along a unit direction to the boundary."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    hit = line_curve_intersection(curve, start, d)
    if hit is None:
        return 0.0
    return max(0.0, hit[2])


# ---------------- clipped curves ----------------

class ClippedCurve(ConvexCurve):
    """
    host ∩ half-planes with at least one arc of the host on its boundary.

    corners[i] -> corners[i+1] is either a straight piece or an arc of the
    host whose inward normal parameters run over arcs[i] = (start, end).
    """

    kind = 'clipped'

    def __init__(self, host: ConvexCurve, halfplanes: Sequence[HalfPlane], corners: np.ndarray,
                 arcs: Sequence[Optional[tuple[float, float]]]):
        self.host = host
        self.halfplanes = tuple(halfplanes)
        self.corners = np.asarray(corners, dtype=float)
        self.corners.setflags(write=False)
        self.arcs = tuple(arcs)
        self._layout()

    def __repr__(self):
        return f"ClippedCurve({self.host!r}, {len(self.halfplanes)} half-planes)"

    def _layout(self):
        m = len(self.corners)
        nxt = np.roll(self.corners, -1, axis=0)
        seg = nxt - self.corners
        starts, spans = [], []
        for i in range(m):
            if self.arcs[i] is None:
                starts.append(float(np.arctan2(seg[i, 0], -seg[i, 1])))
                spans.append(0.0)
            else:
                a, b = self.arcs[i]
                starts.append(a)
                spans.append(float(np.mod(b - a, TWO_PI)))
        bounds = [starts[0]]
        prev_end = starts[0]
        for i in range(m):
            s = prev_end + float(np.mod(starts[i] - prev_end + 1e-9, TWO_PI)) - 1e-9 if i else starts[0]
            s = max(s, prev_end)
            e = s + spans[i]
            if i:
                bounds.append(s)
            bounds.append(e)
            prev_end = e
        bounds.append(starts[0] + TWO_PI)
        self._bounds = np.asarray(bounds)
        self._mids = 0.5 * (self.corners + nxt)

    @property
    def has_arcs(self) -> bool:
        return any(a is not None for a in self.arcs)

    def support_points(self, thetas):
        x = self._bounds[0] + np.mod(np.asarray(thetas, dtype=float) - self._bounds[0], TWO_PI)
        m = len(self.corners)
        j = np.clip(np.searchsorted(self._bounds, x, side='right') - 1, 0, 2 * m - 1)
        piece = j // 2
        in_piece = (j % 2) == 0
        out = self.corners[(piece + 1) % m].copy()

        arc_mask = in_piece & np.array([self.arcs[i] is not None for i in range(m)])[piece]
        if np.any(arc_mask):
            out[arc_mask] = self.host.support_points(x[arc_mask])

        straight = np.array([self.arcs[i] is None for i in range(m)])
        for k in range(m):
            if not straight[k]:
                continue
            start = self._bounds[2 * k]
            hit = np.abs(np.mod(x - start + math.pi, TWO_PI) - math.pi) <= FACET_TOL
            out[hit] = self._mids[k]
        return out

    @property
    def kinks(self):
        own = reduce_angle(self._bounds[:-1])
        return tuple(sorted(set(float(k) for k in own) | set(self.host.kinks)))

    def contains_point(self, p, tol: float = 1e-9) -> bool:
        return contains(self.host, p, tol) and all(h.contains(p, tol) for h in self.halfplanes)

    def _arc_samples(self, i: int, size: int) -> np.ndarray:
        a = self._bounds[2 * i]
        b = self._bounds[2 * i + 1]
        pts = self.host.support_points(np.linspace(a, b, size))
        pts[0], pts[-1] = self.corners[i], self.corners[(i + 1) % len(self.corners)]
        return pts

    def boundary_polyline(self, size: int = GRID_SIZE) -> np.ndarray:
        out = []
        for i in range(len(self.corners)):
            if self.arcs[i] is None:
                out.append(self.corners[i][None, :])
            else:
                span = self._bounds[2 * i + 1] - self._bounds[2 * i]
                count = max(2, int(math.ceil(size * span / TWO_PI)) + 1)
                out.append(self._arc_samples(i, count)[:-1])
        return np.concatenate(out)

    def _arc_integral(self, i: int, q: QuadratureSpec, kind: str) -> float:
        a = self._bounds[2 * i] + math.pi
        b = self._bounds[2 * i + 1] + math.pi
        spec = q if q.method != 'exact' else QuadratureSpec(abs_tol=q.abs_tol)
        if self.host.has_curvature:
            kinks = [k + math.pi for k in self.host.kinks]
            if kind == 'area':
                f = lambda phi: self.host.support_values(phi) * self.host.curvature_radius(phi)
                return 0.5 * integrate_function(f, a, b, kinks, spec).value
            return integrate_function(self.host.curvature_radius, a, b, kinks, spec).value
        pts = self._arc_samples(i, 8 * GRID_SIZE)
        if kind == 'area':
            return 0.5 * float(np.sum(_cross(pts[:-1], pts[1:])))
        return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))

    def area(self, q: QuadratureSpec = _DEFAULT_QUADRATURE) -> float:
        m = len(self.corners)
        nxt = np.roll(self.corners, -1, axis=0)
        total = 0.0
        for i in range(m):
            if self.arcs[i] is None:
                total += 0.5 * float(_cross(self.corners[i], nxt[i]))
            else:
                total += self._arc_integral(i, q, 'area')
        return total

    def perimeter(self, q: QuadratureSpec = _DEFAULT_QUADRATURE) -> float:
        m = len(self.corners)
        nxt = np.roll(self.corners, -1, axis=0)
        total = 0.0
        for i in range(m):
            if self.arcs[i] is None:
                total += float(np.linalg.norm(nxt[i] - self.corners[i]))
            else:
                total += self._arc_integral(i, q, 'length')
        return total

    def centroid_hint(self):
        return self.boundary_polyline(64).mean(axis=0)


def clip(host: ConvexCurve, halfplanes: Sequence[HalfPlane]) -> Optional[ConvexCurve]:
    """host ∩ half-planes, or None when the intersection has no interior."""
    halfplanes = list(halfplanes)
    if isinstance(host, ClippedCurve):
        return clip(host.host, list(host.halfplanes) + halfplanes)
    if not halfplanes:
        return host
    if isinstance(host, PointCurve):
        return host if all(h.contains(host.at) for h in halfplanes) else None
    if isinstance(host, PolygonCurve):
        ring = host.vertices
        for h in halfplanes:
            ring = clip_polygon(ring, h)
        return _polygon_from_ring(ring)

    region = _bounding_ring(host)
    for h in halfplanes:
        region = clip_polygon(region, h)
    if len(region) < 3:
        return None
    return _clip_curved(host, halfplanes, region)


def _clip_curved(host: ConvexCurve, halfplanes: list[HalfPlane], region: np.ndarray) -> Optional[ConvexCurve]:
    m = len(region)
    pieces = []
    for i in range(m):
        s, e = region[i], region[(i + 1) % m]
        hit = line_curve_intersection(host, s, e - s)
        if hit is None:
            continue
        t_in, th_in, t_out, th_out = hit
        if t_out <= 0.0 or t_in >= 1.0:
            continue
        a, b = max(t_in, 0.0), min(t_out, 1.0)
        if b - a <= 1e-12:
            continue
        entry = th_in if a == t_in else None
        exit_ = th_out if b == t_out else None
        pieces.append((s + a * (e - s), s + b * (e - s), entry, exit_))

    if not pieces:
        inside = all(h.contains(host.centroid_hint(), 0.0) for h in halfplanes)
        return host if inside else None

    corners, arcs = [], []
    for k, (pa, pb, _, exit_) in enumerate(pieces):
        corners.append(pa)
        arcs.append(None)
        if exit_ is not None:
            nxt_entry = pieces[(k + 1) % len(pieces)][2]
            if nxt_entry is None:
                logger.debug("clipped boundary leaves the host without re-entering; closing with a chord")
                continue
            corners.append(pb)
            arcs.append((exit_, nxt_entry))

    if not any(a is not None for a in arcs):
        return _polygon_from_ring(np.asarray(corners))
    return ClippedCurve(host, halfplanes, np.asarray(corners), arcs)
