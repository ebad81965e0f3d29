"""
The normal-line pseudometric and the generalized perimeter.

pdist(C1, C2)  = 1/2 ∫_0^{2pi} dist(l_theta(C1), l_theta(C2)) dtheta
pper_D(C)      = 1/2 ∫_0^{2pi} dist(l^r_theta(C), l_theta(D)) + dist(l^l_theta(C), l_theta(D)) dtheta

Against a constant-width D both integrands are pi-periodic, so the half range
∫_0^pi gives the same value.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.errors import ConsistencyFailure
from core.geometry.constant_width import ConstantWidthBody, as_curve
from core.geometry.curves import (
    ConvexCurve,
    DirectedLine,
    PointCurve,
    convex_hull_curve,
    diameter,
    reduce_angle,
    unit_vectors,
)
from core.geometry.quadrature import (
    TWO_PI,
    LineTerm,
    LineTrack,
    QuadratureResult,
    QuadratureSpec,
    integrate_function,
    integrate_line_terms,
)

logger = logging.getLogger(__name__)

Body = ConvexCurve | ConstantWidthBody
TIE_TOL = 1e-12


def exact_if_possible(q: QuadratureSpec, *curves: Body) -> QuadratureSpec:
    """The closed-form method when every curve is piecewise constant, adaptive otherwise."""
    if all(as_curve(c).piecewise_constant for c in curves):
        return q.model_copy(update={'method': 'exact'})
    if q.method == 'exact':
        return q.model_copy(update={'method': 'adaptive'})
    return q


def _range(half_range: bool) -> tuple[float, float, float]:
    # (lo, hi, factor)
    return (0.0, math.pi, 1.0) if half_range else (0.0, TWO_PI, 0.5)


def pdist_terms(c1: Body, c2: Body) -> list[LineTerm]:
    return [LineTerm(as_curve(c1).track(), as_curve(c2).track())]


def pper_terms(d: Body, c: Body) -> list[LineTerm]:
    c, d = as_curve(c), as_curve(d)
    track_d = d.track()
    return [LineTerm(c.track(math.pi / 2), track_d), LineTerm(c.track(-math.pi / 2), track_d)]


def integrate_terms(terms: Sequence[LineTerm], q: QuadratureSpec, half_range: bool = False,
                    signed: bool = False) -> QuadratureResult:
    lo, hi, factor = _range(half_range)
    return integrate_line_terms(terms, lo, hi, q, signed=signed).scaled(factor)


def pdist_estimate(c1: Body, c2: Body, q: QuadratureSpec, half_range: bool = False) -> QuadratureResult:
    return integrate_terms(pdist_terms(c1, c2), q, half_range)


def pdist(c1: Body, c2: Body, q: QuadratureSpec = QuadratureSpec(), half_range: bool = False) -> float:
    return pdist_estimate(c1, c2, q, half_range).value


def point_pdist(point, d: Body, q: QuadratureSpec = QuadratureSpec(), half_range: bool = False) -> float:
    return pdist(PointCurve(point), d, q, half_range)


def signed_line_integral(c1: Body, c2: Body, q: QuadratureSpec = QuadratureSpec()) -> float:
    """Same integral as pdist with the signed distance; vanishes for every pair."""
    if as_curve(c1) is as_curve(c2):
        return 0.0
    return integrate_terms(pdist_terms(c1, c2), q, signed=True).value


def signed_arc_integral(curve: Body, theta1: float, theta2: float,
                        q: QuadratureSpec = QuadratureSpec()) -> tuple[float, float]:
    """
    ∫_{theta1}^{theta2} gamma(theta) . v_theta dtheta by quadrature, and its closed
    form gamma(theta1) . u_theta1 - gamma(theta2) . u_theta2.
    """
    c = as_curve(curve)
    spec = q if q.method != 'exact' else q.model_copy(update={'method': 'adaptive'})

    def f(thetas):
        v = np.stack([np.sin(thetas), -np.cos(thetas)], axis=-1)
        return np.einsum('ij,ij->i', c.support_points(thetas), v)

    value = integrate_function(f, theta1, theta2, c.kinks, spec).value
    u1, u2 = unit_vectors(theta1), unit_vectors(theta2)
    closed = float(c.support_point(theta1) @ u1 - c.support_point(theta2) @ u2)
    return value, closed


def pper_estimate(d: Body, c: Body, q: QuadratureSpec, half_range: bool = False) -> QuadratureResult:
    return integrate_terms(pper_terms(d, c), q, half_range)


def pper(d: Body, c: Body, q: QuadratureSpec = QuadratureSpec(), half_range: bool = False) -> float:
    return pper_estimate(d, c, q, half_range).value


# ---------------- triangles ----------------

def triangle_curve(a1, a2, a3) -> ConvexCurve:
    """The triangle as a curve: polygon, segment or point when degenerate."""
    return convex_hull_curve(np.array([a1, a2, a3], dtype=float))


def interjacent_vertex(vertices: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Index of the median projection on the normal of u_theta; ties go to the smallest index."""
    normals = np.stack([-np.sin(thetas), np.cos(thetas)], axis=-1)
    proj = vertices @ normals.T                      # (3, N)
    med = np.median(proj, axis=0)
    scale = max(1.0, float(np.max(np.abs(vertices))))
    near = np.abs(proj - med) <= TIE_TOL * scale
    return np.argmax(near, axis=0)


def interjacent_line(a1, a2, a3, theta: float) -> DirectedLine:
    vertices = np.array([a1, a2, a3], dtype=float)
    idx = int(interjacent_vertex(vertices, np.array([float(theta)]))[0])
    return DirectedLine.through(vertices[idx], float(theta))


def interjacent_breakpoints(a1, a2, a3) -> list[float]:
    """Directions in [0, pi) where the interjacent line switches vertex."""
    vertices = np.array([a1, a2, a3], dtype=float)
    out = set()
    for i in range(3):
        for j in range(i + 1, 3):
            d = vertices[j] - vertices[i]
            if np.hypot(*d) > 0:
                out.add(float(np.mod(math.atan2(d[1], d[0]), math.pi)))
    return sorted(out)


def interjacent_track(a1, a2, a3) -> LineTrack:
    vertices = np.array([a1, a2, a3], dtype=float)
    kinks = interjacent_breakpoints(a1, a2, a3)
    kinks = kinks + [k + math.pi for k in kinks]

    def points(thetas):
        return vertices[interjacent_vertex(vertices, np.asarray(thetas, dtype=float))]

    return LineTrack(points, tuple(float(k) for k in reduce_angle(np.asarray(kinks))), True)


@dataclass(frozen=True)
class TriangleExcess:
    vertices: tuple[tuple[float, float], tuple[float, float], tuple[float, float]]
    body: Body
    value: float
    lhs_value: float
    rhs_value: float
    breakpoints: tuple[float, ...]


def triangle_excess(a1, a2, a3, body: Body, q: QuadratureSpec = QuadratureSpec()) -> TriangleExcess:
    """
    sum pdist(a_i, D) - pper_D(a1 a2 a3), evaluated from its definition and as
    the integral of dist(l^mid_theta, l_theta(D)); the two must agree.
    """
    d = as_curve(body)
    half = isinstance(body, ConstantWidthBody)
    tri = triangle_curve(a1, a2, a3)
    spec = exact_if_possible(q, d) if q.method == 'exact' else q

    terms = [LineTerm(PointCurve(a).track(), d.track()) for a in (a1, a2, a3)]
    left = integrate_terms(terms, spec, half).value - integrate_terms(pper_terms(d, tri), spec, half).value

    mid_term = [LineTerm(interjacent_track(a1, a2, a3), d.track())]
    if half:
        right = integrate_line_terms(mid_term, 0.0, math.pi, spec).value
    else:
        right = integrate_terms(mid_term, spec, half_range=False).value

    scale = max(1.0, diameter(d))
    if abs(left - right) > 10.0 * q.abs_tol * scale + 1e-12 * scale:
        raise ConsistencyFailure(
            f"triangle excess disagrees between evaluations: {left!r} vs {right!r}")

    verts = tuple((float(p[0]), float(p[1])) for p in np.array([a1, a2, a3], dtype=float))
    return TriangleExcess(verts, body, right, left, right, tuple(interjacent_breakpoints(a1, a2, a3)))
