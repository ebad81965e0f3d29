"""
Checks of the total-perimeter bound and of the lemmas behind it.

Every check returns a VerificationReport; violated hypotheses raise, while
a violated conclusion is a failing report.
"""
from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np

from core.data.schemas.harness.report_schema import CheckKind, VerificationReport
from core.errors import ConsistencyFailure, DegenerateTriangle, VerticesOutsideBody
from core.geometry.clipping import boundary_gap
from core.geometry.constant_width import ConstantWidthBody, complete_to_constant_width
from core.geometry.curves import ConvexCurve, PointCurve, contains, convex_hull_curve, diameter
from core.geometry.extension import extend_to_container
from core.geometry.normalize import normalize_degree3
from core.geometry.partition import PlanarPartition, euler_vertex_count, partition_identity_check
from core.geometry.pseudometric import pdist, pper, triangle_curve, triangle_excess
from core.geometry.quadrature import QuadratureSpec

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-6
PIPELINE_TOL = 1e-5


def _scaled(tol: float, length: float) -> float:
    return tol * max(1.0, length)


def check_main_theorem(container: ConvexCurve, bodies: Sequence[ConvexCurve], tolerance: float = DEFAULT_TOL,
                       q: QuadratureSpec = QuadratureSpec(), **fields) -> VerificationReport:
    """
    Total perimeter of k disjoint convex bodies inside a convex container.

    Args:
        container: the convex body C holding all the bodies
        bodies: convex bodies with pairwise disjoint interiors inside C
        tolerance: allowed negative slack, scaled with diam(C)

    Returns:
        Report with lhs = sum per(C_i) and rhs = per(C) + 2(k - 1) diam(C)
    """
    diam = diameter(container)
    lhs = math.fsum(b.perimeter(q) for b in bodies)
    rhs = container.perimeter(q) + 2.0 * (len(bodies) - 1) * diam
    return VerificationReport.evaluate('main_theorem', lhs, rhs, _scaled(tolerance, diam),
                                       extra={'k': len(bodies), 'diameter': diam}, **fields)


def check_theorem_mainp(partition: PlanarPartition, body: ConstantWidthBody, q: QuadratureSpec = QuadratureSpec(),
                        tolerance: float = DEFAULT_TOL, **fields) -> VerificationReport:
    """
    Generalized perimeters of the bodies of a degree-3 partition of a constant-width D.

    Args:
        partition: degree-3 partition of `body` (holes satisfy the hole conditions)
        body: the constant-width container D
        q: quadrature for every pper/pdist integral

    Returns:
        Report with lhs = sum pper_D(C_i) over body faces and rhs = per(D) + 2(k - 1) diam(D);
        `extra` carries the three stages of the bound; a stage out of order fails
        the report and is named in `extra["failed_stage"]`.

    Raises:
        EulerMismatch: the graph has the wrong number of vertices
        ConsistencyFailure: the identity route disagrees with the direct sum
    """
    count = euler_vertex_count(partition)
    diam = body.width
    per_d = body.curve.perimeter(q)
    tol = _scaled(tolerance, diam)

    lhs = math.fsum(pper(body, f.region, q, half_range=True) for f in partition.bodies)
    vertex_pdist = {vid: pdist(PointCurve(partition.point(vid)), body, q, half_range=True)
                    for vid in sorted(partition.vertices)}
    hole_pper = math.fsum(pper(body, h.region, q, half_range=True) for h in partition.holes)
    identity = per_d + math.fsum(vertex_pdist.values()) - hole_pper
    if abs(identity - lhs) > tol:
        raise ConsistencyFailure(f"partition identity gives {identity!r}, direct sum {lhs!r}")

    # the key lemma on each hole trades its pper for the pdist of its vertices
    hole_vertices = {v for h in partition.holes for v in h.vertex_cycle}
    after_key_lemma = (per_d + math.fsum(d for v, d in vertex_pdist.items() if v not in hole_vertices)
                       + math.fsum((len(h.vertex_cycle) - 2) * diam for h in partition.holes))
    after_pdist_bound = per_d + (count - len(hole_vertices)) * diam + math.fsum(
        (len(h.vertex_cycle) - 2) * diam for h in partition.holes)
    rhs = per_d + 2.0 * (partition.k - 1) * diam
    extra = {'k': partition.k, 'l': partition.l, 'vertices': count, 'identity': identity,
             'after_key_lemma': after_key_lemma, 'after_pdist_bound': after_pdist_bound}
    failed_stage = None
    if lhs > after_key_lemma + tol:
        failed_stage = 'key_lemma'
    elif after_key_lemma > after_pdist_bound + tol:
        failed_stage = 'pdist_bound'
    report = VerificationReport.evaluate('theorem_mainp', lhs, rhs, tol, extra=extra, **fields)
    if failed_stage is not None:
        logger.error("theorem_mainp: %s stage broken (%.12g, %.12g, %.12g)", failed_stage, lhs,
                     after_key_lemma, after_pdist_bound)
        return report.model_copy(update={'passed': False, 'detail': f"{failed_stage} stage out of order",
                                         'extra': {**extra, 'failed_stage': failed_stage}})
    return report


def _inside(body: ConstantWidthBody, points: np.ndarray, tol: float) -> None:
    outside = [i for i, p in enumerate(points) if not contains(body.curve, p, tol=tol)]
    if outside:
        raise VerticesOutsideBody(f"polygon vertices {outside} lie outside the body")


def fan_identity_error(vertices: np.ndarray, body: ConstantWidthBody, q: QuadratureSpec) -> float:
    """
    Cutting a polygon into the triangles of a fan from its first vertex:
    sum pper(T_j) = pper(P) + (m - 3) pdist(a_1) + sum_{j=3..m-1} pdist(a_j).
    """
    m = len(vertices)
    pieces = math.fsum(pper(body, triangle_curve(vertices[0], vertices[j], vertices[j + 1]), q, half_range=True)
                       for j in range(1, m - 1))
    whole = pper(body, convex_hull_curve(vertices), q, half_range=True)
    shared = (m - 3) * pdist(PointCurve(vertices[0]), body, q, half_range=True) + math.fsum(
        pdist(PointCurve(vertices[j]), body, q, half_range=True) for j in range(2, m - 1))
    return abs(pieces - whole - shared)


def check_key_lemma(vertices: Sequence[Sequence[float]], body: ConstantWidthBody,
                    q: QuadratureSpec = QuadratureSpec(), tolerance: float = DEFAULT_TOL,
                    **fields) -> VerificationReport:
    """
    sum pdist(a_i, D) <= pper_D(P) + (m - 2) diam(D) for a convex polygon P in D.

    A single point reduces to pdist(v, D) <= diam(D). Triangles are cross-checked
    against the triangle excess, larger polygons against their fan decomposition.
    """
    pts = np.asarray(vertices, dtype=float).reshape(-1, 2)
    diam = body.width
    tol = _scaled(tolerance, diam)
    _inside(body, pts, 1e-9 * max(1.0, diam))
    m = len(pts)
    if m == 1:
        lhs = pdist(PointCurve(pts[0]), body, q, half_range=True)
        return VerificationReport.evaluate('key_lemma', lhs, diam, tol, extra={'m': 1}, **fields)

    lhs = math.fsum(pdist(PointCurve(p), body, q, half_range=True) for p in pts)
    rhs = pper(body, convex_hull_curve(pts), q, half_range=True) + (m - 2) * diam
    extra: dict = {'m': m}
    if m == 3:
        excess = triangle_excess(pts[0], pts[1], pts[2], body, q)
        extra['triangle_excess'] = excess.value
        if abs((lhs - rhs + diam) - excess.value) > tol:
            raise ConsistencyFailure(f"triangle excess {excess.value!r} disagrees with {lhs - rhs + diam!r}")
    elif m >= 4:
        err = fan_identity_error(pts, body, q)
        extra['fan_identity_error'] = err
        if err > tol:
            raise ConsistencyFailure(f"fan decomposition off by {err:.3g}")
    return VerificationReport.evaluate('key_lemma', lhs, rhs, tol, extra=extra, **fields)


def bisector_points(x1, x2, x3, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Points at distance t from x1 and x2 along the interior angle bisectors there."""
    x1, x2, x3 = (np.asarray(p, dtype=float) for p in (x1, x2, x3))

    def bisector(at, p, r):
        a = (p - at) / np.linalg.norm(p - at)
        b = (r - at) / np.linalg.norm(r - at)
        d = a + b
        return d / np.linalg.norm(d)

    return x1 + t * bisector(x1, x2, x3), x2 + t * bisector(x2, x1, x3)


def check_balitskiy(x1, x2, x3, t: float, **fields) -> VerificationReport:
    """
    |y1 y2| > |x1 y1| = t once t reaches half the perimeter of x1 x2 x3.

    Below half the perimeter the comparison is only reported.
    """
    pts = np.asarray([x1, x2, x3], dtype=float)
    sides = [float(np.linalg.norm(pts[i] - pts[(i + 1) % 3])) for i in range(3)]
    cross = (pts[1, 0] - pts[0, 0]) * (pts[2, 1] - pts[0, 1]) - (pts[1, 1] - pts[0, 1]) * (pts[2, 0] - pts[0, 0])
    if min(sides) <= 1e-12 or abs(cross) <= 1e-12 * max(sides) ** 2:
        raise DegenerateTriangle("Balitskiy check needs a nondegenerate triangle")
    half_per = 0.5 * sum(sides)
    y1, y2 = bisector_points(*pts, t)
    gap = float(np.linalg.norm(y1 - y2))
    kind = CheckKind.STRICT if t >= half_per else CheckKind.REPORT
    return VerificationReport.evaluate('balitskiy', t, gap, 0.0, kind,
                                       extra={'half_perimeter': half_per}, **fields)


def check_pdist_diam(point, body: ConstantWidthBody, q: QuadratureSpec = QuadratureSpec(),
                     tolerance: float = DEFAULT_TOL, boundary_tol: float = 1e-9, **fields) -> VerificationReport:
    """
    pdist(v, D) against diam(D): equal on the boundary, smaller inside, larger outside.
    """
    p = np.asarray(point, dtype=float)
    diam = body.width
    value = pdist(PointCurve(p), body, q, half_range=True)
    gap, _ = boundary_gap(body.curve, p)
    if abs(gap) <= boundary_tol * max(1.0, diam):
        location = 'boundary'
        report = VerificationReport.evaluate('pdist_diam', value, diam, _scaled(tolerance, diam),
                                             CheckKind.IDENTITY, **fields)
    elif gap > 0:
        location = 'interior'
        report = VerificationReport.evaluate('pdist_diam', value, diam, 0.0, CheckKind.STRICT, **fields)
    else:
        location = 'exterior'
        report = VerificationReport.evaluate('pdist_diam', diam, value, 0.0, CheckKind.STRICT, **fields)
    return report.model_copy(update={'detail': location, 'extra': {'depth': gap}})


def check_partition_identity(partition: PlanarPartition, reference: ConvexCurve | ConstantWidthBody,
                             q: QuadratureSpec = QuadratureSpec(), tolerance: float = DEFAULT_TOL,
                             **fields) -> VerificationReport:
    return partition_identity_check(partition, reference, q, tolerance).model_copy(update=fields)


def check_pipeline(partition: PlanarPartition, q: QuadratureSpec = QuadratureSpec(),
                   tolerance: float = PIPELINE_TOL, completion_tol: float = 1e-6,
                   **fields) -> VerificationReport:
    """
    The whole reduction on a partition of a polygon D: complete D to D' of
    constant width, extend the partition to D', normalize it, bound its
    generalized perimeters, and carry the bound back to D.

    The report compares sum per(C_i) over the bodies of the original partition
    with per(D) + 2(k - 1) diam(D) - 2 sum l_j, the bound this chain implies.

    Raises:
        ExtensionFailure: the partition cannot be extended to D'
        ConsistencyFailure: the chain of bounds is broken somewhere
    """
    d = partition.container
    d_prime = complete_to_constant_width(d, tolerance=completion_tol)
    extension = extend_to_container(partition, d_prime, q)
    normalized = normalize_degree3(extension.extended)
    mainp = check_theorem_mainp(normalized, d_prime, q, tolerance)

    diam = diameter(d)
    added = extension.total_added_length
    per_d = d.perimeter(q)
    per_d_prime = d_prime.curve.perimeter(q)
    lhs = math.fsum(f.region.perimeter(q) for f in partition.bodies)
    via_pper = mainp.lhs + per_d - per_d_prime - 2.0 * added
    rhs = per_d + 2.0 * (partition.k - 1) * diam - 2.0 * added
    tol = _scaled(tolerance, diam)
    if lhs > via_pper + tol:
        raise ConsistencyFailure(f"perimeters {lhs!r} exceed the generalized-perimeter route {via_pper!r}")
    report = VerificationReport.evaluate(
        'pipeline', lhs, rhs, tol,
        extra={'k': partition.k, 'added_length': added, 'via_pper': via_pper,
               'diameter_drift': abs(d_prime.width - diam), 'extension_error': extension.identity_error},
        **fields)
    if not mainp.passed:
        logger.error("pipeline: generalized-perimeter bound failed on the completed container")
        return report.model_copy(update={'passed': False, 'detail': mainp.detail or 'theorem_mainp failed'})
    return report
