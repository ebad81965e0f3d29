"""Construction, validation, smoothing and completion of constant-width bodies."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.errors import ConvergenceFailure, InvalidCurve, InvalidParameter
from core.geometry.curves import (
    GRID_SIZE,
    ConvexCurve,
    HarmonicCurve,
    OffsetCurve,
    PointCurve,
    ReuleauxCurve,
    angle_grid,
    diameter,
    widths,
)
from core.geometry.disk_polygon import CompletionCurve, seed_points

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-6
DEFAULT_MAX_ITERATIONS = 10_000
_REFINE_BATCH = 64


@dataclass(frozen=True, eq=False)
class ConstantWidthBody:
    curve: ConvexCurve
    width: float
    tolerance: float

    @property
    def diameter(self) -> float:
        return self.width

    def __repr__(self):
        return f"ConstantWidthBody({self.curve!r}, width={self.width})"


@dataclass(frozen=True)
class WidthReport:
    is_constant: bool
    width: float
    max_deficit: float
    min_width: float
    max_width: float


def as_curve(body: ConvexCurve | ConstantWidthBody) -> ConvexCurve:
    return body.curve if isinstance(body, ConstantWidthBody) else body


def is_constant_width(curve: ConvexCurve | ConstantWidthBody, tol: float = 1e-9,
                      grid: int = GRID_SIZE) -> WidthReport:
    """Scan widths over a half turn; the deficit is the spread max - min."""
    w = widths(as_curve(curve), angle_grid(grid)[: grid // 2])
    lo, hi = float(np.min(w)), float(np.max(w))
    deficit = hi - lo
    return WidthReport(deficit <= tol and lo > 0.0, float(np.median(w)), deficit, lo, hi)


def validate_constant_width(curve: ConvexCurve, tol: float = 1e-9, grid: int = GRID_SIZE) -> ConstantWidthBody:
    report = is_constant_width(curve, tol, grid)
    if not report.is_constant:
        raise InvalidCurve(f"curve is not of constant width: widths range over [{report.min_width:.12g}, "
                           f"{report.max_width:.12g}]")
    return ConstantWidthBody(curve, report.width, tol)


def support_continuity_ratio(body: ConstantWidthBody, grid: int = GRID_SIZE) -> float:
    """
    Largest jump between consecutive grid support points, relative to width * step.

    Stays at or below 1 for strictly convex bodies whose curvature radius is
    bounded by the width; a straight edge shows up as a jump far above 1.
    """
    pts = body.curve.support_points(angle_grid(grid))
    jumps = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
    return float(np.max(jumps) / (body.width * (2.0 * math.pi / grid)))


def reuleaux_polygon(n: int, width: float, center=(0.0, 0.0), rotation: float = 0.0) -> ConstantWidthBody:
    curve = ReuleauxCurve(n, width, center, rotation)
    return validate_constant_width(curve, tol=1e-9)


def cw_from_harmonics(width: float, coeffs: Sequence[tuple[int, float, float]] = (),
                      center=(0.0, 0.0)) -> ConstantWidthBody:
    for k, _, _ in coeffs:
        if int(k) < 3 or int(k) % 2 == 0:
            raise InvalidParameter(f"harmonic orders must be odd and at least 3, got {k}")
    curve = HarmonicCurve(width, coeffs, center)
    return ConstantWidthBody(curve, float(width), 1e-10)


def smooth_approx(body: ConstantWidthBody, eps: float) -> ConstantWidthBody:
    """Minkowski sum with a disk of radius eps; curvature radius becomes at least eps."""
    if eps < 0:
        raise InvalidParameter(f"eps must be non-negative, got {eps!r}")
    if eps == 0:
        return body
    return ConstantWidthBody(OffsetCurve(body.curve, eps), body.width + 2.0 * eps, body.tolerance)


def complete_to_constant_width(curve: ConvexCurve, tolerance: float = DEFAULT_TOLERANCE,
                               max_iterations: int = DEFAULT_MAX_ITERATIONS,
                               grid: int = GRID_SIZE) -> ConstantWidthBody:
    """
    A body of constant width diam(curve) containing the curve.

    Curves that already have constant width are returned unchanged. Otherwise
    the disk polygon of a finite point set X on the curve induces the
    completion; for curved inputs X is refined with the support points of
    every direction where the curve still sticks out.
    """
    report = is_constant_width(curve, tolerance, grid)
    if report.is_constant:
        logger.debug("completion: input already has constant width %.12g", report.width)
        return ConstantWidthBody(curve, report.width, tolerance)

    if isinstance(curve, PointCurve):
        raise InvalidParameter("cannot complete a single point: diameter is zero")
    d = diameter(curve, grid)
    if not d > 0:
        raise InvalidParameter("cannot complete a curve of zero diameter")

    phis = angle_grid(grid)
    target = curve.support_values(phis)
    points = seed_points(curve)

    for iteration in range(max_iterations):
        completion = CompletionCurve(points, d)
        gaps = completion.support_values(phis) - target
        worst = float(np.min(gaps))
        logger.debug("completion iteration %d: %d points, worst containment gap %.3g",
                     iteration, len(points), worst)
        if worst >= -tolerance:
            break
        bad = np.argsort(gaps)[:_REFINE_BATCH]
        bad = bad[gaps[bad] < -tolerance]
        points = np.concatenate([points, curve.support_points(phis[bad] + math.pi)])
    else:
        raise ConvergenceFailure(f"completion did not contain the curve after {max_iterations} iterations")

    check = is_constant_width(completion, tolerance, grid)
    if check.max_deficit > tolerance:
        raise ConvergenceFailure(f"completion width deficit {check.max_deficit:.3g} exceeds {tolerance:.3g}")
    return ConstantWidthBody(completion, d, tolerance)
