import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.data.schemas.harness.report_schema import VerificationReport
from core.geometry.clipping import boundary_gap, ray_exit
from core.geometry.constant_width import ConstantWidthBody
from core.geometry.curves import unit_vectors
from core.geometry.pseudometric import interjacent_track, triangle_excess
from core.geometry.quadrature import LineTerm, QuadratureSpec, integrate_line_terms
from core.utils.generate import make_rng

logger = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-3
SEARCH_QUADRATURE = QuadratureSpec(method='fixed', grid_size=1024)
EVALS_PER_START = 200


@dataclass(frozen=True)
class SearchResult:
    triangle: tuple[tuple[float, float], tuple[float, float], tuple[float, float]]
    value: float
    evaluations: int
    boundary_vertices: int


class TriangleExcessSearch:
    """
    Multi-start coordinate descent for the largest triangle excess in a
    constant-width body.

    A vertex is stored as (direction, depth) around an inner centre: depth 1
    puts it on the boundary, depth 0 on the centre.
    """

    def __init__(self, body: ConstantWidthBody, budget: int, seed: int, q: QuadratureSpec = QuadratureSpec()):
        self.body = body
        self.budget = int(budget)
        self.q = q
        self.rng = make_rng(seed, 'triangle-search')
        self.center = body.curve.support_points(np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)).mean(axis=0)
        self.evaluations = 0
        self._track_d = body.curve.track()

    def to_points(self, params: np.ndarray) -> np.ndarray:
        pts = []
        for theta, depth in params.reshape(3, 2):
            direction = unit_vectors(theta)
            reach = ray_exit(self.body.curve, self.center, direction)
            pts.append(self.center + float(np.clip(depth, 0.0, 1.0)) * reach * direction)
        return np.asarray(pts)

    def excess(self, params: np.ndarray) -> float:
        """Fast excess: the interjacent-line integral on a fixed grid."""
        self.evaluations += 1
        a1, a2, a3 = self.to_points(params)
        term = LineTerm(interjacent_track(a1, a2, a3), self._track_d)
        return integrate_line_terms([term], 0.0, math.pi, SEARCH_QUADRATURE).value

    def _random_start(self) -> np.ndarray:
        thetas = self.rng.uniform(0.0, 2.0 * math.pi, 3)
        depths = np.sqrt(self.rng.uniform(0.0, 1.0, 3))
        return np.stack([thetas, depths], axis=1).ravel()

    def _descend(self, start: np.ndarray, value: float, allowance: int) -> tuple[np.ndarray, float]:
        x, best = start.copy(), value
        steps = np.array([0.5, 0.25] * 3)
        used = 0
        while used < allowance and np.max(steps) > 1e-6:
            improved = False
            for i in range(6):
                for sign in (1.0, -1.0):
                    if used >= allowance:
                        break
                    trial = x.copy()
                    trial[i] += sign * steps[i]
                    if i % 2:
                        trial[i] = float(np.clip(trial[i], 0.0, 1.0))
                    v = self.excess(trial)
                    used += 1
                    if v > best:
                        x, best, improved = trial, v, True
                        break
            if not improved:
                steps *= 0.5
        return x, best

    def maximize(self) -> SearchResult:
        starts = max(1, self.budget // EVALS_PER_START)
        best_x, best_v = None, -math.inf
        for _ in range(starts):
            x = self._random_start()
            v = self.excess(x)
            if v > best_v:
                best_x, best_v = x, v
        remaining = max(0, self.budget - self.evaluations)
        if remaining:
            best_x, best_v = self._descend(best_x, best_v, remaining)

        a1, a2, a3 = self.to_points(best_x)
        value = triangle_excess(a1, a2, a3, self.body, self.q).value
        scale = max(1.0, self.body.width)
        on_boundary = sum(1 for p in (a1, a2, a3)
                          if abs(boundary_gap(self.body.curve, p)[0]) <= BOUNDARY_TOL * scale)
        if on_boundary < 2:
            logger.warning("best triangle has only %d vertices near the boundary", on_boundary)
        tri = tuple((float(p[0]), float(p[1])) for p in (a1, a2, a3))
        logger.debug("triangle search: %d evaluations, best excess %.12g", self.evaluations, value)
        return SearchResult(tri, value, self.evaluations, on_boundary)


def maximize_triangle_excess(body: ConstantWidthBody, budget: int, seed: int = 0,
                             q: QuadratureSpec = QuadratureSpec()) -> SearchResult:
    return TriangleExcessSearch(body, budget, seed, q).maximize()


def check_triangle_search(body: ConstantWidthBody, budget: int, seed: int = 0, q: QuadratureSpec = QuadratureSpec(),
                          tolerance: float = 1e-4, instance: Optional[int] = None) -> VerificationReport:
    result = maximize_triangle_excess(body, budget, seed, q)
    return VerificationReport.evaluate(
        'triangle_search', result.value, body.width, tolerance * max(1.0, body.width), seed=seed, instance=instance,
        extra={'evaluations': result.evaluations, 'boundary_vertices': result.boundary_vertices})
