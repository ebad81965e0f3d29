"""
Quadrature engines for integrals over directions theta.

Every functional of the library is an integral of distances between lines of
direction u_theta. A line family is described by a LineTrack (base points as a
function of theta plus the angles where that function is not smooth); an
integrand is a weighted sum of LineTerms |(a(theta) - b(theta)) . v_theta|.

Three methods:
  exact    - closed form per panel; every track must be piecewise constant
  adaptive - vectorized adaptive Simpson with Richardson correction
  fixed    - composite Simpson with a fixed density of nodes
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from core.errors import IncompatibleMethod, QuadratureFailure

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
# initial panels per full turn for the adaptive engine
_SEED_PANELS = 64


class QuadratureSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    method: Literal['exact', 'adaptive', 'fixed'] = 'adaptive'
    abs_tol: float = Field(1e-10, gt=0)
    max_subdivisions: int = Field(200_000, gt=0)
    grid_size: int = Field(4096, ge=8)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    panels: int

    def __add__(self, other: 'QuadratureResult') -> 'QuadratureResult':
        return QuadratureResult(self.value + other.value, self.error + other.error, self.panels + other.panels)

    def scaled(self, factor: float) -> 'QuadratureResult':
        return QuadratureResult(self.value * factor, self.error * abs(factor), self.panels)


@dataclass(frozen=True)
class LineTrack:
    """Base points of a family of lines with direction u_theta."""
    points: Callable[[np.ndarray], np.ndarray]
    kinks: tuple[float, ...]
    piecewise_constant: bool


@dataclass(frozen=True)
class LineTerm:
    a: LineTrack
    b: LineTrack
    weight: float = 1.0


def tangent_vectors(thetas: np.ndarray) -> np.ndarray:
    # v_theta: u_theta rotated a quarter turn clockwise
    return np.stack([np.sin(thetas), -np.cos(thetas)], axis=-1)


def breakpoints_in(kinks: Sequence[float], lo: float, hi: float) -> np.ndarray:
    """All lo < k + 2*pi*j < hi for the given kinks, sorted, with lo and hi at the ends."""
    if not kinks:
        return np.array([lo, hi])
    base = np.mod(np.asarray(kinks, dtype=float), TWO_PI)
    j_lo = math.floor(lo / TWO_PI) - 1
    j_hi = math.ceil(hi / TWO_PI) + 1
    shifts = TWO_PI * np.arange(j_lo, j_hi + 1)
    cand = (base[None, :] + shifts[:, None]).ravel()
    inner = cand[(cand > lo) & (cand < hi)]
    pts = np.unique(np.concatenate([[lo, hi], inner]))
    # merge breakpoints closer than round-off
    keep = np.concatenate([[True], np.diff(pts) > 1e-14 * max(1.0, abs(hi - lo))])
    pts = pts[keep]
    pts[-1] = hi
    return pts


def _collect_kinks(terms: Sequence[LineTerm]) -> list[float]:
    kinks: list[float] = []
    for term in terms:
        kinks.extend(term.a.kinks)
        kinks.extend(term.b.kinks)
    return kinks


def line_integrand(terms: Sequence[LineTerm], signed: bool = False) -> Callable[[np.ndarray], np.ndarray]:
    def f(thetas: np.ndarray) -> np.ndarray:
        v = tangent_vectors(thetas)
        total = np.zeros_like(thetas, dtype=float)
        for term in terms:
            d = term.a.points(thetas) - term.b.points(thetas)
            proj = np.einsum('ij,ij->i', d, v)
            # signed distance is measured along u_theta rotated +pi/2, i.e. -v_theta
            total += term.weight * (-proj if signed else np.abs(proj))
        return total
    return f


# ---------------- exact piecewise ----------------

def _abs_sine_primitive(s: np.ndarray) -> np.ndarray:
    # continuous primitive of |sin s|
    k = np.floor(s / math.pi)
    return 2.0 * k + 1.0 - np.cos(s - k * math.pi)


def _exact_line_terms(terms: Sequence[LineTerm], lo: float, hi: float, signed: bool) -> QuadratureResult:
    for term in terms:
        if not (term.a.piecewise_constant and term.b.piecewise_constant):
            raise IncompatibleMethod("exact quadrature needs polygon or point curves only")

    pts = breakpoints_in(_collect_kinks(terms), lo, hi)
    p, q = pts[:-1], pts[1:]
    mid = 0.5 * (p + q)
    total = np.zeros_like(mid)
    for term in terms:
        d = term.a.points(mid) - term.b.points(mid)
        if signed:
            # integral of -d.v_theta = -dx sin + dy cos
            part = d[:, 0] * (np.cos(q) - np.cos(p)) + d[:, 1] * (np.sin(q) - np.sin(p))
        else:
            radius = np.hypot(d[:, 0], d[:, 1])
            alpha = np.arctan2(d[:, 1], d[:, 0])
            part = radius * (_abs_sine_primitive(q - alpha) - _abs_sine_primitive(p - alpha))
        total += term.weight * part
    return QuadratureResult(math.fsum(total.tolist()), 0.0, int(len(mid)))


# ---------------- adaptive Simpson ----------------

def _seed_panels(breaks: np.ndarray, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    starts, ends = [], []
    max_len = TWO_PI / _SEED_PANELS
    for a, b in zip(breaks[:-1], breaks[1:]):
        count = max(1, int(math.ceil((b - a) / max_len)))
        edges = np.linspace(a, b, count + 1)
        starts.append(edges[:-1])
        ends.append(edges[1:])
    return np.concatenate(starts), np.concatenate(ends)


def _adaptive(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, kinks: Sequence[float],
              spec: QuadratureSpec) -> QuadratureResult:
    if hi <= lo:
        return QuadratureResult(0.0, 0.0, 0)

    a, b = _seed_panels(breakpoints_in(kinks, lo, hi), lo, hi)
    density = spec.abs_tol / (hi - lo)
    min_width = 1e-13 * (hi - lo)
    accepted: list[np.ndarray] = []
    errors: list[np.ndarray] = []
    evaluated = 0

    while a.size:
        m = 0.5 * (a + b)
        nodes = np.concatenate([a, 0.5 * (a + m), m, 0.5 * (m + b), b])
        values = f(nodes).reshape(5, -1)
        fa, flm, fm, frm, fb = values
        h = b - a
        coarse = h / 6.0 * (fa + 4.0 * fm + fb)
        fine = h / 12.0 * (fa + 4.0 * flm + 2.0 * fm + 4.0 * frm + fb)
        err = np.abs(fine - coarse) / 15.0
        done = (err <= density * h) | (h <= min_width)

        accepted.append(fine[done] + (fine[done] - coarse[done]) / 15.0)
        errors.append(err[done])
        evaluated += int(a.size)

        if evaluated > spec.max_subdivisions:
            estimate = math.fsum(np.concatenate(accepted).tolist())
            raise QuadratureFailure(
                f"adaptive quadrature exceeded {spec.max_subdivisions} panels",
                estimate=estimate,
                error=float(np.sum(np.concatenate(errors))) + float(np.sum(err[~done])),
            )

        todo_a, todo_m, todo_b = a[~done], m[~done], b[~done]
        a = np.concatenate([todo_a, todo_m])
        b = np.concatenate([todo_m, todo_b])
        # keep a fixed, position-based order so sums are reproducible
        order = np.argsort(a, kind='stable')
        a, b = a[order], b[order]

    value = math.fsum(np.concatenate(accepted).tolist())
    error = float(np.sum(np.concatenate(errors)))
    logger.debug("adaptive quadrature on [%g, %g]: %d panels, error %.3g", lo, hi, evaluated, error)
    return QuadratureResult(value, error, evaluated)


# ---------------- fixed grid ----------------

def _fixed(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, kinks: Sequence[float],
           spec: QuadratureSpec) -> QuadratureResult:
    if hi <= lo:
        return QuadratureResult(0.0, 0.0, 0)
    breaks = breakpoints_in(kinks, lo, hi)
    parts, coarse_parts = [], []
    panels = 0
    for a, b in zip(breaks[:-1], breaks[1:]):
        n = max(2, int(math.ceil(spec.grid_size * (b - a) / TWO_PI)))
        n += n % 2
        x = np.linspace(a, b, n + 1)
        y = f(x)
        h = (b - a) / n
        parts.append(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))
        if n >= 4 and n % 4 == 0:
            y2 = y[::2]
            h2 = 2.0 * h
            coarse_parts.append(h2 / 3.0 * (y2[0] + y2[-1] + 4.0 * y2[1:-1:2].sum() + 2.0 * y2[2:-1:2].sum()))
        else:
            coarse_parts.append(h * (0.5 * y[0] + y[1:-1].sum() + 0.5 * y[-1]))
        panels += n
    value = math.fsum(parts)
    error = abs(value - math.fsum(coarse_parts)) / 15.0
    return QuadratureResult(value, error, panels)


# ---------------- public entry points ----------------

def integrate_function(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                       kinks: Sequence[float], spec: QuadratureSpec) -> QuadratureResult:
    """Integrate a vectorized function whose non-smooth points are among `kinks` (mod 2*pi)."""
    if spec.method == 'exact':
        raise IncompatibleMethod("exact quadrature is only defined for line-distance integrands")
    if spec.method == 'fixed':
        return _fixed(f, lo, hi, kinks, spec)
    return _adaptive(f, lo, hi, kinks, spec)


def integrate_line_terms(terms: Sequence[LineTerm], lo: float, hi: float, spec: QuadratureSpec,
                         signed: bool = False) -> QuadratureResult:
    """Integral over [lo, hi] of sum_w w * dist(line a(theta), line b(theta))."""
    if not terms:
        return QuadratureResult(0.0, 0.0, 0)
    if spec.method == 'exact':
        return _exact_line_terms(terms, lo, hi, signed)
    return integrate_function(line_integrand(terms, signed), lo, hi, _collect_kinks(terms), spec)


def all_piecewise_constant(tracks: Sequence[LineTrack]) -> bool:
    return all(t.piecewise_constant for t in tracks)
