"""
Seeded instance generators for the verification harness.

Every generator draws from its own `make_rng(seed, kind, ...)` stream, so a
scenario depends only on its seed and parameters.
"""
from __future__ import annotations

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import Voronoi
from shapely.geometry import Point as ShapelyPoint, Polygon as ShapelyPolygon

from core.data.schemas.geometry.curve_schema import curve_to_schema
from core.data.schemas.geometry.partition_schema import PartitionSchema
from core.data.schemas.harness.scenario_schema import (
    DisjointBodiesPayload,
    PartitionPayload,
    PolygonInBodyPayload,
    ScenarioKind,
    ScenarioSchema,
    TriangleFamilyPayload,
)
from core.errors import DegenerateInstance, InvalidParameter, InvalidPartition
from core.geometry.clipping import HalfPlane, clip
from core.geometry.constant_width import (
    ConstantWidthBody,
    as_curve,
    cw_from_harmonics,
    reuleaux_polygon,
    validate_constant_width,
)
from core.geometry.curves import (
    ConvexCurve,
    DiskCurve,
    PointCurve,
    PolygonCurve,
    contains,
    convex_hull_curve,
    homothety,
)
from core.geometry.normalize import normalize_degree3
from core.geometry.partition import FaceLabel, PlanarPartition, build_partition, validate
from core.utils.generate import make_rng, random_unit_vector

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 50
MIN_FACE_SHARE = 2e-3
SHRINK_RANGE = (0.3, 1.0)

Region = tuple[list[HalfPlane], FaceLabel]


# ---------------- helpers ----------------

def _shape(curve: ConvexCurve, size: int = 512) -> ShapelyPolygon:
    return ShapelyPolygon(curve.boundary_polyline(size))


def centroid(curve: ConvexCurve) -> np.ndarray:
    if isinstance(curve, PointCurve):
        return curve.at.copy()
    c = _shape(curve).centroid
    return np.array([c.x, c.y])


def sample_inside(curve: ConvexCurve, rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform points of the body by rejection from its bounding box."""
    xmin, ymin, xmax, ymax = _shape(curve, 256).bounds
    out = []
    while len(out) < count:
        p = np.array([rng.uniform(xmin, xmax), rng.uniform(ymin, ymax)])
        if contains(curve, p, tol=-1e-9):
            out.append(p)
    return np.asarray(out).reshape(-1, 2)


def random_cw_body(rng: np.random.Generator, width: Optional[float] = None) -> ConstantWidthBody:
    """A Reuleaux polygon, a disk or a harmonic body of constant width."""
    w = float(width if width is not None else rng.uniform(0.5, 2.0))
    kind = rng.integers(0, 3)
    if kind == 0:
        n = int(rng.choice([3, 5, 7]))
        return reuleaux_polygon(n, w, (0.0, 0.0), float(rng.uniform(0.0, 2.0 * math.pi)))
    if kind == 1:
        return validate_constant_width(DiskCurve((0.0, 0.0), 0.5 * w))
    a3 = 0.04 * w * random_unit_vector(rng) * rng.uniform(0.0, 1.0)
    a5 = 0.005 * w * random_unit_vector(rng) * rng.uniform(0.0, 1.0)
    return cw_from_harmonics(w, [(3, float(a3[0]), float(a3[1])), (5, float(a5[0]), float(a5[1]))])


def random_polygon(rng: np.random.Generator, vertices: int, radius: float = 1.0) -> PolygonCurve:
    while True:
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, vertices))
        radii = radius * rng.uniform(0.5, 1.0, vertices)
        pts = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)
        curve = convex_hull_curve(pts)
        if isinstance(curve, PolygonCurve) and len(curve.vertices) >= 3:
            return curve


# ---------------- disjoint bodies ----------------

def voronoi_cells(container: ConvexCurve, sites: np.ndarray) -> list[ConvexCurve]:
    """Cells of the Voronoi diagram of `sites` clipped to the container."""
    if len(sites) == 1:
        return [container]
    xmin, ymin, xmax, ymax = _shape(container, 256).bounds
    span = max(xmax - xmin, ymax - ymin)
    cx, cy = 0.5 * (xmin + xmax), 0.5 * (ymin + ymax)
    far = np.array([[cx - 10 * span, cy - 10 * span], [cx + 10 * span, cy - 10 * span],
                    [cx + 10 * span, cy + 10 * span], [cx - 10 * span, cy + 10 * span]])
    vor = Voronoi(np.vstack([sites, far]))
    k = len(sites)
    neighbours: list[set[int]] = [set() for _ in range(k)]
    for i, j in vor.ridge_points:
        if i < k and j < k:
            neighbours[i].add(int(j))
            neighbours[j].add(int(i))
    cells = []
    for i in range(k):
        hps = []
        for j in sorted(neighbours[i]):
            n = sites[j] - sites[i]
            hps.append(HalfPlane((float(n[0]), float(n[1])), float(0.5 * (sites[j] @ sites[j] - sites[i] @ sites[i]))))
        cell = clip(container, hps)
        if cell is None or cell.area() <= 1e-12:
            raise DegenerateInstance(f"Voronoi cell {i} collapsed")
        cells.append(cell)
    return cells


def disjoint_bodies(seed: int, k: int, container: ConvexCurve) -> list[ConvexCurve]:
    if k < 1:
        raise InvalidParameter(f"need at least one body, got k={k}")
    rng = make_rng(seed, 'disjoint-bodies', k)
    sites = sample_inside(container, rng, k)
    cells = voronoi_cells(container, sites)
    factors = rng.uniform(*SHRINK_RANGE, size=k)
    bodies = []
    for cell, factor in zip(cells, factors):
        bodies.append(homothety(cell, centroid(cell), float(factor)))
    assert_disjoint(bodies)
    return bodies


def assert_disjoint(bodies: Sequence[ConvexCurve], tol: float = 1e-10) -> None:
    shapes = [_shape(b) for b in bodies]
    for i in range(len(shapes)):
        for j in range(i + 1, len(shapes)):
            overlap = shapes[i].intersection(shapes[j]).area
            if overlap > tol:
                raise DegenerateInstance(f"bodies {i} and {j} overlap by area {overlap:.3g}")


def gen_disjoint_bodies(seed: int, k: int, container: ConvexCurve) -> ScenarioSchema:
    bodies = disjoint_bodies(seed, k, container)
    payload = DisjointBodiesPayload(container=curve_to_schema(container),
                                    bodies=[curve_to_schema(b) for b in bodies])
    return ScenarioSchema(seed=seed, kind=ScenarioKind.DISJOINT_BODIES, params={'k': k}, payload=payload)


# ---------------- partitions ----------------

def _face_area(container: ConvexCurve, region: Region) -> float:
    piece = clip(container, region[0])
    return 0.0 if piece is None else float(piece.area())


def _split(container: ConvexCurve, regions: list[Region], index: int, a: np.ndarray, b: np.ndarray) -> list[Region]:
    hps, label = regions[index]
    left = (hps + [HalfPlane.left_of(a, b)], label)
    right = (hps + [HalfPlane.left_of(b, a)], label)
    return regions[:index] + [left, right] + regions[index + 1:]


def chord_regions(container: ConvexCurve, rng: np.random.Generator, cuts: int,
                  full_lines: bool = False) -> list[Region]:
    """
    Random straight cuts. Each cut splits the largest face through a random
    inner point; with `full_lines` every cut is a line across the whole
    container, splitting every face it meets.
    """
    total = container.area()
    regions: list[Region] = [([], FaceLabel.BODY)]
    for _ in range(cuts):
        for _attempt in range(MAX_ATTEMPTS):
            areas = [_face_area(container, r) for r in regions]
            target = int(np.argmax(areas))
            face = clip(container, regions[target][0])
            p = sample_inside(face, rng, 1)[0]
            d = random_unit_vector(rng)
            a, b = p, p + d
            if full_lines:
                trial = []
                for r in regions:
                    pieces = [(r[0] + [HalfPlane.left_of(a, b)], r[1]), (r[0] + [HalfPlane.left_of(b, a)], r[1])]
                    kept = [x for x in pieces if _face_area(container, x) > 0.0]
                    trial.extend(kept)
            else:
                trial = _split(container, regions, target, a, b)
            if min(_face_area(container, r) for r in trial) >= MIN_FACE_SHARE * total:
                regions = trial
                break
        else:
            raise DegenerateInstance("could not place a cut without creating a sliver face")
    return regions


def _pinwheel(face_hps: list[HalfPlane], hole: np.ndarray) -> list[Region]:
    """A convex hole inside a face and the convex pieces around it."""
    m = len(hole)
    out: list[Region] = [(face_hps + [HalfPlane.left_of(hole[i], hole[(i + 1) % m]) for i in range(m)],
                          FaceLabel.HOLE)]
    for i in range(m):
        a, b = hole[i], hole[(i + 1) % m]
        prev = hole[i - 1]
        out.append((face_hps + [HalfPlane.left_of(b, a), HalfPlane.left_of(prev, a)], FaceLabel.BODY))
    return out


def insert_holes(container: ConvexCurve, regions: list[Region], rng: np.random.Generator, holes: int) -> list[Region]:
    """Put a small convex hole into each of `holes` distinct faces away from the container boundary."""
    if holes == 0:
        return regions
    candidates = []
    for idx, region in enumerate(regions):
        piece = clip(container, region[0])
        if piece is None:
            continue
        c = centroid(piece)
        room = _shape(piece).exterior.distance(ShapelyPoint(*c))
        candidates.append((room, idx, c))
    candidates.sort(key=lambda t: (-t[0], t[1]))
    if len(candidates) < holes or candidates[holes - 1][0] <= 0.0:
        raise DegenerateInstance("not enough room for the requested holes")

    chosen = sorted(candidates[:holes], key=lambda t: -t[1])
    for room, idx, c in chosen:
        m = int(rng.integers(3, 6))
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, m))
        radius = 0.4 * room * rng.uniform(0.5, 1.0)
        hole = c + radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)
        hull = convex_hull_curve(hole)
        if not isinstance(hull, PolygonCurve) or len(hull.vertices) < 3:
            raise DegenerateInstance("hole collapsed")
        regions = regions[:idx] + _pinwheel(regions[idx][0], hull.vertices) + regions[idx + 1:]
    return regions


def random_partition(seed: int, container: ConvexCurve, cuts: int, holes: int,
                     full_lines: bool = False, normalize: bool = True) -> PlanarPartition:
    """
    Random convex partition with `holes` holes; rejection-sampled until it
    validates (tiling, convexity, holes off the boundary and apart).
    """
    for attempt in range(MAX_ATTEMPTS):
        rng = make_rng(seed, 'partition', cuts, holes, attempt)
        try:
            regions = chord_regions(container, rng, cuts, full_lines)
            regions = insert_holes(container, regions, rng, holes)
            partition = build_partition(container, regions)
            report = validate(partition, seed=seed)
            if not report.valid:
                logger.debug("partition attempt %d rejected: %s", attempt, report.violations)
                continue
            return normalize_degree3(partition, check=False) if normalize else partition
        except (DegenerateInstance, InvalidPartition) as exc:
            logger.debug("partition attempt %d rejected: %s", attempt, exc)
    raise DegenerateInstance(f"no valid partition after {MAX_ATTEMPTS} attempts")


def gen_partition_with_holes(seed: int, container: ConvexCurve | ConstantWidthBody, cuts: int = 3,
                             holes: int = 1) -> ScenarioSchema:
    partition = random_partition(seed, as_curve(container), cuts, holes)
    payload = PartitionPayload(partition=PartitionSchema.partition_to_schema(partition))
    return ScenarioSchema(seed=seed, kind=ScenarioKind.PARTITION_WITH_HOLES,
                          params={'cuts': cuts, 'holes': holes}, payload=payload)


def extendable_partition(seed: int, container: ConvexCurve, cuts: int, holes: int) -> PlanarPartition:
    """Partition by full lines, so that continuing its segments tiles any larger container."""
    return random_partition(seed, container, cuts, holes, full_lines=True, normalize=False)


def spoke_partition(vertices: Sequence[Sequence[float]], center: Optional[Sequence[float]] = None) -> PlanarPartition:
    """A polygon cut by segments from an inner point to the midpoints of its sides."""
    poly = PolygonCurve(vertices)
    c = np.asarray(center if center is not None else poly.vertices.mean(axis=0), dtype=float)
    v = poly.vertices
    m = len(v)
    mids = 0.5 * (v + np.roll(v, -1, axis=0))
    regions: list[Region] = []
    for i in range(m):
        # face around vertex i+1 between the spokes to mids[i] and mids[i+1]
        regions.append(([HalfPlane.left_of(c, mids[i]), HalfPlane.left_of(mids[(i + 1) % m], c)], FaceLabel.BODY))
    return build_partition(poly, regions)


# ---------------- polygons and triangles in constant-width bodies ----------------

def gen_polygon_in_cw(seed: int, vertices: int = 6, body: Optional[ConstantWidthBody] = None) -> ScenarioSchema:
    rng = make_rng(seed, 'polygon-in-cw', vertices)
    body = body if body is not None else random_cw_body(rng)
    points = sample_inside(body.curve, rng, vertices)
    hull = convex_hull_curve(points)
    polygon = hull.vertices if isinstance(hull, PolygonCurve) else np.atleast_2d(getattr(hull, 'at', points[0]))
    payload = PolygonInBodyPayload(body=curve_to_schema(body), polygon=[(float(x), float(y)) for x, y in polygon])
    return ScenarioSchema(seed=seed, kind=ScenarioKind.POLYGON_IN_CW, params={'vertices': vertices}, payload=payload)


def random_triangle(rng: np.random.Generator, body: ConvexCurve) -> np.ndarray:
    while True:
        tri = sample_inside(body, rng, 3)
        d1, d2 = tri[1] - tri[0], tri[2] - tri[0]
        if abs(d1[0] * d2[1] - d1[1] * d2[0]) > 1e-6:
            return tri


def balitskiy_length(triangle: np.ndarray, u: float) -> float:
    per = sum(float(np.linalg.norm(triangle[i] - triangle[(i + 1) % 3])) for i in range(3))
    return 0.5 * per * (1.0 + u)


def gen_triangle_family(seed: int, count: int = 10, body: Optional[ConstantWidthBody] = None) -> ScenarioSchema:
    rng = make_rng(seed, 'triangle-family', count)
    body = body if body is not None else random_cw_body(rng)
    triangles, lengths = [], []
    for _ in range(count):
        tri = random_triangle(rng, body.curve)
        triangles.append(tuple((float(x), float(y)) for x, y in tri))
        lengths.append(balitskiy_length(tri, float(rng.uniform(0.0, 2.0))))
    payload = TriangleFamilyPayload(body=curve_to_schema(body), triangles=triangles, lengths=lengths)
    return ScenarioSchema(seed=seed, kind=ScenarioKind.TRIANGLE_FAMILY, params={'count': count}, payload=payload)


def generate(kind: ScenarioKind | str, seed: int, params: Optional[dict] = None) -> ScenarioSchema:
    """Dispatch on the scenario kind; unknown kinds raise InvalidParameter."""
    params = dict(params or {})
    try:
        kind = ScenarioKind(kind)
    except ValueError:
        raise InvalidParameter(f"unknown scenario kind {kind!r}; expected one of "
                               f"{[k.value for k in ScenarioKind]}") from None
    rng = make_rng(seed, 'container', kind.value)
    if kind is ScenarioKind.DISJOINT_BODIES:
        container = random_polygon(rng, int(params.get('container_vertices', 8)))
        return gen_disjoint_bodies(seed, int(params.get('k', 3)), container)
    if kind is ScenarioKind.PARTITION_WITH_HOLES:
        return gen_partition_with_holes(seed, random_cw_body(rng), int(params.get('cuts', 3)),
                                        int(params.get('holes', 1)))
    if kind is ScenarioKind.POLYGON_IN_CW:
        return gen_polygon_in_cw(seed, int(params.get('vertices', 6)))
    return gen_triangle_family(seed, int(params.get('count', 10)))
