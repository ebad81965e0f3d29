"""
Convex partitions of a body into faces, some of them labelled holes.

Graph conventions:
  - vertices are the points where partition edges meet; corners of the
    container that carry no partition edge are not vertices;
  - an edge is a straight `segment` between two vertices or an `arc` of the
    container boundary, oriented counterclockwise along the container;
  - each face lists its boundary counterclockwise, `edge_cycle[i]` joining
    `vertex_cycle[i]` to `vertex_cycle[i + 1]`;
  - the geometry of a face is the container cut by the half-planes left of
    its nonzero segments, so faces are convex by construction.
Distinct vertex ids may share coordinates and segments may have zero length
(both appear after degree-3 normalization).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree
from shapely.geometry import LineString, Point as ShapelyPoint, Polygon as ShapelyPolygon

from core.data.schemas.harness.report_schema import CheckKind, PartitionReport, VerificationReport
from core.errors import DegenerateInstance, EulerMismatch, InvalidPartition
from core.geometry.clipping import ClippedCurve, HalfPlane, boundary_gap, clip, normal_parameter
from core.geometry.constant_width import ConstantWidthBody, as_curve
from core.geometry.curves import (
    ConvexCurve,
    PointCurve,
    PolygonCurve,
    _cross,
    contains,
    diameter,
    support_gap,
)
from core.geometry.pseudometric import exact_if_possible, integrate_terms, pdist_terms, pper_terms
from core.geometry.quadrature import TWO_PI, QuadratureSpec
from core.utils.generate import make_rng

logger = logging.getLogger(__name__)

MERGE_TOL = 1e-8
ON_TOL = 1e-9
# faces below this share of the container area are slivers
AREA_TOL = 1e-12


class EdgeKind(str, Enum):
    SEGMENT = 'segment'
    ARC = 'arc'


class FaceLabel(str, Enum):
    BODY = 'body'
    HOLE = 'hole'


@dataclass(frozen=True)
class Vertex:
    id: int
    xy: tuple[float, float]

    @property
    def point(self) -> np.ndarray:
        return np.array(self.xy)


@dataclass(frozen=True)
class Edge:
    id: int
    v1: int
    v2: int
    kind: EdgeKind = EdgeKind.SEGMENT

    def other(self, vid: int) -> int:
        return self.v2 if vid == self.v1 else self.v1


@dataclass(frozen=True, eq=False)
class Face:
    id: int
    vertex_cycle: tuple[int, ...]
    edge_cycle: tuple[int, ...]
    label: FaceLabel
    region: ConvexCurve

    @property
    def is_hole(self) -> bool:
        return self.label is FaceLabel.HOLE


@dataclass(frozen=True, eq=False)
class PlanarPartition:
    container: ConvexCurve
    vertices: Mapping[int, Vertex]
    edges: Mapping[int, Edge]
    faces: tuple[Face, ...]

    def __post_init__(self):
        object.__setattr__(self, 'vertices', MappingProxyType(dict(self.vertices)))
        object.__setattr__(self, 'edges', MappingProxyType(dict(self.edges)))
        object.__setattr__(self, 'faces', tuple(self.faces))

    @property
    def bodies(self) -> tuple[Face, ...]:
        return tuple(f for f in self.faces if not f.is_hole)

    @property
    def holes(self) -> tuple[Face, ...]:
        return tuple(f for f in self.faces if f.is_hole)

    @property
    def k(self) -> int:
        return len(self.bodies)

    @property
    def l(self) -> int:
        return len(self.holes)

    def point(self, vid: int) -> np.ndarray:
        return self.vertices[vid].point

    def degrees(self) -> dict[int, int]:
        deg = {vid: 0 for vid in self.vertices}
        for e in self.edges.values():
            deg[e.v1] += 1
            deg[e.v2] += 1
        return deg

    def degree(self, vid: int) -> int:
        return self.degrees()[vid]

    def face(self, fid: int) -> Face:
        for f in self.faces:
            if f.id == fid:
                return f
        raise KeyError(fid)

    def edge_length(self, eid: int) -> float:
        e = self.edges[eid]
        if e.kind is EdgeKind.SEGMENT:
            return float(np.linalg.norm(self.point(e.v2) - self.point(e.v1)))
        return arc_length(self.container, self.point(e.v1), self.point(e.v2))

    def halfplanes(self, face: Face) -> list[HalfPlane]:
        return face_halfplanes(self, face.vertex_cycle, face.edge_cycle)


def face_halfplanes(partition_like, vertex_cycle: Sequence[int], edge_cycle: Sequence[int]) -> list[HalfPlane]:
    out = []
    m = len(vertex_cycle)
    for i, eid in enumerate(edge_cycle):
        if partition_like.edges[eid].kind is not EdgeKind.SEGMENT:
            continue
        a = partition_like.point(vertex_cycle[i])
        b = partition_like.point(vertex_cycle[(i + 1) % m])
        if np.linalg.norm(b - a) <= 0.0:
            continue
        out.append(HalfPlane.left_of(a, b))
    return out


def arc_length(container: ConvexCurve, a: np.ndarray, b: np.ndarray, q: QuadratureSpec = QuadratureSpec()) -> float:
    """Length of the container boundary from a to b, counterclockwise."""
    if np.linalg.norm(b - a) == 0.0:
        return 0.0
    piece = clip(container, [HalfPlane.left_of(b, a)])
    if piece is None:
        return 0.0
    return float(piece.perimeter(q) - np.linalg.norm(b - a))


def trivial_partition(container: ConvexCurve) -> PlanarPartition:
    return PlanarPartition(container, {}, {}, (Face(0, (), (), FaceLabel.BODY, container),))


# ---------------- building from geometry ----------------

def _on_container_boundary(container: ConvexCurve, p: np.ndarray) -> bool:
    return boundary_gap(container, p)[0] <= ON_TOL


def _outline(region: ConvexCurve, container: ConvexCurve) -> list[tuple[np.ndarray, bool, Optional[tuple[float, float]]]]:
    """(corner, piece_after_is_boundary, arc normal interval or None) around a face."""
    if region is container:
        return []
    if isinstance(region, ClippedCurve):
        corners = region.corners
        arcs = region.arcs
    elif isinstance(region, PolygonCurve):
        corners = region.vertices
        arcs = [None] * len(corners)
    else:
        raise InvalidPartition(f"face geometry {type(region).__name__} cannot be outlined")
    out = []
    m = len(corners)
    for i in range(m):
        if arcs[i] is not None:
            out.append((corners[i], True, arcs[i]))
        else:
            mid = 0.5 * (corners[i] + corners[(i + 1) % m])
            out.append((corners[i], _on_container_boundary(container, mid), None))
    return out


class _Clusters:
    """Union-find over points closer than MERGE_TOL, ids in order of first appearance."""

    def __init__(self, points: np.ndarray):
        self.parent = list(range(len(points)))
        if len(points):
            for i, j in sorted(cKDTree(points).query_pairs(MERGE_TOL)):
                self._union(i, j)
        roots = {}
        self.label = []
        for i in range(len(points)):
            r = self._find(i)
            if r not in roots:
                roots[r] = len(roots)
            self.label.append(roots[r])
        self.centers = np.zeros((len(roots), 2))
        counts = np.zeros(len(roots))
        for i, lab in enumerate(self.label):
            self.centers[lab] += points[i]
            counts[lab] += 1
        if len(roots):
            self.centers /= counts[:, None]

    def _find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def _union(self, i, j):
        ri, rj = self._find(i), self._find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def build_partition(container: ConvexCurve, regions: Sequence[tuple[Sequence[HalfPlane], FaceLabel]]) -> PlanarPartition:
    """
    Partition graph of the faces `container ∩ half-planes`.

    The faces must tile the container; vertices, T-junctions and boundary
    arcs are recovered from the face geometry.
    """
    faces_geo = []
    min_area = AREA_TOL * max(1.0, container.area())
    for hps, label in regions:
        region = clip(container, list(hps))
        if region is None or isinstance(region, PointCurve) or region.area() <= min_area:
            raise DegenerateInstance("a face of the partition has empty interior")
        faces_geo.append((region, FaceLabel(label)))
    if len(faces_geo) == 1:
        return PlanarPartition(container, {}, {}, (Face(0, (), (), faces_geo[0][1], faces_geo[0][0]),))

    outlines = [_outline(region, container) for region, _ in faces_geo]

    candidates = []
    for outline in outlines:
        m = len(outline)
        for i, (corner, boundary_after, _) in enumerate(outline):
            boundary_before = outline[i - 1][1]
            interior = not _on_container_boundary(container, corner)
            if interior or not boundary_after or not boundary_before:
                candidates.append(corner)
    points = np.asarray(candidates, dtype=float).reshape(-1, 2)
    clusters = _Clusters(points)
    coords = clusters.centers
    boundary_theta = {}
    for vid, p in enumerate(coords):
        if _on_container_boundary(container, p):
            boundary_theta[vid] = normal_parameter(container, p)

    def vid_at(p):
        if len(coords) == 0:
            return None
        d = np.linalg.norm(coords - p, axis=1)
        i = int(np.argmin(d))
        return i if d[i] <= 10 * MERGE_TOL else None

    def inner_vertices(a, b, arc):
        """Vertices strictly inside the piece a -> b, in order."""
        if arc is None:
            seg = b - a
            ll = float(seg @ seg)
            if ll == 0.0:
                return []
            s = (coords - a) @ seg / ll
            dist = np.abs(_cross(seg, coords - a)) / math.sqrt(ll)
            tol = 10 * MERGE_TOL / math.sqrt(ll)
            idx = np.nonzero((dist <= 10 * MERGE_TOL) & (s > tol) & (s < 1.0 - tol))[0]
            return [int(i) for i in idx[np.argsort(s[idx], kind='stable')]]
        start, end = arc
        span = float(np.mod(end - start, TWO_PI))
        found = []
        for vid, th in boundary_theta.items():
            off = float(np.mod(th - start, TWO_PI))
            if 1e-9 < off < span - 1e-9:
                found.append((off, vid))
        return [vid for _, vid in sorted(found)]

    vertices = {vid: Vertex(vid, (float(p[0]), float(p[1]))) for vid, p in enumerate(coords)}
    edges: dict[int, Edge] = {}
    segment_ids: dict[tuple[int, int], int] = {}
    faces = []

    for fid, ((region, label), outline) in enumerate(zip(faces_geo, outlines)):
        # walk corners, emitting (vertex id, kind of the boundary that follows)
        walk: list[tuple[int, bool]] = []
        m = len(outline)
        for i, (corner, boundary_after, arc) in enumerate(outline):
            nxt = outline[(i + 1) % m][0]
            vid = vid_at(corner)
            if vid is not None:
                walk.append((vid, boundary_after))
            for inner in inner_vertices(corner, nxt, arc):
                walk.append((inner, boundary_after))
        if not walk:
            faces.append(Face(fid, (), (), label, region))
            continue
        if len(walk) < 2:
            raise InvalidPartition(f"face {fid} touches the rest of the partition in a single point")

        # corners that are no vertex continue the run of the last vertex, wrapping around
        vertex_cycle, edge_cycle = [], []
        n = len(walk)
        for i, (vid, _) in enumerate(walk):
            nxt_vid = walk[(i + 1) % n][0]
            if walk[i][1]:
                eid = len(edges)
                edges[eid] = Edge(eid, vid, nxt_vid, EdgeKind.ARC)
            else:
                key = (min(vid, nxt_vid), max(vid, nxt_vid))
                if key not in segment_ids:
                    eid = len(edges)
                    edges[eid] = Edge(eid, vid, nxt_vid, EdgeKind.SEGMENT)
                    segment_ids[key] = eid
                eid = segment_ids[key]
            vertex_cycle.append(vid)
            edge_cycle.append(eid)
        faces.append(Face(fid, tuple(vertex_cycle), tuple(edge_cycle), label, region))

    partition = PlanarPartition(container, vertices, edges, tuple(faces))
    logger.debug("built partition: %d faces, %d vertices, %d edges", len(faces), len(vertices), len(edges))
    return partition


# ---------------- building from cycles ----------------

def vertex_cycle_from_edges(edge_cycle: Sequence[int], edges: Mapping[int, Edge]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """
    Vertex sequence of a face given its edge cycle; returns (vertex_cycle, edge_cycle),
    the edge cycle possibly rotated to start at an arc whose orientation is known.
    """
    cycle = list(edge_cycle)
    if not cycle:
        return (), ()
    for e in cycle:
        if e not in edges:
            raise InvalidPartition(f"face references unknown edge {e}")
    arc_pos = next((i for i, e in enumerate(cycle) if edges[e].kind is EdgeKind.ARC), None)
    if arc_pos is not None:
        cycle = cycle[arc_pos:] + cycle[:arc_pos]
        start = edges[cycle[0]].v1
    elif len(cycle) >= 2:
        e0, e1 = edges[cycle[0]], edges[cycle[1]]
        ends1 = {e1.v1, e1.v2}
        if e0.v2 in ends1 and e0.v1 not in ends1:
            start = e0.v1
        elif e0.v1 in ends1 and e0.v2 not in ends1:
            start = e0.v2
        else:
            start = e0.v1
    else:
        start = edges[cycle[0]].v1

    seq = []
    cur = start
    for eid in cycle:
        e = edges[eid]
        if cur not in (e.v1, e.v2):
            raise InvalidPartition(f"edge cycle is not closed at edge {eid}")
        if e.kind is EdgeKind.ARC and e.v1 != cur:
            raise InvalidPartition(f"arc edge {eid} is traversed against the container orientation")
        seq.append(cur)
        cur = e.other(cur)
    if cur != start:
        raise InvalidPartition("edge cycle does not return to its start")
    return tuple(seq), tuple(cycle)


class _GraphView:
    def __init__(self, vertices, edges):
        self.vertices = vertices
        self.edges = edges

    def point(self, vid):
        return self.vertices[vid].point


def partition_from_cycles(container: ConvexCurve, vertices: Iterable[Vertex], edges: Iterable[Edge],
                          faces: Iterable[tuple[int, Sequence[int], FaceLabel]]) -> PlanarPartition:
    """Partition from explicit graph data; face geometry follows from the segments."""
    vmap = {v.id: v for v in vertices}
    emap = {e.id: e for e in edges}
    for e in emap.values():
        if e.v1 not in vmap or e.v2 not in vmap:
            raise InvalidPartition(f"edge {e.id} references an unknown vertex")
    view = _GraphView(vmap, emap)
    out = []
    for fid, cycle, label in faces:
        vcycle, ecycle = vertex_cycle_from_edges(cycle, emap)
        region = _face_region(container, view, vcycle, ecycle)
        out.append(Face(int(fid), vcycle, ecycle, FaceLabel(label), region))
    return PlanarPartition(container, vmap, emap, tuple(out))


def _face_region(container, view, vcycle, ecycle) -> ConvexCurve:
    if not vcycle:
        return container
    pts = np.array([view.point(v) for v in vcycle])
    if np.all(np.linalg.norm(pts - pts[0], axis=1) == 0.0):
        return PointCurve(pts[0])
    hps = face_halfplanes(view, vcycle, ecycle)
    region = clip(container, hps)
    if region is None:
        raise InvalidPartition("face has empty interior")
    return region


# ---------------- checks ----------------

def _shape(region: ConvexCurve):
    if isinstance(region, PointCurve):
        return ShapelyPoint(*region.at)
    ring = region.boundary_polyline(1024)
    if len(ring) < 3:
        return LineString(ring)
    return ShapelyPolygon(ring)


def validate(partition: PlanarPartition, samples: int = 1000, seed: int = 0) -> PartitionReport:
    """Checks tiling, disjointness, convexity and the hole conditions; never raises for a violation."""
    violations: list[str] = []
    container = partition.container

    for e in partition.edges.values():
        if e.v1 not in partition.vertices or e.v2 not in partition.vertices:
            violations.append(f"edge {e.id} references an unknown vertex")
    usage: dict[int, int] = {}
    for f in partition.faces:
        for eid in f.edge_cycle:
            usage[eid] = usage.get(eid, 0) + 1
    for eid, count in usage.items():
        e = partition.edges.get(eid)
        if e is None:
            violations.append(f"face references unknown edge {eid}")
        elif e.kind is EdgeKind.ARC and count != 1:
            violations.append(f"arc edge {eid} bounds {count} faces")
        elif count > 2:
            violations.append(f"segment edge {eid} bounds {count} faces")

    # tiling
    container_area = container.area()
    face_area = math.fsum(f.region.area() for f in partition.faces)
    area_error = abs(face_area - container_area)
    if area_error > 1e-8 * max(1.0, container_area):
        violations.append(f"faces do not tile the container: area error {area_error:.3g}")

    # interiors pairwise disjoint
    shapes = [_shape(f.region) for f in partition.faces]
    overlap = False
    for i in range(len(shapes)):
        for j in range(i + 1, len(shapes)):
            if shapes[i].intersection(shapes[j]).area > 1e-9 * max(1.0, container_area):
                overlap = True
    rng = make_rng(seed, 'validate')
    xmin, ymin, xmax, ymax = _shape(container).bounds
    tested = 0
    for _ in range(10 * samples):
        if tested >= samples or overlap:
            break
        p = np.array([rng.uniform(xmin, xmax), rng.uniform(ymin, ymax)])
        if not contains(container, p):
            continue
        tested += 1
        inside = sum(1 for f in partition.faces
                     if not isinstance(f.region, PointCurve) and contains(f.region, p, tol=-ON_TOL))
        if inside > 1:
            overlap = True
    if overlap:
        violations.append("interiors not disjoint")

    # convexity of the boundary cycles
    for f in partition.faces:
        pts = [partition.point(v) for v in f.vertex_cycle]
        if not pts or isinstance(f.region, PointCurve):
            continue
        if not all(contains(f.region, p, tol=1e-7) for p in pts):
            violations.append(f"face {f.id}: cycle vertices leave the face")
        if _turns_clockwise(pts, f, partition):
            violations.append(f"face {f.id} is not convex")

    # holes
    holes = partition.holes
    min_gap = None
    for h in holes:
        gap = support_gap(container, h.region)
        min_gap = gap if min_gap is None else min(min_gap, gap)
        if gap <= ON_TOL:
            violations.append(f"hole {h.id} touches the container boundary")
    for i in range(len(holes)):
        for j in range(i + 1, len(holes)):
            d = _shape(holes[i].region).distance(_shape(holes[j].region))
            min_gap = d if min_gap is None else min(min_gap, d)
            if d <= 1e-12:
                violations.append(f"holes {holes[i].id} and {holes[j].id} touch")

    degrees = partition.degrees()
    return PartitionReport(
        valid=not violations,
        violations=violations,
        k=partition.k,
        l=partition.l,
        vertex_count=len(partition.vertices),
        min_degree=min(degrees.values()) if degrees else None,
        max_degree=max(degrees.values()) if degrees else None,
        area_error=area_error,
        min_hole_gap=min_gap,
    )


def _turns_clockwise(pts: list[np.ndarray], face: Face, partition: PlanarPartition) -> bool:
    # consecutive distinct vertices joined by segments must turn left
    ring = []
    for p in pts:
        if not ring or np.linalg.norm(p - ring[-1]) > MERGE_TOL:
            ring.append(p)
    if len(ring) > 1 and np.linalg.norm(ring[0] - ring[-1]) <= MERGE_TOL:
        ring.pop()
    if len(ring) < 3:
        return False
    arr = np.asarray(ring)
    area2 = float(np.sum(_cross(arr, np.roll(arr, -1, axis=0))))
    return area2 < -1e-12


def face_perimeters(partition: PlanarPartition, q: QuadratureSpec = QuadratureSpec()) -> list[float]:
    return [float(f.region.perimeter(q)) for f in partition.faces]


def total_body_perimeter(partition: PlanarPartition, q: QuadratureSpec = QuadratureSpec()) -> float:
    return math.fsum(float(f.region.perimeter(q)) for f in partition.bodies)


def require_degree3(partition: PlanarPartition) -> None:
    bad = sorted(vid for vid, d in partition.degrees().items() if d != 3)
    if bad:
        raise InvalidPartition(f"partition is not degree-3 normalized: vertices {bad[:10]}")


def euler_vertex_count(partition: PlanarPartition) -> int:
    require_degree3(partition)
    count = len(partition.vertices)
    expected = 2 * (partition.k + partition.l - 1)
    if count != expected:
        raise EulerMismatch(f"{count} vertices, expected 2(k + l - 1) = {expected}")
    return count


def partition_identity_check(partition: PlanarPartition, d_ref: ConvexCurve | ConstantWidthBody,
                             q: QuadratureSpec = QuadratureSpec(), tolerance: float = 1e-6,
                             seed: Optional[int] = None) -> VerificationReport:
    """
    sum over all faces pper_D(F) against pper_D(container) + sum_v (deg v - 2) pdist(v, D).

    On degree-3 partitions every vertex weighs one; higher degrees count as the
    chains of coincident vertices normalization would create.
    """
    d = as_curve(d_ref)
    regions = [f.region for f in partition.faces]
    spec = exact_if_possible(q, d, partition.container, *regions) if q.method == 'exact' else q

    lhs_terms = [t for r in regions for t in pper_terms(d, r)]
    rhs_terms = list(pper_terms(d, partition.container))
    degrees = partition.degrees()
    for vid in sorted(partition.vertices):
        weight = degrees[vid] - 2
        if weight <= 0:
            continue
        for term in pdist_terms(PointCurve(partition.point(vid)), d):
            rhs_terms.append(type(term)(term.a, term.b, weight))

    lhs = integrate_terms(lhs_terms, spec)
    rhs = integrate_terms(rhs_terms, spec)
    tol = tolerance * max(1.0, diameter(d))
    return VerificationReport.evaluate(
        'partition_identity', lhs.value, rhs.value, tol, CheckKind.IDENTITY, seed=seed,
        extra={'faces': len(regions), 'vertices': len(partition.vertices)},
    )
