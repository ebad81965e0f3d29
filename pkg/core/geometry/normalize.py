"""
Degree-3 normalization of partition graphs.

Face geometry never changes here; only the graph does. A vertex p of degree
r >= 4 is replaced by vertices that all sit at p:
  - inside the container and away from holes, by a degenerate hole with r
    vertices and r zero-length edges;
  - on the container boundary or on a hole, by a chain of r - 2 vertices
    along that boundary.
Collinear degree-2 vertices are dissolved into a single edge.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.errors import InvalidPartition
from core.geometry.curves import PointCurve, _cross
from core.geometry.partition import (
    Edge,
    EdgeKind,
    Face,
    FaceLabel,
    PlanarPartition,
    Vertex,
    require_degree3,
    validate,
)

logger = logging.getLogger(__name__)

COLLINEAR_TOL = 1e-12


@dataclass
class _FaceDraft:
    id: int
    vertices: list[int]
    edges: list[int]
    label: FaceLabel
    region: object


class _Graph:
    """Mutable working copy of a partition graph."""

    def __init__(self, partition: PlanarPartition):
        self.container = partition.container
        self.vertices = dict(partition.vertices)
        self.edges = dict(partition.edges)
        self.faces = [_FaceDraft(f.id, list(f.vertex_cycle), list(f.edge_cycle), f.label, f.region)
                      for f in partition.faces]

    def freeze(self) -> PlanarPartition:
        faces = tuple(Face(f.id, tuple(f.vertices), tuple(f.edges), f.label, f.region) for f in self.faces)
        return PlanarPartition(self.container, self.vertices, self.edges, faces)

    def degrees(self) -> dict[int, int]:
        deg = {vid: 0 for vid in self.vertices}
        for e in self.edges.values():
            deg[e.v1] += 1
            deg[e.v2] += 1
        return deg

    def new_vertex(self, xy) -> int:
        vid = max(self.vertices, default=-1) + 1
        self.vertices[vid] = Vertex(vid, xy)
        return vid

    def new_edge(self, v1: int, v2: int, kind: EdgeKind) -> int:
        eid = max(self.edges, default=-1) + 1
        self.edges[eid] = Edge(eid, v1, v2, kind)
        return eid

    def reattach(self, eid: int, old: int, new: int) -> None:
        e = self.edges[eid]
        v1 = new if e.v1 == old else e.v1
        v2 = new if e.v2 == old else e.v2
        self.edges[eid] = Edge(eid, v1, v2, e.kind)

    def occurrences(self, vid: int) -> list[tuple[_FaceDraft, int]]:
        return [(f, i) for f in self.faces for i, v in enumerate(f.vertices) if v == vid]

    @staticmethod
    def splice(face: _FaceDraft, pos: int, replacement: list[int], inner_edges: list[int]) -> None:
        """Replace vertices[pos] by `replacement`, joined in order by `inner_edges`."""
        face.vertices[pos:pos + 1] = replacement
        face.edges[pos:pos] = inner_edges


def _rotation(graph: _Graph, p: int) -> tuple[list[int], list[tuple[_FaceDraft, int]], Optional[tuple[_FaceDraft, int]]]:
    """
    Edges e_1..e_r and faces F_1.. around p, counterclockwise, with F_j
    leaving p along e_j and entering along e_{j+1}.

    On the container boundary e_1 is the arc leaving p and e_r the arc
    entering it; next to a hole e_1 is the edge the hole enters p along and
    the hole itself is returned separately.
    """
    occ = graph.occurrences(p)
    by_out = {}
    for face, i in occ:
        out = face.edges[i]
        if out in by_out:
            raise InvalidPartition(f"edge {out} leaves vertex {p} in two faces")
        by_out[out] = (face, i)

    holes = [(f, i) for f, i in occ if f.label is FaceLabel.HOLE]
    if len(holes) > 1:
        raise InvalidPartition(f"vertex {p} is shared by {len(holes)} holes")
    hole = holes[0] if holes else None

    arcs_out = [eid for eid, e in graph.edges.items() if e.kind is EdgeKind.ARC and e.v1 == p]
    if arcs_out:
        first = arcs_out[0]
    elif hole is not None:
        hf, hi = hole
        first = hf.edges[hi - 1]
        del by_out[hf.edges[hi]]
    else:
        first = min(by_out, key=lambda e: (by_out[e][0].id, e))

    chain, faces = [first], []
    cur = first
    while cur in by_out:
        face, i = by_out.pop(cur)
        faces.append((face, i))
        cur = face.edges[i - 1]
        if cur == first:
            break
        chain.append(cur)
    if by_out:
        raise InvalidPartition(f"faces around vertex {p} do not form a single fan")
    return chain, faces, hole


def _open_degenerate_hole(graph: _Graph, p: int) -> None:
    chain, faces, _ = _rotation(graph, p)
    r = len(chain)
    xy = graph.vertices[p].xy
    qs = [graph.new_vertex(xy) for _ in range(r)]
    for j, eid in enumerate(chain):
        graph.reattach(eid, p, qs[j])
    gs = [graph.new_edge(qs[j], qs[(j + 1) % r], EdgeKind.SEGMENT) for j in range(r)]
    for j, (face, pos) in enumerate(faces):
        graph.splice(face, pos, [qs[(j + 1) % r], qs[j]], [gs[j]])
    del graph.vertices[p]
    hole_id = max(f.id for f in graph.faces) + 1
    graph.faces.append(_FaceDraft(hole_id, list(qs), list(gs), FaceLabel.HOLE, PointCurve(np.array(xy))))
    logger.debug("vertex %d of degree %d opened into degenerate hole %d", p, r, hole_id)


def _split_into_chain(graph: _Graph, p: int) -> None:
    chain, faces, hole = _rotation(graph, p)
    r = len(chain)
    xy = graph.vertices[p].xy
    qs = [graph.new_vertex(xy) for _ in range(r - 2)]
    graph.reattach(chain[0], p, qs[0])
    for j in range(1, r - 1):
        graph.reattach(chain[j], p, qs[j - 1])
    graph.reattach(chain[-1], p, qs[-1])

    on_container = hole is None
    if on_container:
        # boundary runs q_{r-2} -> ... -> q_1 counterclockwise
        gs = [graph.new_edge(qs[j + 1], qs[j], EdgeKind.ARC) for j in range(r - 3)]
    else:
        gs = [graph.new_edge(qs[j], qs[j + 1], EdgeKind.SEGMENT) for j in range(r - 3)]

    # splice from the back so earlier positions stay valid when a face meets p twice
    plan = []
    for j, (face, pos) in enumerate(faces, start=1):
        if j == 1:
            plan.append((face, pos, [qs[0]], []))
        elif j == r - 1:
            plan.append((face, pos, [qs[-1]], []))
        else:
            plan.append((face, pos, [qs[j - 1], qs[j - 2]], [gs[j - 2]]))
    if hole is not None:
        hf, hpos = hole
        plan.append((hf, hpos, list(qs), list(gs)))
    for face, pos, repl, inner in sorted(plan, key=lambda t: -t[1]):
        graph.splice(face, pos, repl, inner)
    del graph.vertices[p]
    logger.debug("vertex %d of degree %d split into a chain of %d (%s)", p, r, r - 2,
                 'container' if on_container else 'hole')


def _dissolve(graph: _Graph, p: int) -> None:
    incident = [e for e in graph.edges.values() if p in (e.v1, e.v2)]
    a, b = incident
    if a.kind is not b.kind:
        raise InvalidPartition(f"vertex {p} of degree 2 joins an arc and a segment")
    ua, ub = a.other(p), b.other(p)
    pa, pp, pb = (graph.vertices[v].point for v in (ua, p, ub))
    if a.kind is EdgeKind.SEGMENT and abs(float(_cross(pa - pp, pb - pp))) > COLLINEAR_TOL * max(
            1.0, float(np.linalg.norm(pa - pp) * np.linalg.norm(pb - pp))):
        raise InvalidPartition(f"vertex {p} of degree 2 is a corner; a face there cannot be convex")
    if a.kind is EdgeKind.ARC:
        first, second = (a, b) if a.v2 == p else (b, a)
        merged = Edge(first.id, first.v1, second.v2, EdgeKind.ARC)
    else:
        merged = Edge(a.id, ua, ub, EdgeKind.SEGMENT)
    graph.edges[a.id] = merged
    del graph.edges[b.id]
    for face, pos in sorted(graph.occurrences(p), key=lambda t: -t[1]):
        del face.vertices[pos]
        drop = face.edges.index(b.id)
        del face.edges[drop]
    del graph.vertices[p]


def normalize_degree3(partition: PlanarPartition, check: bool = True) -> PlanarPartition:
    """Equivalent partition whose graph vertices all have degree 3."""
    if check:
        report = validate(partition)
        if not report.valid:
            raise InvalidPartition("; ".join(report.violations), report.violations)
    graph = _Graph(partition)
    surgeries = 0
    while True:
        deg = graph.degrees()
        bad = sorted(v for v, d in deg.items() if d != 3)
        if not bad:
            break
        p = bad[0]
        r = deg[p]
        if r < 2:
            raise InvalidPartition(f"vertex {p} has degree {r}")
        if r == 2:
            _dissolve(graph, p)
            continue
        on_boundary = any(e.kind is EdgeKind.ARC and p in (e.v1, e.v2) for e in graph.edges.values())
        near_hole = any(f.label is FaceLabel.HOLE for f, _ in graph.occurrences(p))
        if on_boundary or near_hole:
            _split_into_chain(graph, p)
        else:
            _open_degenerate_hole(graph, p)
        surgeries += 1

    result = graph.freeze()
    require_degree3(result)
    if surgeries:
        logger.info("degree-3 normalization: %d surgeries, %d vertices, %d holes",
                    surgeries, len(result.vertices), result.l)
    return result
