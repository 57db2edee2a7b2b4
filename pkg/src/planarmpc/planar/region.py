"""Polygonal regions with holes and graphs embedded in them."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..rational import rat
from ..geom import CrossKind, Point, Segment, on_segment, orient, segments_cross, \
    segment_intersection_point
from .graph import (
    Edge,
    EmbeddedGraph,
    PlanarError,
    canonical_of,
    source_edge_of,
    virtual,
    _stable_id_key,
)


def polygon_area2(pts) -> object:
    s = rat(0)
    n = len(pts)
    for i in range(n):
        p, q = pts[i], pts[(i + 1) % n]
        s += p[0] * q[1] - q[0] * p[1]
    return s


def point_in_polygon(pts, p) -> bool:
    """Strict interior test for a simple closed polyline (crossing number)."""
    crossings = 0
    n = len(pts)
    px, py = p
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if a[1] > b[1]:
            a, b = b, a
        if a[1] <= py < b[1]:
            if orient(Point(a[0], a[1]), Point(b[0], b[1]), Point(px, py)) < 0:
                crossings += 1
    return crossings % 2 == 1


def point_on_polygon(pts, p):
    """(side index, parameter ordinal) if p lies on the closed polyline."""
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if Point(a[0], a[1]) == Point(p[0], p[1]):
            return (i, rat(0))
        seg = Segment(Point(a[0], a[1]), Point(b[0], b[1]))
        if on_segment(Point(p[0], p[1]), seg):
            if a[0] != b[0]:
                t = (p[0] - a[0]) / (b[0] - a[0])
            else:
                t = (p[1] - a[1]) / (b[1] - a[1])
            if 0 < t < 1:
                return (i, t)
    return None


@dataclass
class PolygonalRegion:
    """Connected polygon with holes.

    holes[0] is the exterior boundary (counterclockwise); holes[1:] are
    interior hole boundaries (clockwise), so the region interior is always
    to the left when walking a boundary.  Degenerate (self touching)
    boundaries are permitted and marked per vertex.
    """

    holes: list
    degenerate_flags: list = field(default_factory=list)

    def __post_init__(self):
        if not self.degenerate_flags:
            self.degenerate_flags = [[False] * len(h) for h in self.holes]

    @staticmethod
    def box(x0, y0, x1, y1) -> "PolygonalRegion":
        return PolygonalRegion([[Point(x0, y0), Point(x1, y0),
                                 Point(x1, y1), Point(x0, y1)]])

    def normalized(self) -> "PolygonalRegion":
        holes = []
        for i, h in enumerate(self.holes):
            a2 = polygon_area2(h)
            want_ccw = (i == 0)
            if (a2 > 0) != want_ccw and a2 != 0:
                holes.append(list(reversed(h)))
            else:
                holes.append(list(h))
        return PolygonalRegion(holes)

    @property
    def hole_count(self) -> int:
        return len(self.holes)

    def boundary_complexity(self) -> int:
        return sum(len(h) for h in self.holes)

    def sides(self):
        """All boundary sides as segments with ids (hole, index)."""
        out = []
        for hi, h in enumerate(self.holes):
            n = len(h)
            for i in range(n):
                a, b = h[i], h[(i + 1) % n]
                if Point(a[0], a[1]) == Point(b[0], b[1]):
                    continue
                out.append(Segment(Point(a[0], a[1]), Point(b[0], b[1]),
                                   ("bd", hi, i)))
        return out

    def contains(self, p) -> bool:
        """Closed-region containment."""
        if self.on_boundary(p) is not None:
            return True
        if not point_in_polygon(self.holes[0], p):
            return False
        for h in self.holes[1:]:
            if point_in_polygon(h, p):
                return False
        return True

    def strictly_contains(self, p) -> bool:
        if self.on_boundary(p) is not None:
            return False
        return self.contains(p)

    def on_boundary(self, p):
        """(hole, side, param) when p lies on the boundary, else None."""
        for hi, h in enumerate(self.holes):
            hit = point_on_polygon(h, p)
            if hit is not None:
                return (hi, hit[0], hit[1])
        return None

    def is_triangular(self) -> bool:
        return all(len(h) == 3 for h in self.holes)

    def is_degenerate(self) -> bool:
        """A boundary is degenerate when a vertex repeats within or across
        hole boundaries."""
        seen = {}
        for hi, h in enumerate(self.holes):
            for p in h:
                key = (p[0], p[1])
                if key in seen:
                    return True
                seen[key] = hi
        return False

    def boundary_param(self, hi, p):
        """Total order position of a boundary point along hole hi."""
        hit = point_on_polygon(self.holes[hi], p)
        if hit is None:
            raise PlanarError("point %r not on hole %d" % (p, hi))
        side, t = hit
        return (side, t)


@dataclass
class PolygonalEmbedding:
    """Graph drawn inside a polygonal region with terminals on its boundary.

    terminals: per hole, the vertex ids on that hole boundary in cyclic
    order of their boundary position.
    """

    graph: EmbeddedGraph
    terminals: list
    region: PolygonalRegion

    def all_terminals(self):
        out = []
        for hs in self.terminals:
            out.extend(hs)
        return out

    def terminal_count(self) -> int:
        return sum(len(h) for h in self.terminals)

    def check(self, *, require_on_boundary=True):
        """Cheap invariant audit used by tests; raises on violation."""
        for hi, hs in enumerate(self.terminals):
            params = []
            for v in hs:
                p = self.graph.vertices[v]
                bd = self.region.on_boundary(p)
                if require_on_boundary:
                    if bd is None:
                        raise PlanarError("terminal %r not on boundary" % (v,))
                    if bd[0] != hi:
                        raise PlanarError("terminal %r on wrong hole" % (v,))
                    params.append((bd[1], bd[2]))
            if params and len(hs) > 2:
                rotations = _cyclic_sort_offset(params)
                if rotations is None:
                    raise PlanarError("terminals on hole %d out of cyclic order" % hi)
        return True


def _cyclic_sort_offset(params):
    """None unless params is a rotation of its sorted order."""
    n = len(params)
    sp = sorted(params)
    for off in range(n):
        if all(params[(off + i) % n] == sp[i] for i in range(n)):
            return off
    return None


def sort_terminals_by_position(region, graph, hole_index, vids):
    return sorted(vids, key=lambda v: region.boundary_param(
        hole_index, graph.vertices[v]) + ( _stable_id_key(v),))


# -- geometrically induced subgraphs ----------------------------------------


def induced_subgraph(g: EmbeddedGraph, region: PolygonalRegion,
                     canonical_fragments=None) -> PolygonalEmbedding:
    """Restrict g to the closed region, subdividing boundary crossings.

    Every maximal piece of an edge inside the region becomes an edge; new
    vertices appear at boundary crossings and become terminals.  The
    fragment containing the edge's first inside point (walking from u)
    carries the weight unless canonical_fragments overrides the choice
    (mapping edge id -> fragment ordinal, used by partitions so that each
    source edge keeps exactly one canonical fragment globally).
    """
    sides = region.sides()
    vertices = {}
    vprov = {}
    edges = {}
    terminals_raw = []  # (vid, hole, side, t)

    point_ids = {}

    def vertex_at(p, prov, orig_vid=None):
        if orig_vid is not None:
            if orig_vid not in vertices:
                vertices[orig_vid] = p
                vprov[orig_vid] = prov
            return orig_vid
        key = (p[0], p[1])
        if key in point_ids:
            return point_ids[key]
        vid = ("cx", len(point_ids))
        point_ids[key] = vid
        vertices[vid] = p
        vprov[vid] = prov
        return vid

    for eid in sorted(g.edges, key=_stable_id_key):
        e = g.edges[eid]
        seg = g.segment(eid)
        cuts = set()
        for sd in sides:
            kind = segments_cross(seg, sd)
            if kind is CrossKind.DISJOINT:
                continue
            p = segment_intersection_point(seg, sd)
            if p is not None:
                cuts.add(p)
            else:
                # collinear overlap with a boundary side: cut at overlap ends
                for q in (sd.a, sd.b):
                    if on_segment(q, seg):
                        cuts.add(q)
        chain = _cut_chain(seg, cuts)
        frags = []
        for k in range(len(chain) - 1):
            a, b = chain[k], chain[k + 1]
            mid = Point((a[0] + b[0]) / rat(2), (a[1] + b[1]) / rat(2))
            inside = region.contains(mid) if region.on_boundary(mid) is None \
                else _on_boundary_keep(region, mid)
            frags.append((a, b, inside))
        inside_ordinals = [k for k, f in enumerate(frags) if f[2]]
        if not inside_ordinals:
            continue
        if canonical_fragments is not None:
            canon_ord = canonical_fragments.get(eid)
        else:
            canon_ord = inside_ordinals[0]
        src = source_edge_of(e.provenance, eid)
        for k in inside_ordinals:
            a, b, _ = frags[k]
            va = _fragment_vertex(g, e, seg, a, region, vertex_at, terminals_raw)
            vb = _fragment_vertex(g, e, seg, b, region, vertex_at, terminals_raw)
            if k == canon_ord and src is not None:
                prov = canonical_of(src) if (len(frags) > 1 or va != e.u or vb != e.v) \
                    else e.provenance
                w = e.weight
            elif k == canon_ord:
                prov, w = e.provenance, e.weight
            else:
                prov, w = virtual(), rat(0)
            fid = (eid, k) if len(frags) > 1 else eid
            edges[fid] = Edge(fid, va, vb, w, prov)

    # isolated original vertices inside the region are dropped (no isolated
    # vertices invariant); terminals keep cyclic order per hole
    terminals = [[] for _ in region.holes]
    seen_t = set()
    for vid, hole, side, t in terminals_raw:
        if vid not in seen_t:
            seen_t.add(vid)
            terminals[hole].append((side, t, _stable_id_key(vid), vid))
    terminals = [[v for _, _, _, v in sorted(hs)] for hs in terminals]

    sub = EmbeddedGraph(vertices, edges, vprov)
    return PolygonalEmbedding(sub, terminals, region)


def _on_boundary_keep(region, mid) -> bool:
    """Fragments running along the boundary belong to the region (the
    below/left assignment is made by the partition driver; a standalone
    region keeps them)."""
    return True


def _cut_chain(seg, cuts):
    pts = set(cuts)
    pts.discard(seg.a)
    pts.discard(seg.b)

    def tkey(p):
        if seg.a[0] != seg.b[0]:
            return (p[0] - seg.a[0]) / (seg.b[0] - seg.a[0])
        return (p[1] - seg.a[1]) / (seg.b[1] - seg.a[1])

    return [seg.a] + sorted(pts, key=tkey) + [seg.b]


def _fragment_vertex(g, e, seg, p, region, vertex_at, terminals_raw):
    if p == seg.a or p == seg.b:
        vid_orig = e.u if p == seg.a else e.v
        vid = vertex_at(p, g.vertex_provenance.get(vid_orig, "original"),
                        orig_vid=vid_orig)
    else:
        vid = vertex_at(p, ("subdivision-of", e.id))
    bd = region.on_boundary(p)
    if bd is not None:
        terminals_raw.append((vid, bd[0], bd[1], bd[2]))
    return vid
