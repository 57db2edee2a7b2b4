"""Embedded planar multigraphs with exact coordinates.

Graphs are value-like: operations return new graphs and never mutate their
input.  Every edge knows its provenance (original, canonical fragment of a
source edge, or virtual), which is what lets answers map back to original
edge ids after rounds of subdivision, splitting, and redrawing.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field, replace
from typing import Optional

from ..rational import rat, rat_from_string, rat_to_string, bit_length
from ..geom import (
    CrossKind,
    Point,
    Segment,
    orient,
    on_segment,
    segments_cross,
)


class PlanarError(Exception):
    pass


class InvalidEmbedding(PlanarError):
    def __init__(self, crossings):
        self.crossings = crossings
        super().__init__("embedding has %d crossing edge pairs" % len(crossings))


class PointNotOnEdge(PlanarError):
    pass


class NonContiguousPartition(PlanarError):
    pass


class Disconnected(PlanarError):
    pass


class TooSmall(PlanarError):
    pass


# provenance constructors ------------------------------------------------------

ORIGINAL = "original"


def canonical_of(source_edge):
    return ("canonical-of", source_edge)


def virtual():
    return ("virtual",)


def is_virtual(prov) -> bool:
    return prov == ("virtual",)


def is_canonical(prov) -> bool:
    return prov == ORIGINAL or (isinstance(prov, tuple) and prov[0] == "canonical-of")


def source_edge_of(prov, eid):
    """Original edge id carried by a canonical provenance tag."""
    if prov == ORIGINAL:
        return eid
    if isinstance(prov, tuple) and prov[0] == "canonical-of":
        return prov[1]
    return None


@dataclass(frozen=True)
class Edge:
    id: object
    u: object
    v: object
    weight: object
    provenance: object = ORIGINAL

    def other(self, w):
        return self.v if w == self.u else self.u


@dataclass
class EmbeddedGraph:
    """Straight-line embedded multigraph.

    vertices: id -> Point
    edges: id -> Edge
    vertex_provenance: id -> tag (original / subdivision-of / split-of /
    face-vertex / edge-vertex / bend / phantom ...)
    """

    vertices: dict
    edges: dict
    vertex_provenance: dict = field(default_factory=dict)

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def point(self, vid) -> Point:
        return self.vertices[vid]

    def segment(self, eid) -> Segment:
        e = self.edges[eid]
        return Segment(self.vertices[e.u], self.vertices[e.v], eid)

    def copy(self) -> "EmbeddedGraph":
        return EmbeddedGraph(dict(self.vertices), dict(self.edges),
                             dict(self.vertex_provenance))

    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for e in self.edges.values():
            adj[e.u].append(e.id)
            adj[e.v].append(e.id)
        return adj

    def max_bit_length(self) -> int:
        out = 0
        for p in self.vertices.values():
            out = max(out, p.bit_len())
        return out

    def fresh_vertex_id(self, hint="x"):
        i = len(self.vertices)
        while ("v", hint, i) in self.vertices:
            i += 1
        return ("v", hint, i)

    def fresh_edge_id(self, hint="x"):
        i = len(self.edges)
        while ("e", hint, i) in self.edges:
            i += 1
        return ("e", hint, i)

    # -- construction ------------------------------------------------------

    @staticmethod
    def build(points: dict, edge_list) -> "EmbeddedGraph":
        """points: vid -> (x, y); edge_list: (eid, u, v, weight) tuples."""
        vertices = {vid: Point(x, y) for vid, (x, y) in points.items()}
        edges = {}
        for item in edge_list:
            eid, u, v = item[0], item[1], item[2]
            w = rat(item[3]) if len(item) > 3 else rat(1)
            if u == v:
                raise PlanarError("self-loop %r" % (eid,))
            if vertices[u] == vertices[v]:
                raise PlanarError("zero-length edge %r" % (eid,))
            if w < 0:
                raise PlanarError("negative weight on %r" % (eid,))
            edges[eid] = Edge(eid, u, v, w, ORIGINAL)
        g = EmbeddedGraph(vertices, edges, {v: ORIGINAL for v in vertices})
        return g

    # -- rotation system ----------------------------------------------------

    def rotations(self) -> dict:
        """Edges around each vertex sorted counterclockwise by exact angle.

        The rotation is derived from coordinates; ids break exact direction
        ties, which a valid embedding never needs.
        """
        adj = self.adjacency()
        rot = {}
        for v, eids in adj.items():
            pv = self.vertices[v]
            keyed = []
            for eid in eids:
                e = self.edges[eid]
                pw = self.vertices[e.other(v)]
                dx, dy = pw[0] - pv[0], pw[1] - pv[1]
                keyed.append((_angle_key(dx, dy), _stable_id_key(eid), eid))
            keyed.sort(key=lambda t: (t[0], t[1]))
            rot[v] = [eid for _, _, eid in keyed]
        return rot


def _stable_id_key(x):
    return repr(x)


def _angle_key(dx, dy):
    """Total order on directions: ccw starting from positive x axis.

    (half, slope-comparable pair) avoids any trigonometry.
    """
    if dy > 0 or (dy == 0 and dx > 0):
        half = 0
    else:
        half = 1
    # within a half turn, order by polar angle: compare via cross product sign
    # encoded as an exact fraction dy/dx in projective form
    return (half, _ProjDir(dx, dy))


class _ProjDir:
    """Direction comparator within one half-plane via cross products."""

    __slots__ = ("dx", "dy")

    def __init__(self, dx, dy):
        self.dx = dx
        self.dy = dy

    def _cross(self, other):
        return self.dx * other.dy - self.dy * other.dx

    def __lt__(self, other):
        return self._cross(other) > 0

    def __eq__(self, other):
        return self._cross(other) == 0

    def __le__(self, other):
        return self._cross(other) >= 0

    def __hash__(self):  # pragma: no cover
        raise TypeError("unhashable")


# -- validation -------------------------------------------------------------


def validate_embedding(g: EmbeddedGraph):
    """Check that no two edge segments cross.

    Returns a report object with .ok and .crossings (list of edge id pairs).
    Uses a slab sweep for the accept path; on a detected violation, falls
    back to enumerating all crossing pairs among locally-overlapping edges.
    """
    segs = [g.segment(eid) for eid in g.edges]
    suspect = _sweep_find_crossing(segs)
    if suspect is None:
        return _Report(True, [])
    crossings = _enumerate_crossings(segs)
    return _Report(False, crossings)


@dataclass
class _Report:
    ok: bool
    crossings: list


def _sweep_find_crossing(segs):
    """One crossing pair if any exists, else None. Slab order consistency."""
    from ..geom import CrossingInput, vertical_decomposition

    try:
        vertical_decomposition(segs)
        return None
    except CrossingInput as e:
        return str(e)


def _enumerate_crossings(segs):
    events = []
    for s in segs:
        lo, hi = s.xspan()
        events.append((lo, hi, s))
    events.sort(key=lambda t: (t[0], t[1]))
    out = []
    active = []
    for lo, hi, s in events:
        active = [t for t in active if t[0] >= lo]
        for _, s2 in active:
            if segments_cross(s, s2) is CrossKind.CROSSING:
                out.append(tuple(sorted((s.id, s2.id), key=_stable_id_key)))
        active.append((hi, s))
    return sorted(set(out), key=_stable_id_key)


# -- faces -------------------------------------------------------------------


def face_walks(g: EmbeddedGraph) -> list:
    """Raw face boundary walks from the coordinate-induced rotation system.

    Each walk is a list of directed edges (eid, tail, head) keeping the face
    on its left.  Disconnected graphs produce one outer walk per component;
    faces() merges those into shared faces.
    """
    rot = g.rotations()
    pos = {}
    for v, eids in rot.items():
        for i, eid in enumerate(eids):
            pos[(v, eid)] = i

    seen = set()
    out = []
    for v0 in sorted(g.vertices, key=_stable_id_key):
        for e0 in rot[v0]:
            d0 = (e0, v0)
            if d0 in seen:
                continue
            walk = []
            d = d0
            while d not in seen:
                seen.add(d)
                eid, tail = d
                head = g.edges[eid].other(tail)
                walk.append((eid, tail, head))
                # next edge: clockwise successor of the reversed edge at head
                i = pos[(head, eid)]
                eids = rot[head]
                nxt = eids[(i - 1) % len(eids)]
                d = (nxt, head)
            out.append(walk)
    return out


def faces(g: EmbeddedGraph, validate: bool = True) -> list:
    """Faces of the embedding; each face is a list of boundary walks.

    A connected graph has exactly one walk per face.  With several
    components the unbounded region and any face containing a nested
    component carry one walk per touching component.  Euler's identity
    V - E + F = 1 + C is asserted.
    """
    if validate:
        report = validate_embedding(g)
        if not report.ok:
            raise InvalidEmbedding(report.crossings)
    walks = face_walks(g)
    comps = connected_components_of(g)
    if len(comps) == 1:
        merged = [[w] for w in walks]
    else:
        merged = _merge_component_faces(g, walks, comps)
    euler = g.n - g.m + len(merged)
    if euler != 1 + len(comps):
        raise PlanarError(
            "Euler check failed: V-E+F=%d, 1+C=%d" % (euler, 1 + len(comps)))
    return merged


def _merge_component_faces(g, walks, comps):
    comp_of_vertex = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of_vertex[v] = ci
    comp_of_walk = [comp_of_vertex[w[0][1]] for w in walks]
    outer_walk_of_comp = {}
    for wi, walk in enumerate(walks):
        ci = comp_of_walk[wi]
        a = _walk_area2(g, walk)
        if ci not in outer_walk_of_comp or a < outer_walk_of_comp[ci][1]:
            outer_walk_of_comp[ci] = (wi, a)

    # container of each component: smallest positive-area walk of another
    # component containing the component's extreme point, else the plane
    parent_walk = {}
    for ci, comp in enumerate(comps):
        vext = min(comp, key=lambda v: (g.vertices[v][0], g.vertices[v][1],
                                        _stable_id_key(v)))
        p = g.vertices[vext]
        best = None
        for wi, walk in enumerate(walks):
            if comp_of_walk[wi] == ci:
                continue
            a = _walk_area2(g, walk)
            if a <= 0:
                continue
            if _point_in_walk(g, walk, p):
                if best is None or a < best[1]:
                    best = (wi, a)
        parent_walk[ci] = None if best is None else best[0]

    # union outer walks into their containers (or into a shared plane face)
    face_of_walk = list(range(len(walks)))

    def find(i):
        while face_of_walk[i] != i:
            face_of_walk[i] = face_of_walk[face_of_walk[i]]
            i = face_of_walk[i]
        return i

    plane_rep = None
    for ci in range(len(comps)):
        wi = outer_walk_of_comp[ci][0]
        target = parent_walk[ci]
        if target is None:
            if plane_rep is None:
                plane_rep = wi
            else:
                face_of_walk[find(wi)] = find(plane_rep)
        else:
            face_of_walk[find(wi)] = find(target)

    groups = {}
    for wi in range(len(walks)):
        groups.setdefault(find(wi), []).append(walks[wi])
    return [groups[k] for k in sorted(groups)]


def _point_in_walk(g, walk, p):
    """Crossing-number containment of p in the closed curve traced by walk.

    Edges appearing twice (both directions) cancel, which is exactly right
    for bridges on a face boundary.
    """
    crossings = 0
    px, py = p
    for eid, tail, head in walk:
        a, b = g.vertices[tail], g.vertices[head]
        if a[1] > b[1]:
            a, b = b, a
        if a[1] <= py < b[1]:
            side = orient(Point(a[0], a[1]), Point(b[0], b[1]), p)
            if side < 0:  # edge strictly to the right going upward
                crossings += 1
    return crossings % 2 == 1


def connected_component_count(g: EmbeddedGraph) -> int:
    return len(connected_components_of(g))


def connected_components_of(g: EmbeddedGraph) -> list:
    adj = g.adjacency()
    seen = set()
    comps = []
    for v in sorted(g.vertices, key=_stable_id_key):
        if v in seen:
            continue
        comp = []
        stack = [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for eid in adj[u]:
                w = g.edges[eid].other(u)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def outer_face_index(g: EmbeddedGraph, face_list) -> int:
    """Index of the unbounded face in the output of faces()."""
    for i, face in enumerate(face_list):
        total = sum(_walk_area2(g, w) for w in face)
        if total < 0:
            return i
        if total == 0 and all(_walk_area2(g, w) <= 0 for w in face):
            return i
    raise PlanarError("no unbounded face found")


def _walk_area2(g, walk):
    s = rat(0)
    for eid, tail, head in walk:
        p, q = g.vertices[tail], g.vertices[head]
        s += p[0] * q[1] - q[0] * p[1]
    return s


# -- subdivision and splits ------------------------------------------------


def subdivide_edge(g: EmbeddedGraph, eid, at: Point):
    """Split edge eid at interior point `at`.

    The fragment incident to the edge's u endpoint is canonical and carries
    the weight; the other fragment is virtual with weight 0.  Returns
    (graph, canonical_edge_id, virtual_edge_id, new_vertex_id).
    """
    e = g.edges[eid]
    seg = g.segment(eid)
    at = Point(at[0], at[1])
    if at in (seg.a, seg.b) or not on_segment(at, seg):
        raise PointNotOnEdge("%r not strictly inside edge %r" % (at, eid))
    g2 = g.copy()
    vnew = g2.fresh_vertex_id("sub")
    g2.vertices[vnew] = at
    g2.vertex_provenance[vnew] = ("subdivision-of", eid)
    del g2.edges[eid]
    src = source_edge_of(e.provenance, eid)
    prov_c = canonical_of(src) if src is not None else e.provenance
    e1 = Edge(g2.fresh_edge_id("c"), e.u, vnew, e.weight, prov_c)
    g2.edges[e1.id] = e1
    e2 = Edge(g2.fresh_edge_id("v"), vnew, e.v, rat(0), virtual())
    g2.edges[e2.id] = e2
    return g2, e1.id, e2.id, vnew


def subdivide_edge_at_points(g: EmbeddedGraph, eid, points):
    """Subdivide an edge at several interior points at once.

    Exactly one fragment stays canonical: the one incident to u (the edge's
    first endpoint).  Returns (graph, fragment edge ids in order from u).
    """
    e = g.edges[eid]
    seg = g.segment(eid)
    pts = []
    for p in points:
        p = Point(p[0], p[1])
        if p in (seg.a, seg.b):
            continue
        if not on_segment(p, seg):
            raise PointNotOnEdge("%r not on edge %r" % (p, eid))
        pts.append(p)
    if not pts:
        return g, [eid]
    # order along the segment from u
    def tkey(p):
        if seg.a[0] != seg.b[0]:
            return (p[0] - seg.a[0]) / (seg.b[0] - seg.a[0])
        return (p[1] - seg.a[1]) / (seg.b[1] - seg.a[1])

    pts = sorted(set(pts), key=tkey)
    g2 = g.copy()
    del g2.edges[eid]
    src = source_edge_of(e.provenance, eid)
    chain = [e.u]
    for p in pts:
        vnew = g2.fresh_vertex_id("sub")
        g2.vertices[vnew] = p
        g2.vertex_provenance[vnew] = ("subdivision-of", eid)
        chain.append(vnew)
    chain.append(e.v)
    out = []
    for i in range(len(chain) - 1):
        if i == 0:
            prov = canonical_of(src) if src is not None else e.provenance
            w = e.weight
        else:
            prov = virtual()
            w = rat(0)
        enew = Edge(g2.fresh_edge_id("f"), chain[i], chain[i + 1], w, prov)
        g2.edges[enew.id] = enew
        out.append(enew.id)
    return g2, out


def split_vertex(g: EmbeddedGraph, vid, part1, part2):
    """Split vertex vid into two vertices joined by a weight-0 virtual edge.

    part1/part2 partition the incident edge ids and must each be contiguous
    in the cyclic rotation around vid.  The second copy is displaced a safe
    rational distance into the angular wedge of part2 so the embedding stays
    valid.  Returns (graph, new_vertex_id, connector_edge_id).
    """
    adj = g.adjacency()[vid]
    set1, set2 = set(part1), set(part2)
    if not set1 or not set2 or set1 | set2 != set(adj) or set1 & set2:
        raise NonContiguousPartition("parts must partition the incident edges")
    rot = g.rotations()[vid]
    if not _cyclically_contiguous(rot, set1):
        raise NonContiguousPartition("parts not contiguous in rotation")

    p = g.vertices[vid]
    direction = _wedge_direction(g, vid, rot, set2)
    eps = rat(1, 2)
    for _ in range(128):
        cand = Point(p[0] + eps * direction[0], p[1] + eps * direction[1])
        g2 = _apply_split(g, vid, set2, cand)
        if validate_embedding(g2).ok:
            v2 = [v for v in g2.vertices if v not in g.vertices][0]
            conn = [e for e in g2.edges
                    if e not in g.edges and g2.edges[e].weight == 0
                    and is_virtual(g2.edges[e].provenance)
                    and vid in (g2.edges[e].u, g2.edges[e].v)][0]
            return g2, v2, conn
        eps = eps / 4
    raise PlanarError("could not place split copy of %r" % (vid,))


def _cyclically_contiguous(rot, part):
    n = len(rot)
    flags = [eid in part for eid in rot]
    changes = sum(1 for i in range(n) if flags[i] != flags[(i + 1) % n])
    return changes <= 2


def _wedge_direction(g, vid, rot, part2):
    p = g.vertices[vid]
    dirs = []
    for eid in rot:
        if eid in part2:
            e = g.edges[eid]
            q = g.vertices[e.other(vid)]
            dirs.append((q[0] - p[0], q[1] - p[1]))
    sx = sum(d[0] for d in dirs)
    sy = sum(d[1] for d in dirs)
    if sx == 0 and sy == 0:
        sx, sy = dirs[0]
    # normalize magnitude coarsely to keep bit growth small
    scale = max(abs(sx), abs(sy))
    return (sx / scale, sy / scale)


def _apply_split(g, vid, part2, cand):
    g2 = g.copy()
    v2 = g2.fresh_vertex_id("split")
    g2.vertices[v2] = cand
    g2.vertex_provenance[v2] = ("split-of", vid)
    for eid in sorted(part2, key=_stable_id_key):
        e = g2.edges[eid]
        if e.u == vid:
            g2.edges[eid] = replace(e, u=v2)
        else:
            g2.edges[eid] = replace(e, v=v2)
    conn = Edge(g2.fresh_edge_id("v"), vid, v2, rat(0), virtual())
    g2.edges[conn.id] = conn
    return g2


def contract_edge(g: EmbeddedGraph, eid):
    """Contract an edge, merging v into u. Drops self-loops created."""
    e = g.edges[eid]
    g2 = g.copy()
    del g2.edges[eid]
    u, v = e.u, e.v
    for fid in list(g2.edges):
        f = g2.edges[fid]
        nu = u if f.u == v else f.u
        nv = u if f.v == v else f.v
        if nu == nv:
            del g2.edges[fid]
        elif (nu, nv) != (f.u, f.v):
            g2.edges[fid] = replace(f, u=nu, v=nv)
    del g2.vertices[v]
    g2.vertex_provenance.pop(v, None)
    return g2


# -- graph file format -------------------------------------------------------


def write_graph(g: EmbeddedGraph, stream):
    stream.write("pg 1 %d %d\n" % (g.n, g.m))
    for vid in sorted(g.vertices, key=_stable_id_key):
        p = g.vertices[vid]
        stream.write("v %s %s %s\n" % (_fmt_id(vid), rat_to_string(p[0]),
                                       rat_to_string(p[1])))
    for eid in sorted(g.edges, key=_stable_id_key):
        e = g.edges[eid]
        stream.write("e %s %s %s %s\n" % (_fmt_id(eid), _fmt_id(e.u),
                                          _fmt_id(e.v), rat_to_string(e.weight)))


def _fmt_id(x):
    if isinstance(x, int):
        return str(x)
    return str(x).replace(" ", "_")


class ParseError(PlanarError):
    def __init__(self, line_no, msg):
        self.line_no = line_no
        super().__init__("line %d: %s" % (line_no, msg))


def read_graph(stream) -> EmbeddedGraph:
    points = {}
    edge_list = []
    header = None
    for i, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "pg":
                header = (int(parts[2]), int(parts[3]))
            elif parts[0] == "v":
                points[_parse_id(parts[1])] = (rat_from_string(parts[2]),
                                               rat_from_string(parts[3]))
            elif parts[0] == "e":
                w = rat_from_string(parts[4]) if len(parts) > 4 else rat(1)
                edge_list.append((_parse_id(parts[1]), _parse_id(parts[2]),
                                  _parse_id(parts[3]), w))
            else:
                raise ValueError("unknown record %r" % parts[0])
        except (ValueError, IndexError, ZeroDivisionError) as e:
            raise ParseError(i, str(e))
    if header is not None and (header[0] != len(points) or header[1] != len(edge_list)):
        raise ParseError(1, "header count mismatch")
    try:
        return EmbeddedGraph.build(points, edge_list)
    except PlanarError as e:
        raise ParseError(0, str(e))


def _parse_id(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok
