"""Divisions of embedded planar graphs into pieces with few holes.

A division here is a partition of the bounded faces of the graph; pieces
inherit their edges and vertices from their faces.  Refinement alternates
cycle separators balancing whichever budget a piece violates: vertex
count, boundary vertex count, or topological hole count.  Cycle candidates
are non-tree edges of a BFS tree, scored in O(1) each through the dual
spanning tree of a star triangulation, then validated exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graph import (
    Disconnected,
    EmbeddedGraph,
    PlanarError,
    TooSmall,
    connected_components_of,
    faces,
    outer_face_index,
    _stable_id_key,
)


@dataclass
class Piece:
    faces: set            # bounded face ids owned by the piece
    edges: set            # edge ids bounding an owned face (plus attachments)
    vertices: set
    boundary: set         # vertices shared with other pieces or the outside
    holes: int            # topological holes, exterior included


@dataclass
class Division:
    pieces: list
    face_of: dict         # bounded face id -> piece index
    face_walks: list      # all face walks of the source graph
    outer_face: int

    def piece_count(self):
        return len(self.pieces)


def r_division(g: EmbeddedGraph, r: int, *, c1: int = 16, c2: int = 12,
               h0: int = 6) -> Division:
    """Partition g into pieces of at most r vertices with small boundary
    and at most h0 topological holes each."""
    if r < 2:
        raise TooSmall("r must be at least 2")
    comps = connected_components_of(g)
    if len(comps) != 1:
        raise Disconnected("r_division needs a connected graph")

    face_list = faces(g)
    walks = [w for face in face_list for w in face]
    # bounded faces only are assignable; map directed edges to face ids
    outer = outer_face_index(g, face_list)
    walk_face = {}
    flat_walks = []
    for fi, face in enumerate(face_list):
        for w in face:
            walk_face[len(flat_walks)] = fi
            flat_walks.append(w)
    dir_face = {}
    for wi, w in enumerate(flat_walks):
        for eid, tail, head in w:
            dir_face[(eid, tail)] = walk_face[wi]

    bounded = [fi for fi in range(len(face_list)) if fi != outer]

    ctx = _Ctx(g, dir_face, face_list, outer)

    if g.n <= r:
        piece = _piece_from_faces(ctx, set(bounded))
        piece.boundary = set()
        return Division([piece], {f: 0 for f in bounded}, flat_walks, outer)

    if not bounded:
        return _forest_division(g, r, flat_walks, outer)
    done = []
    work = [set(bounded)]
    bsqrt = c2 * math.isqrt(r)
    while work:
        fs = work.pop()
        piece = _piece_from_faces(ctx, fs)
        # boundary of an in-progress piece: vertices touching faces outside fs
        piece.boundary = _shared_vertices(ctx, fs)
        if (len(piece.vertices) <= r and len(piece.boundary) <= bsqrt
                and piece.holes <= h0):
            done.append((fs, piece))
            continue
        if piece.holes > h0:
            mode = "holes"
        elif len(piece.vertices) > r:
            mode = "vertices"
        else:
            mode = "boundary"
        halves = _split_piece(ctx, fs, piece, mode)
        if halves is None:
            # no separating cycle: carve off faces around a heavy vertex
            halves = _fallback_split(ctx, fs)
        for h in halves:
            for comp in _dual_components(ctx, h):
                work.append(comp)

    done = _merge_small(ctx, done, r, bsqrt, h0)

    face_of = {}
    pieces = []
    for idx, (fs, piece) in enumerate(done):
        for f in fs:
            face_of[f] = idx
        pieces.append(piece)
    _finalize_boundaries(ctx, pieces, face_of)
    return Division(pieces, face_of, flat_walks, outer)


# ---------------------------------------------------------------------------


class _Ctx:
    def __init__(self, g, dir_face, face_list, outer):
        self.g = g
        self.dir_face = dir_face
        self.face_list = face_list
        self.outer = outer
        self.rot = g.rotations()
        self.pos = {}
        for v, eids in self.rot.items():
            for i, eid in enumerate(eids):
                self.pos[(v, eid)] = i
        self.edge_faces = {}
        for eid in g.edges:
            e = g.edges[eid]
            self.edge_faces[eid] = (dir_face[(eid, e.u)], dir_face[(eid, e.v)])
        self.face_edges = {}
        for fi, face in enumerate(face_list):
            out = []
            for w in face:
                out.extend(item[0] for item in w)
            self.face_edges[fi] = out
        self.face_vertices = {}
        for fi, face in enumerate(face_list):
            vs = set()
            for w in face:
                for eid, tail, head in w:
                    vs.add(tail)
                    vs.add(head)
            self.face_vertices[fi] = vs


def _piece_from_faces(ctx, fs) -> Piece:
    g = ctx.g
    edges = set()
    for f in fs:
        edges.update(ctx.face_edges[f])
    vertices = set()
    for eid in edges:
        e = g.edges[eid]
        vertices.add(e.u)
        vertices.add(e.v)
    holes = _hole_count(ctx, fs, edges)
    return Piece(set(fs), edges, vertices, set(), holes)


def _hole_count(ctx, fs, edges) -> int:
    """Number of boundary contours of the face set: faces of the piece
    subgraph that are not owned faces.  Counted by tracing boundary edge
    sides (edges with exactly one side in fs) into closed contours."""
    g = ctx.g
    boundary_dirs = []
    for eid in edges:
        e = g.edges[eid]
        fl = ctx.dir_face[(eid, e.u)]
        fr = ctx.dir_face[(eid, e.v)]
        if (fl in fs) != (fr in fs):
            # directed so the owned face is on the left
            boundary_dirs.append((eid, e.u) if fl in fs else (eid, e.v))
        elif fl not in fs and fr not in fs:
            # attachment edge owned by neither side face: both sides on contour
            boundary_dirs.append((eid, e.u))
            boundary_dirs.append((eid, e.v))
    if not boundary_dirs:
        return 0
    piece_edges = edges
    unused = set(boundary_dirs)
    contours = 0
    while unused:
        d = min(unused, key=_stable_id_key)
        while d in unused:
            unused.discard(d)
            eid, tail = d
            head = g.edges[eid].other(tail)
            # next boundary edge around head staying on piece edges: rotate
            # clockwise from the reversed edge until an edge of the piece
            eids = ctx.rot[head]
            i = ctx.pos[(head, eid)]
            for step in range(1, len(eids) + 1):
                cand = eids[(i - step) % len(eids)]
                if cand in piece_edges:
                    d = (cand, head)
                    break
        contours += 1
    return contours


def _shared_vertices(ctx, fs) -> set:
    out = set()
    for eid in _piece_edge_iter(ctx, fs):
        fl, fr = ctx.edge_faces[eid]
        if (fl in fs) != (fr in fs) or (fl not in fs and fr not in fs):
            e = ctx.g.edges[eid]
            out.add(e.u)
            out.add(e.v)
    return out


def _piece_edge_iter(ctx, fs):
    seen = set()
    for f in fs:
        for eid in ctx.face_edges[f]:
            if eid not in seen:
                seen.add(eid)
                yield eid


def _dual_components(ctx, fs):
    """Split a face set into dual-connected components (shared-edge adjacency)."""
    fs = set(fs)
    comps = []
    while fs:
        start = next(iter(sorted(fs)))
        comp = {start}
        fs.discard(start)
        stack = [start]
        while stack:
            f = stack.pop()
            for eid in ctx.face_edges[f]:
                fl, fr = ctx.edge_faces[eid]
                for nxt in (fl, fr):
                    if nxt in fs:
                        fs.discard(nxt)
                        comp.add(nxt)
                        stack.append(nxt)
        comps.append(comp)
    return comps


def _split_piece(ctx, fs, piece, mode):
    """Best balanced fundamental-cycle split of the piece face set, or None."""
    g = ctx.g
    sub_edges = sorted(set(_piece_edge_iter(ctx, fs)), key=_stable_id_key)
    sub_vertices = sorted(piece.vertices, key=_stable_id_key)
    adj = {v: [] for v in sub_vertices}
    for eid in sub_edges:
        e = g.edges[eid]
        adj[e.u].append(eid)
        adj[e.v].append(eid)

    # BFS spanning tree over the piece graph
    root = sub_vertices[0]
    parent = {root: None}
    parent_edge = {root: None}
    depth = {root: 0}
    order = [root]
    qi = 0
    while qi < len(order):
        u = order[qi]
        qi += 1
        for eid in adj[u]:
            w = g.edges[eid].other(u)
            if w not in parent:
                parent[w] = u
                parent_edge[w] = eid
                depth[w] = depth[u] + 1
                order.append(w)
    if len(parent) != len(sub_vertices):
        return None  # piece graph disconnected; caller repairs
    tree_edges = {parent_edge[v] for v in sub_vertices if parent_edge[v] is not None}
    nontree = [eid for eid in sub_edges if eid not in tree_edges]
    if not nontree:
        return None

    weights = _face_weights(ctx, fs, piece, mode)
    total = sum(weights.values())
    if total == 0:
        return None

    # score candidates by the weight enclosed by their fundamental cycle,
    # computed exactly per candidate via a face-side fill; candidates are
    # pre-ranked by cycle length to keep boundaries small
    nontree.sort(key=lambda eid: _cycle_len(g, parent, depth, eid))
    best = None
    tried = 0
    for eid in nontree:
        if tried >= 24 and best is not None:
            break
        tried += 1
        cyc = _fundamental_cycle(g, parent, parent_edge, depth, eid)
        inside = _faces_inside_cycle(ctx, fs, cyc)
        if inside is None:
            continue
        w_in = sum(weights.get(f, 0) for f in inside)
        w_out = total - w_in
        if min(w_in, w_out) == 0:
            continue
        score = min(w_in, w_out)
        if best is None or score > best[0]:
            best = (score, inside)
    if best is None:
        return None
    inside = best[1]
    outside = fs - inside
    if not inside or not outside:
        return None
    return [inside, outside]


def _face_weights(ctx, fs, piece, mode):
    if mode == "holes":
        # weight each boundary contour onto one adjacent owned face
        w = {}
        for eid in _piece_edge_iter(ctx, fs):
            fl, fr = ctx.edge_faces[eid]
            owned = fl if fl in fs else (fr if fr in fs else None)
            other = fr if owned == fl else fl
            if owned is not None and other not in fs:
                w[owned] = w.get(owned, 0) + 1
        if not w:
            w = {f: 1 for f in fs}
        return w
    if mode == "boundary":
        targets = piece.boundary
    else:
        targets = piece.vertices
    w = {}
    assigned = set()
    for f in sorted(fs):
        for v in ctx.face_vertices[f]:
            if v in targets and v not in assigned:
                assigned.add(v)
                w[f] = w.get(f, 0) + 1
    return w


def _cycle_len(g, parent, depth, eid):
    e = g.edges[eid]
    return depth[e.u] + depth[e.v]


def _fundamental_cycle(g, parent, parent_edge, depth, eid):
    """Vertex list of the cycle closed by non-tree edge eid."""
    e = g.edges[eid]
    a, b = e.u, e.v
    pa, pb = [a], [b]
    while depth[pa[-1]] > depth[pb[-1]]:
        pa.append(parent[pa[-1]])
    while depth[pb[-1]] > depth[pa[-1]]:
        pb.append(parent[pb[-1]])
    while pa[-1] != pb[-1]:
        pa.append(parent[pa[-1]])
        pb.append(parent[pb[-1]])
    cyc_vertices = pa + pb[-2::-1]
    cyc_edges = {eid}
    for path in (pa, pb):
        for v in path[:-1]:
            cyc_edges.add(parent_edge[v])
    return cyc_vertices, cyc_edges


def _faces_inside_cycle(ctx, fs, cyc):
    """Owned faces strictly enclosed by the cycle (dual fill not crossing
    cycle edges, seeded from a face adjacent to the cycle on its right)."""
    cyc_vertices, cyc_edges = cyc
    g = ctx.g
    # fill from each side; the side not reaching outside fs faces is "inside"
    eid0 = next(iter(sorted(cyc_edges, key=_stable_id_key)))
    e0 = g.edges[eid0]
    f_left = ctx.dir_face[(eid0, e0.u)]
    f_right = ctx.dir_face[(eid0, e0.v)]
    side_a, esc_a = _dual_fill(ctx, f_left, cyc_edges)
    if not esc_a:
        inner = side_a
    else:
        side_b, esc_b = _dual_fill(ctx, f_right, cyc_edges)
        if not esc_b:
            inner = side_b
        else:
            return None  # cycle is not separating in the face structure
    inner_owned = {f for f in inner if f in fs}
    return inner_owned if inner_owned else None


def _dual_fill(ctx, seed, blocked_edges):
    """Flood faces from seed without crossing blocked edges.

    Returns (faces reached, escaped) where escaped means the outer face was
    reached (the fill leaked outside the cycle).
    """
    seen = {seed}
    stack = [seed]
    escaped = seed == ctx.outer
    while stack:
        f = stack.pop()
        for eid in ctx.face_edges[f]:
            if eid in blocked_edges:
                continue
            fl, fr = ctx.edge_faces[eid]
            nxt = fr if fl == f else fl
            if nxt not in seen:
                seen.add(nxt)
                if nxt == ctx.outer:
                    escaped = True
                stack.append(nxt)
    return seen, escaped


def _fallback_split(ctx, fs):
    """Carve the faces around the heaviest vertex into one child.

    Guarantees progress when no separating cycle exists (filament-like
    pieces); boundary quality is recovered by later merge passes.
    """
    counts = {}
    for f in sorted(fs):
        for v in ctx.face_vertices[f]:
            counts[v] = counts.get(v, 0) + 1
    v = max(sorted(counts, key=_stable_id_key), key=lambda u: counts[u])
    around = {f for f in fs if v in ctx.face_vertices[f]}
    rest = fs - around
    if not rest:
        # split the star itself in half deterministically
        ordered = sorted(around)
        half = max(1, len(ordered) // 2)
        return [set(ordered[:half]), set(ordered[half:])]
    return [around, rest]


def _merge_small(ctx, done, r, bsqrt, h0):
    """Greedy recombination of adjacent small pieces within all budgets."""
    items = [(set(fs), piece) for fs, piece in done]
    changed = True
    while changed:
        changed = False
        items.sort(key=lambda t: len(t[1].vertices))
        for i in range(len(items)):
            fs_i, p_i = items[i]
            if len(p_i.vertices) > r // 2:
                continue
            for j in range(len(items)):
                if i == j:
                    continue
                fs_j, p_j = items[j]
                if not (p_i.vertices & p_j.vertices):
                    continue
                fs_new = fs_i | fs_j
                cand = _piece_from_faces(ctx.g, fs_new, ctx.dir_face,
                                         ctx.face_list, ctx.outer)
                cand.boundary = _shared_vertices(ctx, fs_new)
                if (len(cand.vertices) <= r and len(cand.boundary) <= bsqrt
                        and cand.holes <= h0):
                    items[i] = (fs_new, cand)
                    items.pop(j)
                    changed = True
                    break
            if changed:
                break
    return items


def _finalize_boundaries(ctx, pieces, face_of):
    """Boundary vertices: endpoints of edges bounding faces of two pieces
    (or a piece face and an unowned face)."""
    for idx, piece in enumerate(pieces):
        bd = set()
        for eid in sorted(piece.edges, key=_stable_id_key):
            fl, fr = ctx.edge_faces[eid]
            o_l = face_of.get(fl)
            o_r = face_of.get(fr)
            if o_l != idx and o_r != idx:
                continue
            if o_l != o_r:
                e = ctx.g.edges[eid]
                bd.add(e.u)
                bd.add(e.v)
        piece.boundary = bd


def _forest_division(g, r, flat_walks, outer):
    """Division of a graph with no bounded faces (a tree): split the tree
    into edge chunks of at most r vertices around centroid-ish splits."""
    adj = g.adjacency()
    order = sorted(g.vertices, key=_stable_id_key)
    root = order[0]
    parent = {root: None}
    parent_edge = {root: None}
    seq = [root]
    qi = 0
    while qi < len(seq):
        u = seq[qi]
        qi += 1
        for eid in adj[u]:
            w = g.edges[eid].other(u)
            if w not in parent:
                parent[w] = u
                parent_edge[w] = eid
                seq.append(w)
    size = {v: 1 for v in g.vertices}
    for v in reversed(seq):
        if parent[v] is not None:
            size[parent[v]] += size[v]

    pieces = []
    assigned = set()

    def emit(edge_set):
        vs = set()
        for eid in edge_set:
            e = g.edges[eid]
            vs.add(e.u)
            vs.add(e.v)
        pieces.append(Piece(set(), set(edge_set), vs, set(), 1))

    bucket = []
    bucket_vs = set()
    for v in reversed(seq):
        eid = parent_edge[v]
        if eid is None or eid in assigned:
            continue
        assigned.add(eid)
        e = g.edges[eid]
        bucket.append(eid)
        bucket_vs.update((e.u, e.v))
        if len(bucket_vs) >= r:
            emit(bucket)
            bucket, bucket_vs = [], set()
    if bucket:
        emit(bucket)
    counts = {}
    for piece in pieces:
        for v in piece.vertices:
            counts[v] = counts.get(v, 0) + 1
    for piece in pieces:
        piece.boundary = {v for v in piece.vertices if counts[v] > 1}
    return Division(pieces, {}, flat_walks, outer)
