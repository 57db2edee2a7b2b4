import io
import math
import random

import pytest

from planarmpc.rational import rat
from planarmpc.geom import Point
from planarmpc.planar import (
    Disconnected,
    EmbeddedGraph,
    NonContiguousPartition,
    ParseError,
    PointNotOnEdge,
    PolygonalRegion,
    connected_component_count,
    contract_edge,
    faces,
    induced_subgraph,
    is_canonical,
    is_virtual,
    outer_face_index,
    r_division,
    read_graph,
    source_edge_of,
    split_vertex,
    subdivide_edge,
    validate_embedding,
    write_graph,
)
from planarmpc.oracles import dijkstra, kruskal_msf, msf_weight
from planarmpc.generate import delaunay_graph, triangulated_grid, two_cycles


def K3():
    return EmbeddedGraph.build(
        {0: (0, 0), 1: (2, 0), 2: (1, 2)},
        [(0, 0, 1, 1), (1, 1, 2, 1), (2, 2, 0, 1)])


def K4_convex():
    return EmbeddedGraph.build(
        {0: (0, 0), 1: (2, 0), 2: (2, 2), 3: (0, 2)},
        [(0, 0, 1), (1, 1, 2), (2, 2, 3), (3, 3, 0), (4, 0, 2), (5, 1, 3)])


def test_validate_k3_ok():
    assert validate_embedding(K3()).ok


def test_validate_k4_reports_crossing_pair():
    rep = validate_embedding(K4_convex())
    assert not rep.ok
    assert rep.crossings == [(4, 5)]


def test_faces_triangle():
    assert len(faces(K3())) == 2


def test_faces_two_disjoint_triangles():
    g = EmbeddedGraph.build(
        {0: (0, 0), 1: (2, 0), 2: (1, 2), 3: (10, 0), 4: (12, 0), 5: (11, 2)},
        [(0, 0, 1), (1, 1, 2), (2, 2, 0), (3, 3, 4), (4, 4, 5), (5, 5, 3)])
    fl = faces(g)
    assert len(fl) == 3
    outer = outer_face_index(g, fl)
    assert len(fl[outer]) == 2  # shared unbounded face has two walks


def test_faces_nested_component():
    g = EmbeddedGraph.build(
        {0: (0, 0), 1: (10, 0), 2: (5, 10), 3: (4, 2), 4: (6, 2), 5: (5, 4)},
        [(0, 0, 1), (1, 1, 2), (2, 2, 0), (3, 3, 4), (4, 4, 5), (5, 5, 3)])
    fl = faces(g)
    assert len(fl) == 3
    # the big triangle's inner face carries the nested triangle's outer walk
    assert sorted(len(f) for f in fl) == [1, 1, 2]


def test_faces_euler_delaunay():
    g = delaunay_graph(100, seed=3)
    fl = faces(g)
    assert len(fl) == g.m - g.n + 2


def test_subdivide_edge_weights():
    g = EmbeddedGraph.build({0: (0, 0), 1: (2, 0)}, [(7, 0, 1, 5)])
    g2, ce, ve, vnew = subdivide_edge(g, 7, Point(1, 0))
    assert g2.edges[ce].weight == 5 and g2.edges[ve].weight == 0
    assert is_canonical(g2.edges[ce].provenance)
    assert source_edge_of(g2.edges[ce].provenance, ce) == 7
    assert is_virtual(g2.edges[ve].provenance)
    assert g2.vertex_provenance[vnew] == ("subdivision-of", 7)


def test_subdivide_rejects_endpoint():
    g = EmbeddedGraph.build({0: (0, 0), 1: (2, 0)}, [(7, 0, 1, 5)])
    with pytest.raises(PointNotOnEdge):
        subdivide_edge(g, 7, Point(2, 0))


def test_subdivide_preserves_msf_and_distance():
    g = delaunay_graph(40, seed=1, weighted=True)
    eid = sorted(g.edges)[5]
    seg = g.segment(eid)
    mid = Point((seg.a.x + seg.b.x) / rat(2), (seg.a.y + seg.b.y) / rat(2))
    g2, ce, ve, _ = subdivide_edge(g, eid, mid)

    msf1 = kruskal_msf(g)
    msf2 = kruskal_msf(g2)
    assert (eid in msf1) == (ce in msf2)
    assert msf_weight(g) == msf_weight(g2)

    s, t = sorted(g.vertices)[0], sorted(g.vertices)[-1]
    assert dijkstra(g, s).get(t) == dijkstra(g2, s).get(t)


def test_split_vertex_preserves_metrics():
    g = delaunay_graph(30, seed=2, weighted=True)
    rot = g.rotations()
    vid = max(sorted(g.vertices), key=lambda v: len(rot[v]))
    eids = rot[vid]
    assert len(eids) >= 4
    half = len(eids) // 2
    g2, v2, conn = split_vertex(g, vid, eids[:half], eids[half:])
    assert validate_embedding(g2).ok
    assert g2.edges[conn].weight == 0
    assert msf_weight(g) == msf_weight(g2)
    s = sorted(g.vertices)[0]
    d1 = dijkstra(g, s)
    d2 = dijkstra(g2, s)
    for v in g.vertices:
        if v == vid:
            continue
        assert d1.get(v) == d2.get(v)


def test_split_vertex_rejects_noncontiguous():
    g = delaunay_graph(30, seed=2)
    rot = g.rotations()
    vid = max(sorted(g.vertices), key=lambda v: len(rot[v]))
    eids = rot[vid]
    assert len(eids) >= 4
    with pytest.raises(NonContiguousPartition):
        split_vertex(g, vid, [eids[0], eids[2]], [eids[1]] + eids[3:])


def test_split_then_contract_restores_graph():
    g = K3()
    rot = g.rotations()
    g2, v2, conn = split_vertex(g, 0, [rot[0][0]], [rot[0][1]])
    g3 = contract_edge(g2, conn)
    assert set(g3.vertices) == set(g.vertices)
    pairs = sorted((tuple(sorted((e.u, e.v), key=repr)), e.weight)
                   for e in g3.edges.values())
    pairs0 = sorted((tuple(sorted((e.u, e.v), key=repr)), e.weight)
                    for e in g.edges.values())
    assert pairs == pairs0


# -- r-division ---------------------------------------------------------------

def _audit_division(g, div, r, c1=16, c2=12, h0=6):
    n = g.n
    assert len(div.pieces) <= max(1, c1 * n // r)
    covered = set()
    for piece in div.pieces:
        assert len(piece.vertices) <= r
        assert len(piece.boundary) <= c2 * math.isqrt(r)
        assert piece.holes <= h0
        covered |= piece.edges
    assert covered == set(g.edges)


def test_rdivision_single_piece_when_small():
    g = K3()
    div = r_division(g, 10)
    assert len(div.pieces) == 1
    assert div.pieces[0].boundary == set()


def test_rdivision_grid():
    g = triangulated_grid(32, 32)
    div = r_division(g, 64)
    _audit_division(g, div, 64)


def test_rdivision_delaunay():
    g = delaunay_graph(500, seed=11)
    div = r_division(g, 50)
    _audit_division(g, div, 50)


def test_rdivision_tree():
    # star-free filament: a path is the worst case for cycle separators
    from planarmpc.generate import path_graph
    g = path_graph(100)
    div = r_division(g, 10)
    covered = set()
    for piece in div.pieces:
        assert len(piece.vertices) <= 10
        covered |= piece.edges
    assert covered == set(g.edges)


def test_rdivision_rejects_disconnected():
    g = two_cycles(12)
    with pytest.raises(Disconnected):
        r_division(g, 4)


def test_rdivision_total_boundary_audit():
    g = triangulated_grid(24, 24)
    r = 36
    div = r_division(g, r)
    total_boundary = sum(len(p.boundary) for p in div.pieces)
    assert total_boundary <= 12 * 16 * g.n // math.isqrt(r)


# -- induced subgraph ---------------------------------------------------------

def test_induced_single_edge_through_square():
    g = EmbeddedGraph.build({0: (-1, 0), 1: (3, 0)}, [(0, 0, 1, 4)])
    P = PolygonalRegion.box(0, -1, 2, 1)
    pe = induced_subgraph(g, P)
    assert pe.graph.m == 1
    (e,) = pe.graph.edges.values()
    pa, pb = pe.graph.vertices[e.u], pe.graph.vertices[e.v]
    assert sorted([(pa.x, pa.y), (pb.x, pb.y)]) == [(0, 0), (2, 0)]
    assert pe.terminal_count() == 2


def test_induced_double_crossing_two_pieces():
    # edge leaves and re-enters a U-shaped region approximated by a box with
    # a notch hole: use a box with a rectangular hole so the edge crosses the
    # hole and comes back
    P = PolygonalRegion([
        [Point(0, 0), Point(10, 0), Point(10, 6), Point(0, 6)],
        [Point(4, 2), Point(4, 4), Point(6, 4), Point(6, 2)],
    ]).normalized()
    g = EmbeddedGraph.build({0: (1, 3), 1: (9, 3)}, [(0, 0, 1, 7)])
    pe = induced_subgraph(g, P)
    assert pe.graph.m == 2
    provs = sorted(repr(e.provenance) for e in pe.graph.edges.values())
    assert sum(1 for e in pe.graph.edges.values() if is_virtual(e.provenance)) == 1
    assert sum(1 for e in pe.graph.edges.values()
               if is_canonical(e.provenance)) == 1


def test_induced_identity_when_inside():
    g = K3()
    P = PolygonalRegion.box(-5, -5, 5, 5)
    pe = induced_subgraph(g, P)
    assert pe.graph.m == g.m and pe.graph.n == g.n
    assert pe.terminal_count() == 0


def test_induced_canonical_bijection_over_partition():
    # partition a box into left/right halves; every crossing edge must keep
    # exactly one canonical fragment over the whole partition
    g = delaunay_graph(60, seed=4, weighted=True)
    xs = sorted(p.x for p in g.vertices.values())
    midx = xs[len(xs) // 2] + rat(1, 3)
    lo = min(xs) - 1
    hi = max(xs) + 1
    ys = sorted(p.y for p in g.vertices.values())
    loy, hiy = min(ys) - 1, max(ys) + 1
    left = PolygonalRegion([[Point(lo, loy), Point(midx, loy),
                             Point(midx, hiy), Point(lo, hiy)]])
    right = PolygonalRegion([[Point(midx, loy), Point(hi, loy),
                              Point(hi, hiy), Point(midx, hiy)]])
    pe_l = induced_subgraph(g, left)
    pe_r = induced_subgraph(g, right)
    canon = {}
    for pe in (pe_l, pe_r):
        for e in pe.graph.edges.values():
            src = source_edge_of(e.provenance, e.id)
            if src is not None:
                canon[src] = canon.get(src, 0) + 1
    assert set(canon) == set(g.edges)
    assert all(v == 1 for v in canon.values())


# -- file format ---------------------------------------------------------------

def test_graph_roundtrip():
    g = delaunay_graph(25, seed=9, weighted=True)
    buf = io.StringIO()
    write_graph(g, buf)
    g2 = read_graph(io.StringIO(buf.getvalue()))
    assert g2.n == g.n and g2.m == g.m
    buf2 = io.StringIO()
    write_graph(g2, buf2)
    assert buf.getvalue() == buf2.getvalue()


def test_parse_error_zero_denominator():
    text = "pg 1 1 0\nv 0 1/0 2/1\n"
    with pytest.raises(ParseError) as ei:
        read_graph(io.StringIO(text))
    assert ei.value.line_no == 2


def test_parse_comments_and_default_weight():
    text = "# comment\npg 1 2 1\nv 0 0/1 0/1\nv 1 1/1 0/1\ne 9 0 1\n"
    g = read_graph(io.StringIO(text))
    assert g.edges[9].weight == 1
