"""Test-instance generators: Delaunay triangulations of random integer
points, grid graphs, and one-vs-two-cycle stress instances."""

from __future__ import annotations

import random

from .rational import rat
from .geom import Point
from .planar.graph import EmbeddedGraph, validate_embedding


def delaunay_graph(n, seed=0, *, span=None, weighted=False,
                   drop_fraction=0.0) -> EmbeddedGraph:
    """Delaunay triangulation of n random integer-snapped points.

    Optionally drops a fraction of edges (isolated vertices are removed),
    which is the stock way to make sparse random planar instances.
    """
    if n < 3:
        raise ValueError("delaunay needs n >= 3")
    from scipy.spatial import Delaunay  # deferred: generator-only dependency
    import numpy as np

    rng = random.Random(seed)
    span = span or max(4 * n, 64)
    pts = {}
    while len(pts) < n:
        x = rng.randint(0, span)
        y = rng.randint(0, span)
        pts[(x, y)] = True
    coords = sorted(pts)
    tri = Delaunay(np.array(coords, dtype=float))
    edge_set = set()
    for simplex in tri.simplices:
        a, b, c = (int(v) for v in simplex)
        for u, v in ((a, b), (b, c), (a, c)):
            edge_set.add((min(u, v), max(u, v)))
    edges = sorted(edge_set)
    if drop_fraction:
        keep = max(1, int(len(edges) * (1.0 - drop_fraction)))
        edges = rng.sample(edges, keep)
        edges.sort()
    points = {i: (rat(x), rat(y)) for i, (x, y) in enumerate(coords)}
    used = {u for e in edges for u in e}
    points = {i: p for i, p in points.items() if i in used}
    edge_list = []
    for k, (u, v) in enumerate(edges):
        w = rat(rng.randint(1, 1000), rng.randint(1, 8)) if weighted else rat(1)
        edge_list.append((k, u, v, w))
    g = EmbeddedGraph.build(points, edge_list)
    report = validate_embedding(g)
    if not report.ok:  # qhull produced a degenerate triangulation; reseed
        return delaunay_graph(n, seed + 7919, span=span, weighted=weighted,
                              drop_fraction=drop_fraction)
    return g


def grid_graph(w, h, *, weighted=False, seed=0, scale=1) -> EmbeddedGraph:
    """w x h grid with unit or random rational weights."""
    rng = random.Random(seed)
    points = {}
    edge_list = []
    for y in range(h):
        for x in range(w):
            points[y * w + x] = (rat(scale * x), rat(scale * y))
    k = 0
    for y in range(h):
        for x in range(w):
            v = y * w + x
            if x + 1 < w:
                wt = rat(rng.randint(1, 100)) if weighted else rat(1)
                edge_list.append((k, v, v + 1, wt))
                k += 1
            if y + 1 < h:
                wt = rat(rng.randint(1, 100)) if weighted else rat(1)
                edge_list.append((k, v, v + w, wt))
                k += 1
    return EmbeddedGraph.build(points, edge_list)


def triangulated_grid(w, h, *, weighted=False, seed=0) -> EmbeddedGraph:
    """Grid plus one diagonal per cell: a proper triangulation."""
    g = grid_graph(w, h, weighted=weighted, seed=seed)
    rng = random.Random(seed + 1)
    edges = {eid: (e.u, e.v, e.weight) for eid, e in g.edges.items()}
    k = len(edges)
    points = {vid: (p[0], p[1]) for vid, p in g.vertices.items()}
    edge_list = [(eid, u, v, wt) for eid, (u, v, wt) in edges.items()]
    for y in range(h - 1):
        for x in range(w - 1):
            v = y * w + x
            wt = rat(rng.randint(1, 100)) if weighted else rat(1)
            edge_list.append((k, v, v + w + 1, wt))
            k += 1
    return EmbeddedGraph.build(points, edge_list)


def two_cycles(n, *, split=None) -> EmbeddedGraph:
    """Two disjoint cycles with n vertices total (the classic stress shape)."""
    if n < 6:
        raise ValueError("two_cycles needs n >= 6")
    n1 = split or n // 2
    n2 = n - n1
    points = {}
    edge_list = []

    def ring(offset, count, cx):
        # convex polygon placed by angle rank: integer points on a wide arc
        ids = []
        for i in range(count):
            # place on a parabola-ish convex arc to stay integral and convex
            x = cx + i
            y = i * i
            points[offset + i] = (rat(x), rat(y))
            ids.append(offset + i)
        return ids

    r1 = ring(0, n1, 0)
    r2 = ring(n1, n2, 10 * n)
    k = 0
    for ids in (r1, r2):
        for i in range(len(ids)):
            edge_list.append((k, ids[i], ids[(i + 1) % len(ids)], rat(1)))
            k += 1
    return EmbeddedGraph.build(points, edge_list)


def one_cycle(n) -> EmbeddedGraph:
    points = {}
    edge_list = []
    for i in range(n):
        points[i] = (rat(i), rat(i * i))
    for i in range(n):
        edge_list.append((i, i, (i + 1) % n, rat(1)))
    return EmbeddedGraph.build(points, edge_list)


def path_graph(n, *, weights=None) -> EmbeddedGraph:
    points = {i: (rat(i), rat(0)) for i in range(n)}
    edge_list = []
    for i in range(n - 1):
        w = weights[i] if weights else rat(1)
        edge_list.append((i, i, i + 1, w))
    return EmbeddedGraph.build(points, edge_list)
