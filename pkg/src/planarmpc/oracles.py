"""Sequential reference algorithms used to judge every parallel result.

These implementations are deliberately plain: heap Dijkstra, sorted-edge
Kruskal, DFS, Stoer-Wagner, BFS augmenting-path max-flow.  They share no
code with the algorithms under test.
"""

from __future__ import annotations

import heapq
from .rational import rat
from .planar.graph import EmbeddedGraph, _stable_id_key

INF = None  # distances use None as infinity; comparisons go through _lt


def _lt(a, b):
    if b is None:
        return a is not None
    if a is None:
        return False
    return a < b


def dijkstra(g: EmbeddedGraph, source, adj=None):
    """Exact shortest-path distances from source; unreachable -> missing."""
    if adj is None:
        adj = g.adjacency()
    dist = {source: rat(0)}
    seen = set()
    heap = [(rat(0), _stable_id_key(source), source)]
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in seen:
            continue
        seen.add(u)
        for eid in adj[u]:
            e = g.edges[eid]
            w = e.other(u)
            nd = d + e.weight
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, _stable_id_key(w), w))
    return dist


def dijkstra_pair(g: EmbeddedGraph, s, t):
    d = dijkstra(g, s)
    return d.get(t)


def all_pairs_dijkstra(g: EmbeddedGraph):
    adj = g.adjacency()
    return {v: dijkstra(g, v, adj) for v in g.vertices}


def dfs_component_count(g: EmbeddedGraph) -> int:
    adj = g.adjacency()
    seen = set()
    count = 0
    for v in g.vertices:
        if v in seen:
            continue
        count += 1
        stack = [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            for eid in adj[u]:
                w = g.edges[eid].other(u)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


def kruskal_msf(g: EmbeddedGraph) -> set:
    """Edge ids of the minimum spanning forest; ties broken by edge id."""
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    out = set()
    for eid in sorted(g.edges, key=lambda i: (g.edges[i].weight, _stable_id_key(i))):
        e = g.edges[eid]
        ru, rv = find(e.u), find(e.v)
        if ru != rv:
            parent[ru] = rv
            out.add(eid)
    return out


def msf_weight(g: EmbeddedGraph):
    return sum((g.edges[e].weight for e in kruskal_msf(g)), rat(0))


def girth_weighted(g: EmbeddedGraph):
    """Exact weighted girth (None for forests): min over edges e of
    w(e) + dist_{G-e}(u, v)."""
    best = None
    adj = g.adjacency()
    for eid in sorted(g.edges, key=_stable_id_key):
        e = g.edges[eid]
        # Dijkstra avoiding edge eid
        dist = {e.u: rat(0)}
        seen = set()
        heap = [(rat(0), _stable_id_key(e.u), e.u)]
        while heap:
            d, _, u = heapq.heappop(heap)
            if u in seen:
                continue
            if best is not None and d + e.weight >= best:
                break
            seen.add(u)
            if u == e.v:
                break
            for fid in adj[u]:
                if fid == eid:
                    continue
                f = g.edges[fid]
                w = f.other(u)
                nd = d + f.weight
                if w not in dist or nd < dist[w]:
                    dist[w] = nd
                    heapq.heappush(heap, (nd, _stable_id_key(w), w))
        if e.v in dist and e.v in seen:
            cand = dist[e.v] + e.weight
            if best is None or cand < best:
                best = cand
    return best


def stoer_wagner_mincut(g: EmbeddedGraph):
    """Exact global min cut value of a connected weighted graph."""
    vertices = sorted(g.vertices, key=_stable_id_key)
    if len(vertices) < 2:
        return None
    # collapse multigraph to weighted adjacency
    wadj = {v: {} for v in vertices}
    for e in g.edges.values():
        wadj[e.u][e.v] = wadj[e.u].get(e.v, rat(0)) + e.weight
        wadj[e.v][e.u] = wadj[e.v].get(e.u, rat(0)) + e.weight
    merged = {v: [v] for v in vertices}
    best = None
    active = list(vertices)
    while len(active) > 1:
        # maximum adjacency order
        start = active[0]
        inset = [start]
        inflags = {start}
        weights = {v: rat(0) for v in active}
        for v, w in wadj[start].items():
            if v in weights:
                weights[v] = weights[v] + w
        while len(inset) < len(active):
            nxt = max((v for v in active if v not in inflags),
                      key=lambda v: (weights[v], _stable_id_key(v)))
            inset.append(nxt)
            inflags.add(nxt)
            for v, w in wadj[nxt].items():
                if v in weights and v not in inflags:
                    weights[v] = weights[v] + w
        t = inset[-1]
        s = inset[-2]
        cut = weights[t]
        if best is None or cut < best:
            best = cut
        # merge t into s
        for v, w in list(wadj[t].items()):
            if v == s:
                continue
            wadj[s][v] = wadj[s].get(v, rat(0)) + w
            wadj[v][s] = wadj[v].get(s, rat(0)) + w
        for v in list(wadj[t]):
            del wadj[v][t]
        del wadj[t]
        merged[s].extend(merged[t])
        active.remove(t)
    return best


def max_flow(g: EmbeddedGraph, s, t):
    """Exact undirected max flow via repeated shortest augmenting paths."""
    cap = {}
    adj = {v: set() for v in g.vertices}
    for e in g.edges.values():
        key = tuple(sorted((e.u, e.v), key=_stable_id_key))
        cap[key] = cap.get(key, rat(0)) + e.weight
        adj[e.u].add(e.v)
        adj[e.v].add(e.u)
    flow = {k: rat(0) for k in cap}

    def residual(u, v):
        key = tuple(sorted((u, v), key=_stable_id_key))
        c = cap.get(key, rat(0))
        f = flow.get(key, rat(0))
        return c - f if (u, v) == key else c + f

    total = rat(0)
    while True:
        prev = {s: None}
        queue = [s]
        qi = 0
        while qi < len(queue) and t not in prev:
            u = queue[qi]
            qi += 1
            for v in sorted(adj[u], key=_stable_id_key):
                if v not in prev and residual(u, v) > 0:
                    prev[v] = u
                    queue.append(v)
        if t not in prev:
            return total
        # bottleneck
        path = []
        v = t
        while prev[v] is not None:
            path.append((prev[v], v))
            v = prev[v]
        aug = min(residual(u, v) for u, v in path)
        for u, v in path:
            key = tuple(sorted((u, v), key=_stable_id_key))
            if (u, v) == key:
                flow[key] = flow[key] + aug
            else:
                flow[key] = flow[key] - aug
        total = total + aug


def is_disconnecting(g: EmbeddedGraph, cut_edges) -> bool:
    """True when removing cut_edges increases the component count."""
    before = dfs_component_count(g)
    keep = {eid: e for eid, e in g.edges.items() if eid not in set(cut_edges)}
    g2 = EmbeddedGraph(dict(g.vertices), keep, dict(g.vertex_provenance))
    return dfs_component_count(g2) > before


def separates(g: EmbeddedGraph, cut_edges, s, t) -> bool:
    keep = {eid: e for eid, e in g.edges.items() if eid not in set(cut_edges)}
    g2 = EmbeddedGraph(dict(g.vertices), keep, dict(g.vertex_provenance))
    dist = dijkstra(g2, s)
    return t not in dist
