"""Shortest-path and shortest-cycle kernels.

Two backends: a scipy CSR Dijkstra for bulk single-source sweeps (exact for
integer weights as long as the total weight fits in a float64 mantissa) and
a pure-python heap Dijkstra used for arbitrary-precision weights and for the
deterministic tie-breaking the decomposition code needs.
"""

from __future__ import annotations

import heapq

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

# Above this the float64 fast path could round; fall back to exact ints.
_FLOAT_EXACT_LIMIT = 2 ** 53

INF = float("inf")


class WeightedGraph:
    """Undirected multigraph in CSR form for repeated shortest-path queries."""

    def __init__(self, n, edges):
        self.n = n
        self.edges = list(edges)
        self._total = sum(w for (_u, _v, w) in self.edges)
        self.exact_floats = self._total < _FLOAT_EXACT_LIMIT
        # parallel edges collapse to their minimum (csr would sum duplicates);
        # loops never lie on shortest paths and are dropped here
        least: dict[tuple[int, int], float] = {}
        for u, v, w in self.edges:
            if u == v:
                continue
            w = float(w)
            if least.get((u, v), INF) > w:
                least[(u, v)] = w
                least[(v, u)] = w
        if least:
            rows = np.fromiter((k[0] for k in least), dtype=np.int64, count=len(least))
            cols = np.fromiter((k[1] for k in least), dtype=np.int64, count=len(least))
            data = np.fromiter(least.values(), dtype=np.float64, count=len(least))
            self._csr = csr_matrix((data, (rows, cols)), shape=(n, n))
        else:
            self._csr = None
        self._adj = None  # lazy python adjacency: v -> [(nbr, w, edge id)]
        self._pair_lookup = None

    def adjacency(self):
        if self._adj is None:
            adj = [[] for _ in range(self.n)]
            for e, (u, v, w) in enumerate(self.edges):
                adj[u].append((v, w, e))
                adj[v].append((u, w, e))
            self._adj = adj
        return self._adj

    # -- bulk distances ----------------------------------------------------

    def distances(self, sources, limit=None):
        """Distance matrix ``len(sources) x n`` (float64, inf if unreachable).

        ``limit`` prunes each search; entries beyond it come back as inf.
        """
        if self.exact_floats and self._csr is not None:
            kw = {} if limit is None else {"limit": float(limit)}
            return _sp_dijkstra(self._csr, directed=False, indices=list(sources), **kw)
        return np.array([self._py_dijkstra(s)[0] for s in sources], dtype=np.float64)

    def shortest_path_tree(self, source):
        """(dist, predecessor vertex) arrays from one source."""
        if self.exact_floats and self._csr is not None:
            dist, pred = _sp_dijkstra(self._csr, directed=False, indices=source,
                                      return_predecessors=True)
            return dist, pred
        dist, pred = self._py_dijkstra(source)
        return np.array(dist, dtype=np.float64), np.array(pred, dtype=np.int64)

    def _py_dijkstra(self, source):
        adj = self.adjacency()
        dist = [INF] * self.n
        pred = [-9999] * self.n
        dist[source] = 0
        heap = [(0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for v, w, _e in adj[u]:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    pred[v] = u
                    heapq.heappush(heap, (nd, v))
        return dist, pred

    def path_edges(self, dist, pred, target):
        """Edge ids of a shortest path to ``target`` given a predecessor tree.

        Parallel edges make vertex predecessors ambiguous; the lowest edge id
        consistent with the distances is chosen.
        """
        if dist[target] == INF or np.isinf(dist[target]):
            raise ValueError("target unreachable")
        lookup = getattr(self, "_pair_lookup", None)
        if lookup is None:
            lookup = {}
            for e, (u, v, w) in enumerate(self.edges):
                lookup.setdefault((u, v), []).append((e, w))
                lookup.setdefault((v, u), []).append((e, w))
            self._pair_lookup = lookup
        out = []
        v = target
        while pred[v] >= 0:
            u = int(pred[v])
            best = None
            for e, w in lookup[(u, v)]:
                if dist[u] + w == dist[v] and (best is None or e < best):
                    best = e
            if best is None:
                raise ValueError("predecessor tree inconsistent with distances")
            out.append(best)
            v = u
        out.reverse()
        return out, v


def surface_graph(surface) -> WeightedGraph:
    """CSR view of a surface's underlying weighted graph (cached)."""
    key = "wgraph"
    if key not in surface._cache:
        surface._cache[key] = WeightedGraph(
            surface.n,
            list(zip(surface.edge_u, surface.edge_v, surface.weight)),
        )
    return surface._cache[key]


def boundary_shortest_forest(surface, roots):
    """Multi-source Dijkstra over darts with deterministic tie-breaking.

    Grows shortest-path trees from every root simultaneously.  Edges into a
    root are never relaxed, so each tree contains exactly one root (this is
    the contraction of the root set in disguise).  Distance ties prefer the
    lower incoming dart id, which pins the forest uniquely.

    Returns ``(dist, parent_dart)``; roots have parent ``-1``.
    """
    rootset = set(roots)
    dist = {v: 0 for v in rootset}
    parent = {v: -1 for v in rootset}
    done = set()
    heap = [(0, -1, v) for v in sorted(rootset)]
    heapq.heapify(heap)
    while heap:
        d, via, u = heapq.heappop(heap)
        if u in done:
            continue
        # first pop carries the lexicographically best (dist, dart); fixing
        # the parent at settlement keeps the forest acyclic under 0-weight ties
        done.add(u)
        dist[u] = d
        parent[u] = via
        for dart in surface.rot[u]:
            v = surface.head(dart)
            if v in rootset or v in done:
                continue
            nd = d + surface.dart_weight(dart)
            cur = dist.get(v)
            if cur is None or nd < cur or (nd == cur and dart < parent[v]):
                dist[v] = nd
                parent[v] = dart
                heapq.heappush(heap, (nd, dart, v))
    return dist, parent


def forest_path_darts(surface, parent, v):
    """Darts of the forest path root -> v (empty if v is a root)."""
    out = []
    while parent[v] != -1:
        d = parent[v]
        out.append(d)
        v = surface.tail(d)
    out.reverse()
    return out


def girth(n, edges):
    """Minimum-weight simple cycle of an undirected multigraph.

    Returns ``(weight, edge ids along the cycle)`` or ``None`` for a forest.
    The value equals ``min over edges e of dist_{G minus e}(u, v) + w(e)``;
    it is computed by pruned searches instead of per-edge deletions.
    Self-loops are weight-w cycles; parallel edges form two-edge cycles.
    """
    best = None  # (weight, tuple of edge ids)
    adj = [[] for _ in range(n)]
    for e, (u, v, w) in enumerate(edges):
        if u == v:
            if best is None or w < best[0]:
                best = (w, (e,))
        else:
            adj[u].append((v, w, e))
            adj[v].append((u, w, e))

    for src in range(n):
        if not adj[src]:
            continue
        bound = best[0] if best is not None else None
        dist = {src: 0}
        parent_edge = {src: -1}
        parent_vertex = {src: -1}
        settled = set()
        heap = [(0, src)]
        while heap:
            d, u = heapq.heappop(heap)
            if u in settled or d > dist[u]:
                continue
            if bound is not None and d > bound:
                break
            settled.add(u)
            for v, w, e in adj[u]:
                if e == parent_edge[u]:
                    continue
                if v in settled:
                    cand = d + w + dist[v]
                    if best is None or cand < best[0]:
                        best = (cand, _extract_cycle(parent_edge, parent_vertex, u, v, e))
                        bound = cand
                    continue
                nd = d + w
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    parent_edge[v] = e
                    parent_vertex[v] = u
                    heapq.heappush(heap, (nd, v))
    return best


def _extract_cycle(parent_edge, parent_vertex, x, y, e):
    """Simple cycle from two tree paths plus the closing edge."""
    px = _root_path(parent_edge, parent_vertex, x)
    py = _root_path(parent_edge, parent_vertex, y)
    # strip the shared prefix (paths listed root-first)
    i = 0
    while i < len(px) and i < len(py) and px[i] == py[i]:
        i += 1
    cycle = [eid for eid, _v in px[i:]]
    cycle.append(e)
    cycle.extend(eid for eid, _v in reversed(py[i:]))
    return tuple(cycle)


def _root_path(parent_edge, parent_vertex, v):
    out = []
    while parent_edge[v] != -1:
        out.append((parent_edge[v], v))
        v = parent_vertex[v]
    out.reverse()
    return out
