"""The Z2-homology cover and per-class minimum cycles / even subgraphs.

The cover has one sheet per homology class; a walk lifts to a path whose
endpoint sheet differs from its start by the walk's class.  The shortest
cycle in class ``h`` is found either by searching the cover from every
vertex of sheet 0 (``naive`` mode) or by slicing the cover along lifted
shortest paths and searching from the cut copies (``sliced`` mode, the
structure the near-linear algorithm uses).  Minimum-weight even subgraphs
per class are assembled from the per-class minimum cycles by a dynamic
program over the number of components.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .homology import edge_signatures, forest_cotree_greedy, homology_surface
from .shortpath import WeightedGraph, surface_graph
from .surface import ClosedWalk, EvenSubgraph, Surface, SurfaceError, cycle_decomposition

DEFAULT_BETA_CAP = 20
MODES = ("naive", "sliced")


class BetaCapError(SurfaceError):
    """Cover would exceed the configured sheet budget (HOMOCUT_BETA_CAP)."""


def _beta_cap() -> int:
    raw = os.environ.get("HOMOCUT_BETA_CAP")
    if raw is None:
        return DEFAULT_BETA_CAP
    return int(raw)


@dataclass
class CoverGraph:
    base: Surface
    hs: Surface  # homology surface (boundary guaranteed)
    beta: int
    sigs: tuple[int, ...]
    surface: Surface  # the cover as a full combinatorial surface
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def sheets(self) -> int:
        return 1 << self.beta

    def vid(self, v: int, h: int) -> int:
        return h * self.hs.n + v

    def eid(self, e: int, h: int) -> int:
        return h * self.hs.m + e

    def project_vertex(self, cv: int) -> int:
        return cv % self.hs.n

    def sheet_of(self, cv: int) -> int:
        return cv // self.hs.n

    def project_dart(self, cd: int) -> int:
        return 2 * ((cd >> 1) % self.hs.m) + (cd & 1)

    def stats(self):
        """(n, chi, b, g) of the cover, chi with boundary."""
        c = self.surface
        chi = c.euler_closed - c.b
        return (c.n, chi, c.b, c.genus)


def build_cover(surface: Surface) -> CoverGraph:
    """Construct the Z2-homology cover of (the homology surface of) ``surface``."""
    key = "cover"
    if key in surface._cache:
        return surface._cache[key]
    hs = homology_surface(surface)
    sigs = edge_signatures(surface)
    beta = hs.betti
    cap = _beta_cap()
    if beta > cap:
        raise BetaCapError(
            f"first Betti number {beta} exceeds the cover cap {cap}; "
            "raise HOMOCUT_BETA_CAP to override")
    n0, m0 = hs.n, hs.m
    sheets = 1 << beta

    edges = []
    for h in range(sheets):
        base_v = h * n0
        for e in range(m0):
            edges.append((base_v + hs.edge_u[e],
                          (h ^ sigs[e]) * n0 + hs.edge_v[e],
                          hs.weight[e]))
    rot = []
    for h in range(sheets):
        for v in range(n0):
            row = []
            for d in hs.rot[v]:
                e = d >> 1
                if d & 1 == 0:
                    row.append(2 * (h * m0 + e))
                else:
                    row.append(2 * ((h ^ sigs[e]) * m0 + e) + 1)
            rot.append(row)
    cov = Surface(sheets * n0, edges, rot, weight_scale=hs.weight_scale)

    marked = set()
    for fid, orbit in enumerate(cov.faces):
        d = orbit[0]
        old = 2 * ((d >> 1) % m0) + (d & 1)
        if hs.face_of[old] in hs.boundary:
            marked.add(fid)
    if marked:
        cov = cov.with_boundary(marked)

    out = CoverGraph(surface, hs, beta, sigs, cov)
    surface._cache[key] = out
    if hs is not surface:
        hs._cache[key] = out
    return out


def lift_walk(cover: CoverGraph, darts, start_class: int = 0):
    """Lift of a walk in the base surface, starting on sheet ``start_class``."""
    h = start_class
    out = []
    m0 = cover.hs.m
    for d in darts:
        e = d >> 1
        if d & 1 == 0:
            out.append(2 * (h * m0 + e))
        else:
            out.append(2 * ((h ^ cover.sigs[e]) * m0 + e) + 1)
        h ^= cover.sigs[e]
    return tuple(out), h


# -- per-class minimum cycles ---------------------------------------------------


def min_cycles_all(cover: CoverGraph, mode: str = "naive", weight_cap=None):
    """dict class -> (weight, ClosedWalk in the base surface).

    Class 0 maps to the empty walk.  Both modes return the same weights;
    ``naive`` searches the cover from every sheet-0 vertex, ``sliced``
    slices the cover along each lifted forest path and searches from the
    cut copies only.

    With ``weight_cap``, classes whose minimum exceeds the cap come back as
    ``(cap + 1, None)``: exact below the cap, merely "worse" above it.
    """
    if mode not in MODES:
        raise SurfaceError(f"unknown mode {mode!r}")
    key = ("min_cycles", mode, weight_cap)
    if key in cover._cache:
        return cover._cache[key]
    if mode == "naive":
        out = _min_cycles_naive(cover, weight_cap)
    else:
        out = _min_cycles_sliced(cover, weight_cap)
    cover._cache[key] = out
    return out


def min_cycle_in_class(cover: CoverGraph, h: int, mode: str = "naive"):
    """(weight, ClosedWalk) of a minimum-weight closed walk with class ``h``."""
    if not (0 <= h < cover.sheets):
        raise SurfaceError(f"class {h:#x} out of range")
    return min_cycles_all(cover, mode)[h]


def _as_int(x) -> int:
    if isinstance(x, float):
        if x != int(x):
            raise SurfaceError("non-integer distance from the float backend")
        return int(x)
    return int(x)


def _min_cycles_naive(cover: CoverGraph, weight_cap=None):
    hs = cover.hs
    n0 = hs.n
    g = surface_graph(cover.surface)
    sheets = cover.sheets
    best: dict[int, tuple] = {}

    chunk = max(1, int(8e6) // max(cover.surface.n, 1))
    for lo in range(0, n0, chunk):
        vs = list(range(lo, min(lo + chunk, n0)))
        dist = g.distances([cover.vid(v, 0) for v in vs], limit=weight_cap)
        for h in range(1, sheets):
            cols = np.array([cover.vid(v, h) for v in vs])
            vals = dist[np.arange(len(vs)), cols]
            i = int(np.argmin(vals))
            if np.isinf(vals[i]):
                continue
            cand = (_as_int(vals[i]), vs[i])
            if h not in best or cand < best[h]:
                best[h] = cand

    out = {0: (0, ClosedWalk(hs, ()))}
    for h in range(1, sheets):
        if h not in best:
            if weight_cap is not None:
                out[h] = (weight_cap + 1, None)
                continue
            raise SurfaceError(f"class {h:#x} has no closed walk (disconnected?)")
        w, v = best[h]
        dist, pred = g.shortest_path_tree(cover.vid(v, 0))
        eids, _root = g.path_edges(dist, pred, cover.vid(v, h))
        walk = _cover_edges_to_base_walk(cover, cover.vid(v, 0), eids)
        assert walk.weight == w
        out[h] = (w, walk)
    return out


def _cover_edges_to_base_walk(cover: CoverGraph, start: int, cover_edge_ids):
    """Orient a cover edge path starting at ``start``; project to base darts."""
    cov = cover.surface
    cur = start
    darts = []
    for E in cover_edge_ids:
        if cov.edge_u[E] == cur:
            d = 2 * E
        elif cov.edge_v[E] == cur:
            d = 2 * E + 1
        else:
            raise SurfaceError("path edges do not chain")
        darts.append(cover.project_dart(d))
        cur = cov.head(d)
    return ClosedWalk(cover.hs, tuple(darts))


def _slit_path(cov: Surface, darts):
    """Graph of the cover cut along a vertex-simple path, topology skipped.

    Interior path vertices split in two; the side holding the rotation arc
    from the incoming dart's reversal to the outgoing dart keeps the
    original vertex id and the original path edges, so the duplicate path
    edges chain consistently along the new side.

    Returns ``(vertex count, edges, edge origin, copies)`` where ``copies``
    maps every path vertex to its one or two ids.
    """
    from .surface import rev

    verts = [cov.tail(darts[0])] + [cov.head(d) for d in darts]
    edges = [list(x) for x in zip(cov.edge_u, cov.edge_v, cov.weight)]
    edge_origin = list(range(cov.m))
    n_new = cov.n
    copies = {verts[0]: [verts[0]], verts[-1]: [verts[-1]]}
    side_p = {}
    for i in range(1, len(darts)):
        v = verts[i]
        a, b = darts[i - 1], darts[i]
        r = cov.rot[v]
        pos = {d: j for j, d in enumerate(r)}
        ia, ib = pos[rev(a)], pos[b]
        new_id = n_new
        n_new += 1
        side_p[v] = new_id
        copies[v] = [v, new_id]
        j = (ib + 1) % len(r)
        while j != ia:
            d = r[j]
            e = d >> 1
            if d & 1 == 0:
                edges[e][0] = new_id
            else:
                edges[e][1] = new_id
            j = (j + 1) % len(r)
    for i, d in enumerate(darts):
        e = d >> 1
        u = side_p.get(verts[i], verts[i])
        w2 = side_p.get(verts[i + 1], verts[i + 1])
        edges.append([u, w2, cov.weight[e]] if d & 1 == 0 else [w2, u, cov.weight[e]])
        edge_origin.append(e)
    return n_new, [tuple(e) for e in edges], edge_origin, copies


def _min_cycles_sliced(cover: CoverGraph, weight_cap=None):
    hs = cover.hs
    fc = forest_cotree_greedy(hs)
    sheets = cover.sheets
    out = {0: (0, ClosedWalk(hs, ()))}
    if sheets == 1:
        return out

    paths = []
    seen = set()
    endpoints = [hs.edge_u[e] for e in fc.leftover] + [hs.edge_v[e] for e in fc.leftover]
    for p, endv in zip(fc.sigma_paths + fc.tau_paths, endpoints):
        key = (p, endv)
        if key not in seen:
            seen.add(key)
            paths.append((p, endv))

    best: dict[int, tuple] = {}  # h -> (weight, path idx, plan)
    plans = []
    for pi, (p, endv) in enumerate(paths):
        if len(p) == 0:
            v = endv
            g = surface_graph(cover.surface)
            src = cover.vid(v, 0)
            dist = g.distances([src], limit=weight_cap)[0]
            plans.append(("whole", g, src, (v,), (0,)))
            for h in range(1, sheets):
                val = dist[cover.vid(v, h)]
                if np.isinf(val):
                    continue
                cand = (_as_int(val), pi, 0, 0)
                if h not in best or cand < best[h]:
                    best[h] = cand
            continue

        lifted, _endh = lift_walk(cover, p, 0)
        n_sl, sl_edges, sl_origin, vcopies = _slit_path(cover.surface, lifted)
        sliced_g = WeightedGraph(n_sl, sl_edges)

        pverts = [cover.surface.tail(lifted[0])]
        for d in lifted:
            pverts.append(cover.surface.head(d))
        hseq = [cover.sheet_of(cv) for cv in pverts]
        bverts = [cover.project_vertex(cv) for cv in pverts]

        plans.append(("sliced", sliced_g, sl_origin, vcopies, pverts, bverts, hseq))
        pvset = set(pverts)
        targets = []
        for i in range(len(pverts)):
            row = []
            for h in range(1, sheets):
                tgt = cover.vid(bverts[i], hseq[i] ^ h)
                if tgt in pvset:
                    raise SurfaceError("target vertex unexpectedly on the cut path")
                row.append(tgt)
            targets.append(np.array(row))
        sources = [(i, ci, copy)
                   for i, cv in enumerate(pverts)
                   for ci, copy in enumerate(vcopies[cv])]
        big = max(1, int(8e6) // max(n_sl, 1))
        lo = 0
        while lo < len(sources):
            # tiny seed chunks establish per-class bounds, then batch freely
            size = 1 if lo == 0 else (8 if lo == 1 else big)
            batch = sources[lo:lo + size]
            lo += size
            # once every class has a bound, searches can stop at the worst one
            limit = weight_cap
            if len(best) == sheets - 1:
                limit = max(w for (w, _pi, _i, _ci) in best.values())
                if weight_cap is not None:
                    limit = min(limit, weight_cap)
            dist = sliced_g.distances([c for (_i, _ci, c) in batch], limit=limit)
            for row, (i, ci, _copy) in enumerate(batch):
                vals = dist[row, targets[i]]
                for hi in range(sheets - 1):
                    if np.isinf(vals[hi]):
                        continue
                    cand = (_as_int(vals[hi]), pi, i, ci)
                    h = hi + 1
                    if h not in best or cand < best[h]:
                        best[h] = cand

    for h in range(1, sheets):
        if h not in best:
            if weight_cap is not None:
                out[h] = (weight_cap + 1, None)
                continue
            raise SurfaceError(f"class {h:#x} not reachable from any cut path")
        w, pi, i, ci = best[h]
        plan = plans[pi]
        if plan[0] == "whole":
            _kind, g, src, bverts, hseq = plan
            dist, pred = g.shortest_path_tree(src)
            eids, _ = g.path_edges(dist, pred, cover.vid(bverts[0], hseq[0] ^ h))
            walk = _cover_edges_to_base_walk(cover, src, eids)
        else:
            _kind, sliced_g, sl_origin, vcopies, pverts, bverts, hseq = plan
            src = vcopies[pverts[i]][ci]
            dist, pred = sliced_g.shortest_path_tree(src)
            tgt = cover.vid(bverts[i], hseq[i] ^ h)
            eids, _ = sliced_g.path_edges(dist, pred, tgt)
            cov_eids = [sl_origin[E] for E in eids]
            walk = _cover_edges_to_base_walk(cover, pverts[i], cov_eids)
        assert walk.weight == w
        out[h] = (w, walk)
    return out


# -- minimum-weight even subgraphs per class -------------------------------------


@dataclass
class ClassTable:
    cover: CoverGraph
    mode: str
    kmax: int
    min_cycles: dict
    table: list  # table[k][h], k = 1..kmax
    subgraphs: dict  # h -> (weight, EvenSubgraph, components)

    def weight(self, h: int) -> int:
        return self.subgraphs[h][0]


def all_classes(cover: CoverGraph, mode: str = "naive", weight_cap=None) -> ClassTable:
    """Minimum-weight even subgraph in every class, via the component DP.

    Under a ``weight_cap`` the table is exact for classes whose optimum is
    at most the cap; heavier classes report a value above the cap with no
    subgraph.
    """
    key = ("all_classes", mode, weight_cap)
    if key in cover._cache:
        return cover._cache[key]
    hs = cover.hs
    kmax = max(hs.genus + hs.b - 1, 1)
    cycles = min_cycles_all(cover, mode, weight_cap)
    sheets = cover.sheets

    c1 = [cycles[h][0] for h in range(sheets)]
    table = [None, c1]
    for _k in range(2, kmax + 1):
        prev = table[-1]
        cur = []
        for h in range(sheets):
            bestv = prev[h]
            for h2 in range(1, sheets):
                v = prev[h ^ h2] + c1[h2]
                if v < bestv:
                    bestv = v
            cur.append(bestv)
        table.append(cur)

    subgraphs = {}
    for h in range(sheets):
        target = table[kmax][h]
        if weight_cap is not None and target > weight_cap:
            subgraphs[h] = (target, None, None)
            continue
        kstar = 1
        while table[kstar][h] != target:
            kstar += 1
        classes = []
        cur = h
        for j in range(kstar, 1, -1):
            for h2 in range(sheets):
                if table[j - 1][cur ^ h2] + c1[h2] == table[j][cur]:
                    classes.append(h2)
                    cur ^= h2
                    break
        classes.append(cur)
        edges = frozenset()
        for h2 in classes:
            edges = edges ^ cycles[h2][1].odd_edges()
        edges = _normalize_even(hs, cover, edges, kmax)
        sub = EvenSubgraph(hs, edges)
        w = sub.weight
        if w > target:
            raise SurfaceError("assembled subgraph heavier than its DP value")
        subgraphs[h] = (w, sub, len(sub.components()))

    out = ClassTable(cover, mode, kmax, cycles, table, subgraphs)
    cover._cache[key] = out
    return out


def min_even_in_class(cover: CoverGraph, h: int, mode: str = "naive", weight_cap=None):
    """(weight, EvenSubgraph) minimal in class ``h``.

    A capped call may return ``(value above cap, None)``.
    """
    table = all_classes(cover, mode, weight_cap)
    w, sub, _c = table.subgraphs[h]
    return w, sub


def _normalize_even(hs, cover, edges, kmax):
    """Drop zero-weight null-homologous cycle packs until few components remain.

    A minimal even subgraph has at most genus+b-1 components; an assembled
    one can only exceed that via zero-weight null-homologous junk, which a
    GF(2) dependency among decomposition-cycle classes locates.
    """
    from .homology import signature_of

    while True:
        if not edges:
            return edges
        walks = cycle_decomposition(EvenSubgraph(hs, edges))
        if len(walks) <= kmax:
            return edges
        sigs = [signature_of(hs, w) for w in walks]
        combo = _dependent_subset(sigs)
        if combo is None:
            return edges  # classes independent: nothing removable
        removed = frozenset()
        for i in combo:
            removed = removed ^ walks[i].odd_edges()
        wsum = sum(hs.weight[e] for e in removed)
        if wsum != 0:
            raise SurfaceError("normalization would change the weight")
        edges = edges - removed


def _dependent_subset(sigs):
    """Indices of a non-empty subset xoring to zero, or None."""
    basis = {}  # pivot bit -> (sig, index set)
    for i, s in enumerate(sigs):
        acc = s
        combo = {i}
        while acc:
            p = acc.bit_length() - 1
            if p not in basis:
                basis[p] = (acc, combo)
                break
            bs, bc = basis[p]
            acc ^= bs
            combo = combo ^ bc
        else:
            return sorted(combo)
    return None
