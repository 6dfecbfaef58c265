"""Minimum (s,t)-cuts and global minimum cuts via dual homology.

An (s,t)-cut is dual to a minimum-weight even subgraph homologous with the
boundary of the dual face s* once the faces s* and t* are removed; the
global cut is the lighter of a contractible candidate (a shortest cycle in
the arc-sliced planar dual) and per-class non-contractible candidates.

The global solver first massages the embedding so the dual machinery's
preconditions hold, using only cut-preserving edits:

* primal loops are removed by splitting their vertex and reconnecting the
  halves with a sentinel edge heavier than every possible cut;
* an edge with the same face on both sides gains a zero-weight parallel
  edge (splitting the face with a bigon);
* a face visiting a vertex twice is split by a zero-weight chord;
* before slicing a two-hole dual instance, faces touching both removed
  vertices are subdivided apart so the boundary circles are disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cover import all_classes, build_cover, min_even_in_class
from .homology import forest_cotree_greedy, signature_of
from .shortpath import girth
from .slicing import slice_system
from .surface import (
    EvenSubgraph,
    Surface,
    SurfaceError,
    build_dual,
    fill_boundaries,
    remove_faces,
)


@dataclass(frozen=True)
class CutResult:
    edges: frozenset[int]
    weight: int
    side_s: tuple[int, ...]
    side_t: tuple[int, ...]
    provenance: str


def shortest_weighted_cycle(n, edges):
    """Minimum-weight simple cycle: ``(weight, edge ids)`` or None on forests.

    The value equals the per-edge formula min over e of
    dist without e (u,v) + w(e); computed by pruned searches.
    """
    return girth(n, edges)


# -- embedding surgery ------------------------------------------------------------


class _MapBuilder:
    """Mutable rotation-system editor tracking edge/vertex origins."""

    def __init__(self, s: Surface):
        self.edges = [list(t) for t in zip(s.edge_u, s.edge_v, s.weight)]
        self.rot = [list(r) for r in s.rot]
        self.edge_origin = list(range(s.m))
        self.vertex_origin = list(range(s.n))
        self.weight_scale = s.weight_scale
        self.sentinel = 1 + s.total_weight()

    def rebuild(self) -> Surface:
        return Surface(len(self.rot), [tuple(e) for e in self.edges], self.rot,
                       weight_scale=self.weight_scale)

    def add_edge(self, u, v, w, origin=None) -> int:
        e = len(self.edges)
        self.edges.append([u, v, w])
        self.edge_origin.append(origin)
        return e

    def tail(self, d):
        e = self.edges[d >> 1]
        return e[0] if d & 1 == 0 else e[1]


def _fix_loops(b: _MapBuilder) -> bool:
    """Split a vertex carrying a loop; join the halves with a sentinel edge."""
    changed = False
    again = True
    while again:
        again = False
        for e, (u, v, _w) in enumerate(b.edges):
            if u != v:
                continue
            r = b.rot[u]
            i0, i1 = r.index(2 * e), r.index(2 * e + 1)
            if i0 > i1:
                i0, i1 = i1, i0
            arc_a = r[i0:i1]
            arc_b = r[i1:] + r[:i0]
            u2 = len(b.rot)
            b.vertex_origin.append(b.vertex_origin[u])
            c = b.add_edge(u, u2, b.sentinel)
            b.rot[u] = arc_a + [2 * c]
            b.rot.append(arc_b + [2 * c + 1])
            for d in arc_b:
                ee = d >> 1
                if d & 1 == 0:
                    b.edges[ee][0] = u2
                else:
                    b.edges[ee][1] = u2
            again = True
            changed = True
            break
    return changed


def _fix_same_face(b: _MapBuilder) -> bool:
    """Add zero-weight parallels until no edge has the same face on both sides."""
    changed = False
    while True:
        s = b.rebuild()
        bad = None
        for e in range(s.m):
            if s.face_of[2 * e] == s.face_of[2 * e + 1]:
                bad = e
                break
        if bad is None:
            return changed
        e = bad
        u, v, _w = b.edges[e]
        c = b.add_edge(u, v, 0)
        ru, rv = b.rot[u], b.rot[v]
        ru.insert(ru.index(2 * e) + 1, 2 * c)
        rv.insert(rv.index(2 * e + 1), 2 * c + 1)
        changed = True


def _subdivide(b: _MapBuilder, e: int) -> int:
    """Split edge e at a fresh midpoint; returns the midpoint vertex id.

    The first half keeps the weight, the second gets the sentinel: crossing
    the chain still costs w, and no cut can afford to strand the midpoint
    (with equal halves, isolating a cheap edge's midpoint could undercut a
    real global minimum cut).
    """
    u, v, _w = b.edges[e]
    z = len(b.rot)
    b.vertex_origin.append(None)
    b.edges[e][1] = z
    e2 = b.add_edge(z, v, b.sentinel, origin=b.edge_origin[e])
    b.rot.append([2 * e + 1, 2 * e2])
    rv = b.rot[v]
    rv[rv.index(2 * e + 1)] = 2 * e2 + 1
    return z


def _split_face_between(b: _MapBuilder, p: int, q: int):
    """Zero-weight chord separating the visits after darts p and q of one face.

    Both neighbour edges are subdivided first so the chord ends at fresh
    degree-2 vertices; the face then splits into a piece containing p's
    visit and a piece containing q's visit, and no vertex gains a visit.
    """
    halves = []
    for d in (p, q):
        s = b.rebuild()
        nxt = s.face_next(d)
        e = nxt >> 1
        z = _subdivide(b, e)
        # dart leaving the midpoint along the old orbit direction
        half = 2 * (len(b.edges) - 1) if nxt & 1 == 0 else nxt
        halves.append((z, half))
    (z1, r1b), (z2, r2b) = halves
    c = b.add_edge(z1, z2, 0)
    b.rot[z1].insert(b.rot[z1].index(r1b), 2 * c)
    b.rot[z2].insert(b.rot[z2].index(r2b), 2 * c + 1)


def _fix_repeated_corners(b: _MapBuilder) -> bool:
    """Split faces visiting a vertex twice with zero-weight chords."""
    changed = False
    while True:
        s = b.rebuild()
        hit = None
        for f in range(s.f):
            seen = {}
            for d in s.faces[f]:
                t = s.tail(d)
                if t in seen:
                    hit = (seen[t], d)
                    break
                seen[t] = d
            if hit:
                break
        if hit is None:
            return changed
        _split_face_between(b, hit[0], hit[1])
        changed = True


def _separate_closures(b: _MapBuilder, va: int, vb: int):
    """Make the closures of the dual faces va*, vb* disjoint.

    Subdivides every va-vb edge, then splits every face seen by both
    vertices with a zero-weight chord between two other corners, so the
    two boundary circles of the dual instance share nothing.
    """
    # subdivide direct edges (each half keeps the full weight: cut-exact)
    for e in range(len(b.edges)):
        u, v, _w = b.edges[e]
        if {u, v} == {va, vb}:
            _subdivide(b, e)

    while True:
        s = b.rebuild()
        hit = None
        for f in range(s.f):
            pa = pb = None
            for d in s.faces[f]:
                if s.tail(d) == va:
                    pa = d
                elif s.tail(d) == vb:
                    pb = d
            if pa is not None and pb is not None:
                hit = (pa, pb)
                break
        if hit is None:
            return
        _split_face_between(b, hit[0], hit[1])


@dataclass(frozen=True)
class PreparedMap:
    surface: Surface
    edge_origin: tuple
    vertex_origin: tuple
    sentinel: int

    def vertex_image(self, v: int) -> int:
        return self.vertex_origin.index(v)


def prepare_global(surface: Surface, terminals=()) -> PreparedMap:
    """Cut-preserving embedding cleanup for the dual-homology machinery."""
    b = _MapBuilder(surface)
    _fix_loops(b)
    _fix_same_face(b)
    _fix_repeated_corners(b)
    for va, vb in terminals:
        ia = b.vertex_origin.index(va)
        ib = b.vertex_origin.index(vb)
        _separate_closures(b, ia, ib)
    return PreparedMap(b.rebuild(), tuple(b.edge_origin),
                       tuple(b.vertex_origin), b.sentinel)


# -- (s,t) cuts -------------------------------------------------------------------


def _separator(s2: Surface, fa: int, mode: str, weight_cap=None):
    """Min-weight even subgraph homologous with the boundary of face fa.

    ``s2`` already has fa (and the other terminal face) marked.  A capped
    call may come back as ``(value above cap, None)``.
    """
    h = signature_of(s2, s2.face_boundary_edges(fa))
    cov = build_cover(s2)
    w, sub = min_even_in_class(cov, h, mode, weight_cap)
    return w, (None if sub is None else sub.edges)


def _face_components(s: Surface, blocked: frozenset[int]):
    comp = [-1] * s.f
    c = 0
    for f0 in range(s.f):
        if comp[f0] != -1:
            continue
        comp[f0] = c
        stack = [f0]
        while stack:
            f = stack.pop()
            for d in s.faces[f]:
                if (d >> 1) in blocked:
                    continue
                g = s.face_of[d ^ 1]
                if comp[g] == -1:
                    comp[g] = c
                    stack.append(g)
        c += 1
    return comp


def min_face_separator(surface: Surface, fa: int, fb: int, mode: str = "naive",
                       weight_cap=None):
    """Minimum-weight even subgraph separating faces fa and fb.

    Removes both faces and solves for the class of fa's boundary; the
    result is verified to put fa and fb in different face components.
    A capped call may return ``(value above cap, None)``.
    """
    if fa == fb:
        raise SurfaceError("need two distinct faces")
    if fa in surface.boundary or fb in surface.boundary:
        raise SurfaceError("faces must not already be boundary")
    s2 = remove_faces(surface, [fa, fb])
    w, edges = _separator(s2, fa, mode, weight_cap)
    if edges is None:
        return w, None
    comp = _face_components(s2, edges)
    if comp[fa] == comp[fb]:
        raise SurfaceError("separator failed to separate its faces")
    return w, EvenSubgraph(s2, edges)


def _vertex_side(surface: Surface, blocked: frozenset[int], start: int):
    side = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for d in surface.rot[u]:
            if (d >> 1) in blocked:
                continue
            v = surface.head(d)
            if v not in side:
                side.add(v)
                stack.append(v)
    return side


def _crossing_edges(surface: Surface, side) -> frozenset[int]:
    return frozenset(e for e in range(surface.m)
                     if (surface.edge_u[e] in side) != (surface.edge_v[e] in side))


def min_st_cut(surface: Surface, s: int, t: int, mode: str = "naive") -> CutResult:
    """Minimum-weight (s,t)-cut via the dual homology class of s*."""
    if s == t:
        raise SurfaceError("source equals target")
    if not (0 <= s < surface.n and 0 <= t < surface.n):
        raise SurfaceError("terminal out of range")
    if not surface.is_connected:
        raise SurfaceError("surface graph must be connected")
    s0 = fill_boundaries(surface)

    if mode == "sliced":
        prep = prepare_global(s0, terminals=[(s, t)])
        p = prep.surface
        si, ti = prep.vertex_image(s), prep.vertex_image(t)
    else:
        prep = None
        p = s0
        si, ti = s, t

    dm = build_dual(p)
    fa = dm.vertex_to_dual_face[si]
    fb = dm.vertex_to_dual_face[ti]
    _w, sub = min_face_separator(dm.dual, fa, fb, mode)

    if prep is not None:
        blocked = sub.edges
        side_p = _vertex_side(p, blocked, si)
        assert ti not in side_p
        side = {prep.vertex_origin[v] for v in side_p
                if prep.vertex_origin[v] is not None}
    else:
        side = _vertex_side(s0, sub.edges, s)
        assert t not in side

    cut = _crossing_edges(s0, side)
    weight = sum(s0.weight[e] for e in cut)
    side_t = tuple(sorted(set(range(s0.n)) - side))
    return CutResult(cut, weight, tuple(sorted(side)), side_t, "st-duality")


# -- global minimum cut -----------------------------------------------------------


def global_separating_contractible(s1: Surface):
    """Minimum separating subgraph of a one-hole surface if one is a
    simple contractible cycle; otherwise some separating subgraph or None.

    Slices along the greedy arc system (a planar disk results), removes one
    copy of an arc edge at a time, and takes the lighter shortest simple
    cycle; its odd projection is the candidate.
    """
    if s1.b != 1:
        raise SurfaceError("contractible subroutine expects exactly one hole")
    fc = forest_cotree_greedy(s1)
    if not fc.arcs:
        res = girth(s1.n, list(zip(s1.edge_u, s1.edge_v, s1.weight)))
        if res is None:
            return None
        _w, cyc = res
        return frozenset(cyc)

    sliced = slice_system(s1, list(fc.arcs), ["arc"] * len(fc.arcs))
    t = sliced.surface
    if t.stats() != (1, 0, 1, 0) or not t.is_connected:
        raise SurfaceError("greedy arc system did not slice to a disk")

    arc_edges = sorted({d >> 1 for a in fc.arcs for d in a})
    e = arc_edges[0]
    copies = sliced.edge_copies(e)
    graph_edges = list(zip(t.edge_u, t.edge_v, t.weight))
    best = None
    for drop in copies[:2]:
        sub_edges = [graph_edges[E] for E in range(t.m) if E != drop]
        idmap = [E for E in range(t.m) if E != drop]
        res = girth(t.n, sub_edges)
        if res is None:
            continue
        w, cyc = res
        if best is None or w < best[0]:
            best = (w, [idmap[E] for E in cyc])
    if best is None:
        return None
    mult: dict[int, int] = {}
    for E in best[1]:
        o = sliced.edge_origin[E]
        mult[o] = mult.get(o, 0) + 1
    odd = frozenset(e for e, k in mult.items() if k % 2)
    if not odd:
        raise SurfaceError("contractible candidate projected to nothing")
    return odd


def global_separating_noncontractible(s1: Surface, mode: str = "sliced",
                                      weight_cap=None):
    """Best per-class candidate: for each nontrivial class, take a minimal
    even subgraph, pick an edge, and separate the hole from each flanking
    face.  Returns ``(weight, edges, class)`` or None when the genus is 0
    or nothing beats the cap.

    ``weight_cap`` (typically the contractible candidate's weight) lets the
    per-face separators stop early: a separator that cannot beat the cap is
    reported as over-cap and skipped, which is sound because any even
    subgraph at most the cap decomposes into cycles at most the cap.
    """
    if s1.b != 1:
        raise SurfaceError("non-contractible subroutine expects exactly one hole")
    g = s1.genus
    if g == 0:
        return None
    sface = next(iter(s1.boundary))
    cov = build_cover(s1)
    table = all_classes(cov, mode)

    primal = build_dual(fill_boundaries(s1)).dual  # vertex ids = face ids of s1

    best = None
    memo: dict[int, tuple] = {}
    for h in range(1, 1 << (2 * g)):
        _w, sub, _c = table.subgraphs[h]
        e = min(sub.edges)
        for f in (s1.face_of[2 * e], s1.face_of[2 * e + 1]):
            if f == sface:
                continue
            if f not in memo:
                cap = weight_cap
                if best is not None and (cap is None or best[0] < cap):
                    cap = best[0]
                memo[f] = _hole_to_face_separator(primal, sface, f, mode, cap)
            cand = memo[f]
            if cand is None:
                continue
            if best is None or cand[0] < best[0]:
                best = (cand[0], cand[1], h)
    return best


def _hole_to_face_separator(primal: Surface, va: int, vb: int, mode: str,
                            weight_cap=None):
    """Min separator between dual faces va*, vb* with sliced-safe prep.

    ``primal`` has vertex ids equal to the dual instance's face ids; edits
    preserve cuts and edge origins point back into the dual instance.
    Returns None when the separator cannot beat ``weight_cap``.
    """
    b = _MapBuilder(primal)
    if mode == "sliced":
        _separate_closures(b, va, vb)
    p = b.rebuild()
    dm = build_dual(p)
    fa = dm.vertex_to_dual_face[va]
    fb = dm.vertex_to_dual_face[vb]
    _w, sub = min_face_separator(dm.dual, fa, fb, mode, weight_cap)
    if sub is None:
        return None
    side = _vertex_side(p, sub.edges, va)
    assert vb not in side
    orig_side = {b.vertex_origin[v] for v in side if b.vertex_origin[v] is not None}
    cut = frozenset(e for e in range(primal.m)
                    if (primal.edge_u[e] in orig_side) != (primal.edge_v[e] in orig_side))
    weight = sum(primal.weight[e] for e in cut)
    return weight, cut


def global_min_cut(surface: Surface, s: int = 0, mode: str = "sliced") -> CutResult:
    """Global minimum cut: best of the contractible and per-class candidates."""
    if surface.n < 2:
        raise SurfaceError("global cut needs at least two vertices")
    if not surface.is_connected:
        raise SurfaceError("surface graph must be connected")
    s0 = fill_boundaries(surface)
    prep = prepare_global(s0)
    p = prep.surface
    si = prep.vertex_image(s)

    dm = build_dual(p)
    s1 = remove_faces(dm.dual, [dm.vertex_to_dual_face[si]])

    cand_c = global_separating_contractible(s1)
    cap = sum(p.weight[e] for e in cand_c) if cand_c is not None else None
    cand_n = global_separating_noncontractible(s1, mode, weight_cap=cap)

    options = []
    if cand_c is not None:
        wc = sum(p.weight[e] for e in cand_c)
        options.append((wc, 0, cand_c, "global-contractible"))
    if cand_n is not None:
        wn, en, h = cand_n
        options.append((wn, 1, en, f"global-class {h:#x}"))
    if not options:
        raise SurfaceError("no separating subgraph candidate found")
    options.sort(key=lambda t: (t[0], t[1]))
    _w, _pri, edges_p, provenance = options[0]

    side_p = _vertex_side(p, frozenset(edges_p), si)
    assert len(side_p) < p.n
    side = {prep.vertex_origin[v] for v in side_p
            if prep.vertex_origin[v] is not None}
    if s not in side:
        side = set(range(s0.n)) - side
    cut = _crossing_edges(s0, side)
    weight = sum(s0.weight[e] for e in cut)
    side_t = tuple(sorted(set(range(s0.n)) - side))
    return CutResult(cut, weight, tuple(sorted(side)), side_t, provenance)
