"""Z2-homology bookkeeping for surfaces with boundary.

Two interchangeable characterizations of the homology class of an even
subgraph:

* per-edge *signatures* from a tree-coforest decomposition (dual arcs
  between dual boundary vertices; the class of a subgraph is the xor of its
  edge signatures), and
* *crossing parity vectors* against a greedy system of primal arcs built
  from a forest-cotree decomposition (shortest-path forest rooted on the
  boundary plus a maximum cotree under arc length).

Closed surfaces are handled by deleting face 0 first, which leaves the
homology group untouched.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

from .shortpath import boundary_shortest_forest, forest_path_darts
from .surface import (
    ClosedWalk,
    EvenSubgraph,
    Surface,
    SurfaceError,
    build_dual,
    cycle_decomposition,
    remove_faces,
    rev,
)


def homology_surface(surface: Surface) -> Surface:
    """The surface homology is measured on: itself, or minus face 0 if closed."""
    if surface.b >= 1:
        return surface
    key = "homology_surface"
    if key not in surface._cache:
        surface._cache[key] = remove_faces(surface, [0])
    return surface._cache[key]


# -- tree-coforest decompositions and signatures --------------------------------


@dataclass(frozen=True)
class TreeCoforest:
    surface: Surface
    tree_edges: frozenset[int]
    coforest_edges: frozenset[int]
    leftover: tuple[int, ...]
    dual_arcs: tuple[tuple[int, ...], ...]  # dual dart walks, one per leftover


def tree_coforest(surface: Surface) -> TreeCoforest:
    """Spanning tree + dual spanning coforest; the leftovers define dual arcs."""
    if surface.b < 1:
        raise SurfaceError("tree_coforest needs a surface with boundary")
    key = "tree_coforest"
    if key in surface._cache:
        return surface._cache[key]
    dm = build_dual(surface)
    dual = dm.dual

    roots = sorted(surface.boundary)
    parent = {f: -1 for f in roots}
    queue = deque(roots)
    rootset = set(roots)
    while queue:
        f = queue.popleft()
        for d in dual.rot[f]:
            g = dual.head(d)
            if g in parent or g in rootset:
                continue
            parent[g] = d
            queue.append(g)
    if len(parent) != dual.n:
        raise SurfaceError("dual graph disconnected from boundary")
    coforest = frozenset(parent[f] >> 1 for f in parent if parent[f] != -1)

    # primal spanning tree avoiding the coforest edges
    tparent = {0: -1}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for d in surface.rot[u]:
            if (d >> 1) in coforest:
                continue
            v = surface.head(d)
            if v in tparent:
                continue
            tparent[v] = d
            queue.append(v)
    if len(tparent) != surface.n:
        raise SurfaceError("complement of the dual coforest does not span")
    tree = frozenset(tparent[v] >> 1 for v in tparent if tparent[v] != -1)

    leftover = tuple(sorted(set(range(surface.m)) - coforest - tree))
    if len(leftover) != surface.betti:
        raise SurfaceError("leftover count does not match the Betti number")

    def root_path(f):
        out = []
        while parent[f] != -1:
            out.append(parent[f])
            f = dual.tail(parent[f])
        out.reverse()
        return out

    arcs = []
    for e in leftover:
        f1 = dual.edge_u[e]
        f2 = dual.edge_v[e]
        down = root_path(f1)
        up = [rev(d) for d in reversed(root_path(f2))]
        arcs.append(tuple(down + [2 * e] + up))
    tc = TreeCoforest(surface, tree, coforest, leftover, tuple(arcs))
    surface._cache[key] = tc
    return tc


def edge_signatures(surface: Surface) -> tuple[int, ...]:
    """Per-edge homology signatures as beta-bit masks (bit i = dual arc i)."""
    key = "edge_signatures"
    if key in surface._cache:
        return surface._cache[key]
    hs = homology_surface(surface)
    tc = tree_coforest(hs)
    sigs = [0] * surface.m
    for i, arc in enumerate(tc.dual_arcs):
        counts = Counter(d >> 1 for d in arc)
        for e, k in counts.items():
            if k % 2:
                sigs[e] ^= 1 << i
    out = tuple(sigs)
    surface._cache[key] = out
    if hs is not surface:
        hs._cache[key] = out
    return out


def signature_of(surface: Surface, obj) -> int:
    """Homology class of an even subgraph, closed walk, or edge iterable."""
    sigs = edge_signatures(surface)
    if isinstance(obj, EvenSubgraph):
        edges = obj.edges
    elif isinstance(obj, ClosedWalk):
        edges = obj.odd_edges()
    else:
        counts = Counter(int(e) for e in obj)
        edges = [e for e, k in counts.items() if k % 2]
    h = 0
    for e in edges:
        h ^= sigs[e]
    return h


# -- forest-cotree decompositions and greedy arcs --------------------------------


@dataclass(frozen=True)
class ForestCotree:
    surface: Surface
    boundary_vertices: frozenset[int]
    boundary_edges: frozenset[int]
    forest_edges: frozenset[int]
    cotree_edges: frozenset[int]
    leftover: tuple[int, ...]
    dist: dict
    parent: dict
    sigma_paths: tuple[tuple[int, ...], ...]  # boundary -> u_i forest paths
    tau_paths: tuple[tuple[int, ...], ...]
    arcs: tuple[tuple[int, ...], ...]  # sigma_i . e_i . rev(tau_i)


def _validate_simple_boundary(surface: Surface):
    seen: set[int] = set()
    for f in surface.boundary:
        orbit = surface.faces[f]
        verts = [surface.tail(d) for d in orbit]
        if len(set(verts)) != len(verts):
            raise SurfaceError(
                f"boundary face {f} is not a simple cycle; "
                "greedy arc systems need simple, disjoint boundary cycles")
        if seen & set(verts):
            raise SurfaceError("boundary faces share a vertex")
        seen.update(verts)


def forest_cotree_greedy(surface: Surface) -> ForestCotree:
    """Shortest-path forest from the boundary + max cotree; arcs from leftovers.

    Every arc is two shortest paths joined by one leftover edge.  Slicing
    along the arc system turns the surface into a disk.
    """
    if surface.b < 1:
        raise SurfaceError("forest_cotree_greedy needs a surface with boundary")
    key = "forest_cotree"
    if key in surface._cache:
        return surface._cache[key]
    _validate_simple_boundary(surface)

    bverts = set()
    bedges = set()
    for f in surface.boundary:
        for d in surface.faces[f]:
            bverts.add(surface.tail(d))
            bedges.add(d >> 1)

    dist, parent = boundary_shortest_forest(surface, bverts)
    if len(dist) != surface.n:
        raise SurfaceError("graph disconnected from the boundary")
    forest = frozenset(parent[v] >> 1 for v in parent if parent[v] != -1)

    # maximum spanning tree of the dual complement under arc length
    candidates = []
    for e in range(surface.m):
        if e in forest or e in bedges:
            continue
        ell = dist[surface.edge_u[e]] + surface.weight[e] + dist[surface.edge_v[e]]
        candidates.append((ell, e))
    candidates.sort(key=lambda t: (-t[0], t[1]))

    interior_faces = [f for f in range(surface.f) if f not in surface.boundary]
    comp = {f: f for f in interior_faces}

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    cotree = set()
    for _ell, e in candidates:
        fa = find(surface.face_of[2 * e])
        fb = find(surface.face_of[2 * e + 1])
        if fa != fb:
            comp[fa] = fb
            cotree.add(e)
    if len(cotree) != max(len(interior_faces) - 1, 0):
        raise SurfaceError("dual complement of the forest is not connected")

    leftover = tuple(sorted(set(range(surface.m)) - bedges - forest - cotree))
    if len(leftover) != surface.betti:
        raise SurfaceError("leftover count does not match the Betti number")

    sigmas, taus, arcs = [], [], []
    for e in leftover:
        sig = tuple(forest_path_darts(surface, parent, surface.edge_u[e]))
        tau = tuple(forest_path_darts(surface, parent, surface.edge_v[e]))
        sigmas.append(sig)
        taus.append(tau)
        arcs.append(sig + (2 * e,) + tuple(rev(d) for d in reversed(tau)))
    fc = ForestCotree(surface, frozenset(bverts), frozenset(bedges),
                      forest, frozenset(cotree), leftover, dist, parent,
                      tuple(sigmas), tuple(taus), tuple(arcs))
    surface._cache[key] = fc
    return fc


# -- crossing parity vectors -----------------------------------------------------

# Crossings are counted in a fixed combinatorial drawing: every traversal of
# an edge is a strand, strands are nested (the decomposition cycle sits on
# the left of its travel direction along shared runs, an arc's earlier
# traversal sits left of its own direction), arc ends dive into the first
# hole corner found scanning the rotation forward, and two visits cross
# exactly when their chords interleave around the vertex.  Any consistent
# drawing gives the same crossing parities.


def _anchor_corner(surface, vertex, emerge_dart):
    r = surface.rot[vertex]
    k = len(r)
    pos = {d: i for i, d in enumerate(r)}
    start = pos[emerge_dart]
    for off in range(k):
        x = r[(start + off) % k]
        if surface.face_of[rev(x)] in surface.boundary:
            return x
    raise SurfaceError(f"arc endpoint at vertex {vertex} is not on the boundary")


def count_crossings(surface: Surface, cycle_darts, arc_darts) -> int:
    """Crossings between a closed walk and a boundary-to-boundary arc walk.

    The closed walk must use each edge at most once (decomposition cycles
    do); the arc may traverse an edge twice.
    """
    cyc = tuple(cycle_darts)
    arc = tuple(arc_darts)
    if not cyc:
        return 0

    g_dart = {}
    for st, d in enumerate(cyc):
        if (d >> 1) in g_dart:
            raise SurfaceError("closed walk repeats an edge")
        g_dart[d >> 1] = (st, d)
    a_steps: dict[int, list[int]] = {}
    for st, d in enumerate(arc):
        a_steps.setdefault(d >> 1, []).append(st)

    def bundle(e):
        toks = []
        steps = a_steps.get(e, [])
        if len(steps) == 1:
            toks = [("a", steps[0])]
        elif len(steps) == 2:
            s1, s2 = steps
            if arc[s1] == 2 * e:
                toks = [("a", s1), ("a", s2)]
            else:
                toks = [("a", s2), ("a", s1)]
        elif len(steps) > 2:
            raise SurfaceError("arc traverses an edge more than twice")
        if e in g_dart:
            st, d = g_dart[e]
            if d == 2 * e:
                toks.insert(0, ("g", st))
            else:
                toks.append(("g", st))
        return toks

    def tok_dart(t):
        return cyc[t[1]] if t[0] == "g" else arc[t[1]]

    # anchors for the two arc ends
    v0, v1 = surface.tail(arc[0]), surface.head(arc[-1])
    anchors = {
        ("anchor", 0): (v0, _anchor_corner(surface, v0, arc[0])),
        ("anchor", 1): (v1, _anchor_corner(surface, v1, rev(arc[-1]))),
    }

    # expanded circles holding strand ends and anchor items
    touched = set()
    for d in list(cyc) + list(arc):
        touched.add(surface.tail(d))
        touched.add(surface.head(d))
    circles = {}
    for v in touched:
        items = []
        for d in surface.rot[v]:
            e = d >> 1
            toks = bundle(e)
            if d & 1:
                toks = list(reversed(toks))
            for t in toks:
                td = tok_dart(t)
                if td == d:
                    items.append((t, 0))
                elif rev(td) == d:
                    items.append((t, 1))
            for (akey, (av, ax)) in sorted(anchors.items(), key=lambda kv: kv[0][1]):
                if av == v and ax == d:
                    items.append((akey, -1))
        circles[v] = {it: i for i, it in enumerate(items)}
        circles[v]["len"] = len(items)

    def chord_list():
        chords = []
        k = len(cyc)
        for st in range(k):
            v = surface.tail(cyc[st])
            chords.append(("g", v,
                           ((("g", (st - 1) % k), 1), (("g", st), 0))))
        t = len(arc)
        for st in range(1, t):
            v = surface.tail(arc[st])
            chords.append(("a", v,
                           ((("a", st - 1), 1), (("a", st), 0))))
        chords.append(("a", v0, ((("anchor", 0), -1), (("a", 0), 0))))
        chords.append(("a", v1, ((("a", t - 1), 1), (("anchor", 1), -1))))
        return chords

    by_vertex: dict[int, dict[str, list]] = {}
    for who, v, (p, q) in chord_list():
        pos = circles[v]
        try:
            pp, qq = pos[p], pos[q]
        except KeyError:
            raise SurfaceError("walk visits a vertex its darts do not touch")
        by_vertex.setdefault(v, {"g": [], "a": []})[who].append((pp, qq))

    total = 0
    for v, d2 in by_vertex.items():
        L = circles[v]["len"]

        def inside(x, lo, hi):
            return x != lo and ((x - lo) % L) < ((hi - lo) % L)

        for (a1, b1) in d2["g"]:
            for (a2, b2) in d2["a"]:
                c = int(inside(a2, a1, b1)) + int(inside(b2, a1, b1))
                if c == 1:
                    total += 1
    return total


def crossing_parity_vector(surface: Surface, subgraph: EvenSubgraph,
                           fc: ForestCotree) -> int:
    """beta-bit vector: bit i = parity of crossings with greedy arc i."""
    walks = cycle_decomposition(subgraph)
    bits = 0
    for i, arc in enumerate(fc.arcs):
        c = 0
        for w in walks:
            c += count_crossings(surface, w.darts, arc)
        if c % 2:
            bits ^= 1 << i
    return bits


def crossing_counts(surface: Surface, subgraph: EvenSubgraph,
                    fc: ForestCotree) -> list[int]:
    """Total crossings of a fixed decomposition with each greedy arc."""
    walks = cycle_decomposition(subgraph)
    return [sum(count_crossings(surface, w.darts, arc) for w in walks)
            for arc in fc.arcs]
