"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s``.  Every expected value is
produced by an independent oracle (max-flow, Stoer-Wagner, exhaustive
enumeration) or is an exact structural identity; no tolerances anywhere
(all quantities are integers), except the wall-clock budgets of criterion 8.
"""

import itertools
import math
import random
import time

import pytest

from homocut.cover import all_classes, build_cover, min_cycles_all
from homocut.cuts import (
    global_min_cut,
    global_separating_contractible,
    min_st_cut,
    prepare_global,
)
from homocut.generate import GenSpec, gen, genus_schema, planar_grid, torus_grid
from homocut.homology import (
    crossing_parity_vector,
    edge_signatures,
    forest_cotree_greedy,
    homology_surface,
    signature_of,
)
from homocut.oracles import (
    oracle_global_min_cut,
    oracle_max_flow_min_cut,
    oracle_min_even_all,
)
from homocut.slicing import slice_system
from homocut.surface import EvenSubgraph, build_dual, remove_faces


def report(criterion, ok, detail):
    line = f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
    print("\n" + line)
    assert ok, line


def graph_of(s):
    return list(zip(s.edge_u, s.edge_v, s.weight))


# ---------------------------------------------------------------- corpus


_CORPUS = None


def corpus():
    """>= 500 seeded instances: grids up to 8x8 and schemas g <= 3."""
    global _CORPUS
    if _CORPUS is not None:
        return _CORPUS
    rng = random.Random(20260809)
    out = []

    def add(kind, **kw):
        seed = rng.randrange(10 ** 9)
        spec = GenSpec(kind, weights=("uniform", 1, 100), seed=seed, **kw)
        out.append((f"{kind}-{len(out)}", gen(spec)))

    for _ in range(200):
        add("planar-grid", rows=rng.randint(2, 8), cols=rng.randint(2, 8))
    for _ in range(200):
        add("torus-grid", rows=rng.randint(2, 8), cols=rng.randint(2, 8))
    for _ in range(60):
        add("genus-schema", genus=1, subdivisions=rng.randint(1, 3))
    for _ in range(30):
        add("genus-schema", genus=2, subdivisions=rng.randint(1, 2))
    for _ in range(10):
        add("genus-schema", genus=3, subdivisions=rng.randint(1, 2))
    _CORPUS = out
    return out


def disjoint_simple_faces(s, k, rng):
    ids = list(range(s.f))
    rng.shuffle(ids)
    chosen, used = [], set()
    for f in ids:
        verts = {s.tail(d) for d in s.faces[f]}
        if len(verts) != len(s.faces[f]) or used & verts:
            continue
        chosen.append(f)
        used |= verts
        if len(chosen) == k:
            return chosen
    return None


_SMALL_FIXTURES = None


def small_fixtures():
    """>= 50 fixtures with m <= 22 spanning g in {0,1,2}, b in {1,2,3}."""
    global _SMALL_FIXTURES
    if _SMALL_FIXTURES is not None:
        return _SMALL_FIXTURES

    def marked_squares(s, cells):
        faces = []
        for verts in cells:
            for f in range(s.f):
                if {s.tail(d) for d in s.faces[f]} == set(verts):
                    faces.append(f)
                    break
        assert len(faces) == len(cells)
        return remove_faces(s, faces)

    shapes = []
    g23 = planar_grid(2, 3)
    shapes.append(("g0b1", marked_squares(g23, [{0, 1, 3, 4}])))
    g24 = planar_grid(2, 4)
    shapes.append(("g0b2", marked_squares(g24, [{0, 1, 4, 5}, {2, 3, 6, 7}])))
    g26 = planar_grid(2, 6)
    shapes.append(("g0b3-pants", marked_squares(
        g26, [{0, 1, 6, 7}, {2, 3, 8, 9}, {4, 5, 10, 11}])))
    g33 = planar_grid(3, 3)
    shapes.append(("g0b1-grid3", remove_faces(
        g33, [max(range(g33.f), key=lambda f: len(g33.faces[f]))])))
    t23 = torus_grid(2, 3)
    shapes.append(("g1b1", remove_faces(t23, [0])))
    t33 = torus_grid(3, 3)
    shapes.append(("g1b1-3x3", remove_faces(t33, [0])))
    shapes.append(("g1b0-3x3", t33))
    rng = random.Random(7)
    t24 = torus_grid(2, 4)
    two = disjoint_simple_faces(t24, 2, rng)
    assert two is not None
    shapes.append(("g1b2", remove_faces(t24, two)))
    shapes.append(("g2b1-s0", genus_schema(2, 0)))
    shapes.append(("g2b1-s1", genus_schema(2, 1)))
    shapes.append(("g2b1-s2", genus_schema(2, 2)))

    out = []
    rng = random.Random(99)
    for name, s in shapes:
        assert s.m <= 22, (name, s.m)
        out.append((name, s))
        for k in range(4):
            seed = rng.randrange(10 ** 9)
            w = [rng.randint(1, 100) for _ in range(s.m)]
            ws = type(s)(s.n, [(s.edge_u[e], s.edge_v[e], w[e]) for e in range(s.m)],
                         s.rot, boundary=s.boundary)
            out.append((f"{name}-w{seed}", ws))
    _SMALL_FIXTURES = out
    return out


# ---------------------------------------------------------------- criteria


def test_acceptance_1_st_cut_correctness():
    rng = random.Random(1)
    t0 = time.perf_counter()
    count = 0
    for name, s in corpus():
        src = rng.randrange(s.n)
        dst = rng.randrange(s.n)
        if src == dst:
            dst = (dst + 1) % s.n
        res = min_st_cut(s, src, dst)
        val, _c, _side = oracle_max_flow_min_cut(s.n, graph_of(s), src, dst)
        assert res.weight == val, (name, src, dst, res.weight, val)
        # structural: removing the cut separates the terminals
        side = set(res.side_s)
        assert src in side and dst not in side
        assert not any((s.edge_u[e] in side) == (s.edge_v[e] in side)
                       for e in res.edges)
        count += 1
    wall = time.perf_counter() - t0
    report(1, count >= 500 and wall < 300,
           f"{count} instances, st-cut == max-flow oracle exactly, {wall:.1f}s")


def test_acceptance_2_global_cut_correctness():
    count = 0
    pair_checked = 0
    for name, s in corpus():
        res = global_min_cut(s)
        val, _ = oracle_global_min_cut(s.n, graph_of(s))
        assert res.weight == val, (name, res.weight, val)
        assert 0 < len(res.side_s) < s.n
        if s.n <= 8:
            best = min(min_st_cut(s, a, b).weight
                       for a, b in itertools.combinations(range(s.n), 2))
            assert best == res.weight, name
            pair_checked += 1
        count += 1
    report(2, count >= 500,
           f"{count} instances == Stoer-Wagner; {pair_checked} checked vs all-pairs st-cut")


def test_acceptance_3_homology_localization():
    fixtures = small_fixtures()
    genera = set()
    boundaries = set()
    classes_checked = 0
    for name, s in fixtures:
        cov = build_cover(s)
        hs = cov.hs
        genera.add(s.genus)
        boundaries.add(hs.b)
        table = all_classes(cov)
        oracle = oracle_min_even_all(
            hs.n, graph_of(hs), list(edge_signatures(s)))
        for h in range(cov.sheets):
            assert h in oracle, (name, h)
            assert table.weight(h) == oracle[h][0], (name, h)
            classes_checked += 1
    ok = (len(fixtures) >= 50 and {0, 1, 2} <= genera and {1, 2, 3} <= boundaries)
    report(3, ok,
           f"{len(fixtures)} fixtures (g spans {sorted(genera)}, b spans "
           f"{sorted(boundaries)}), {classes_checked} classes == enumeration oracle")


def test_acceptance_4_cover_closed_forms():
    checked = 0
    for name, s in small_fixtures():
        cov = build_cover(s)
        hs = cov.hs
        beta = hs.betti
        n_, chi_, b_, g_ = cov.stats()
        assert n_ == (1 << beta) * hs.n, name
        assert chi_ == (1 << beta) * (1 - beta), name
        if hs.b > 1:
            assert b_ == (1 << (beta - 1)) * hs.b, name
        else:
            assert b_ == (1 << beta), name
        assert g_ == 1 - (chi_ + b_) // 2, name
        checked += 1
    # pair of pants: (4n, 6, 0)
    pants = next(s for name, s in small_fixtures() if name == "g0b3-pants")
    cov = build_cover(pants)
    n_, _chi, b_, g_ = cov.stats()
    assert (n_, b_, g_) == (4 * pants.n, 6, 0)
    report(4, True, f"closed forms exact on {checked} covers; pants = (4n, 6, 0)")


def cycle_space(s):
    basis = []
    parent = {0: None}
    order = [0]
    i = 0
    tree = set()
    while i < len(order):
        u = order[i]
        i += 1
        for d in s.rot[u]:
            v = s.head(d)
            if v not in parent:
                parent[v] = d >> 1
                tree.add(d >> 1)
                order.append(v)

    def up(x):
        out = set()
        while parent[x] is not None:
            e = parent[x]
            out ^= {e}
            x = s.edge_u[e] if s.edge_v[e] == x else s.edge_v[e]
        return out

    for e in range(s.m):
        if e in tree:
            continue
        basis.append(frozenset(up(s.edge_u[e]) ^ up(s.edge_v[e]) ^ {e}))
    space = []
    for bits in range(1 << len(basis)):
        acc = frozenset()
        for j, fs in enumerate(basis):
            if bits >> j & 1:
                acc ^= fs
        space.append(acc)
    return space


def test_acceptance_5_characterization_equivalence():
    def marked(grid, cells):
        faces = []
        for verts in cells:
            for f in range(grid.f):
                if {grid.tail(d) for d in grid.faces[f]} == set(verts):
                    faces.append(f)
                    break
        return remove_faces(grid, faces)

    fixtures = [
        marked(planar_grid(2, 3), [{0, 1, 3, 4}]),
        marked(planar_grid(2, 4), [{0, 1, 4, 5}, {2, 3, 6, 7}]),
        remove_faces(torus_grid(2, 2), [0]),
        remove_faces(torus_grid(2, 3), [0]),
    ]
    pairs = 0
    span_checked = 0
    for s in fixtures:
        assert s.m <= 12
        fc = forest_cotree_greedy(s)
        space = cycle_space(s)
        sig = {}
        par = {}
        for ev in space:
            h = EvenSubgraph(s, ev)
            sig[ev] = signature_of(s, h)
            par[ev] = crossing_parity_vector(s, h, fc)
        for a in space:
            for b in space:
                assert (sig[a] == sig[b]) == (par[a] == par[b])
                pairs += 1
        # signature zero <=> membership in the face-boundary span
        interior = [f for f in range(s.f) if f not in s.boundary]
        span = set()
        for r in range(len(interior) + 1):
            for combo in itertools.combinations(interior, r):
                acc = frozenset()
                for f in combo:
                    acc ^= s.face_boundary_edges(f)
                span.add(acc)
        for ev in space:
            assert (sig[ev] == 0) == (ev in span)
            span_checked += 1
    report(5, True,
           f"{pairs} even-subgraph pairs: signature equality <=> parity equality; "
           f"{span_checked} membership checks in the face-boundary span")


_MODE_INSTANCES = None


def mode_instances():
    global _MODE_INSTANCES
    if _MODE_INSTANCES is not None:
        return _MODE_INSTANCES
    rng = random.Random(424242)
    out = []
    while len(out) < 200:
        kind = rng.choice(["torus", "planar", "torus2"])
        if kind == "planar":
            base = gen(GenSpec("planar-grid", rows=rng.randint(2, 4),
                               cols=rng.randint(2, 4),
                               weights=("uniform", 1, 100),
                               seed=rng.randrange(10 ** 9)))
            k = rng.randint(1, 3)
        else:
            base = gen(GenSpec("torus-grid", rows=rng.randint(2, 4),
                               cols=rng.randint(2, 4),
                               weights=("uniform", 1, 100),
                               seed=rng.randrange(10 ** 9)))
            k = rng.randint(0, 2)
        faces = disjoint_simple_faces(base, k, rng) if k else []
        if faces is None:
            continue
        s = remove_faces(base, faces) if faces else base
        if s.betti > 4 or (s.b == 0 and homology_surface(s).betti > 4):
            continue
        out.append(s)
    _MODE_INSTANCES = out
    return out


def test_acceptance_6_mode_equivalence():
    classes = 0
    for s in mode_instances():
        cov = build_cover(s)
        naive = min_cycles_all(cov, "naive")
        sliced = min_cycles_all(cov, "sliced")
        for h in range(cov.sheets):
            assert naive[h][0] == sliced[h][0], (s, h)
            classes += 1
    report(6, len(mode_instances()) >= 200,
           f"{len(mode_instances())} instances, {classes} classes: naive == sliced")


def test_acceptance_7_structural_invariants():
    # DP component bound
    comp_checked = 0
    for name, s in small_fixtures():
        cov = build_cover(s)
        hs = cov.hs
        bound = hs.genus + hs.b - 1
        table = all_classes(cov)
        for h in range(cov.sheets):
            _w, _sub, comps = table.subgraphs[h]
            assert comps <= max(bound, 0) or (h == 0 and comps == 0), (name, h)
            comp_checked += 1

    # cuts disconnect their terminals (sampled)
    rng = random.Random(3)
    cut_checked = 0
    for name, s in corpus()[:40]:
        src, dst = rng.sample(range(s.n), 2) if s.n > 1 else (0, 0)
        res = min_st_cut(s, src, dst)
        side = set(res.side_s)
        assert src in side and dst not in side
        cut_checked += 1

    # contractible candidates are null-homologous
    null_checked = 0
    for name, s in corpus()[200:220]:
        prep = prepare_global(s)
        dm = build_dual(prep.surface)
        s1 = remove_faces(dm.dual, [dm.vertex_to_dual_face[prep.vertex_image(0)]])
        out = global_separating_contractible(s1)
        if out is not None:
            assert signature_of(s1, out) == 0, name
            null_checked += 1

    # greedy arc systems slice to a disk
    disk_checked = 0
    for s in mode_instances()[:50]:
        hs = homology_surface(s)
        fc = forest_cotree_greedy(hs)
        if not fc.arcs:
            continue
        t = slice_system(hs, list(fc.arcs), ["arc"] * len(fc.arcs)).surface
        assert t.stats() == (1, 0, 1, 0)
        disk_checked += 1

    report(7, True,
           f"{comp_checked} DP results within the component bound, {cut_checked} cuts "
           f"disconnect, {null_checked} contractible candidates null-homologous, "
           f"{disk_checked} arc systems slice to a disk")


def test_acceptance_8_scale_trend():
    sizes = [(10, 10), (18, 18), (32, 32), (56, 56), (100, 100)]
    pts = []
    for rows, cols in sizes:
        s = torus_grid(rows, cols)
        t0 = time.perf_counter()
        res = global_min_cut(s)
        wall = time.perf_counter() - t0
        assert res.weight == min(4, 2 * rows, 2 * cols)
        pts.append((s.n, wall))
    xs = [math.log(n) for n, _ in pts]
    ys = [math.log(t) for _, t in pts]
    k = len(pts)
    sx, sy = sum(xs), sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    slope = (k * sxy - sx * sy) / (k * sxx - sx * sx)
    biggest = pts[-1][1]
    times = ", ".join(f"n={n}: {t:.2f}s" for n, t in pts)
    report(8, slope < 2.0 and biggest < 60.0,
           f"global-mincut sweep [{times}]; log-log slope {slope:.2f} < 2, "
           f"n=10^4 in {biggest:.1f}s < 60s")
