import random

import pytest

from homocut.cover import (
    BetaCapError,
    all_classes,
    build_cover,
    lift_walk,
    min_cycle_in_class,
    min_cycles_all,
    min_even_in_class,
)
from homocut.generate import GenSpec, gen, genus_schema, planar_grid, torus_grid
from homocut.homology import edge_signatures, homology_surface, signature_of
from homocut.oracles import oracle_min_even_all
from homocut.surface import Surface, remove_faces


def face_with_vertices(s, verts):
    verts = set(verts)
    for f in range(s.f):
        if {s.tail(d) for d in s.faces[f]} == verts:
            return f
    raise AssertionError


def pants_fixture():
    s = planar_grid(2, 6)
    fs = [face_with_vertices(s, {0, 1, 6, 7}),
          face_with_vertices(s, {2, 3, 8, 9}),
          face_with_vertices(s, {4, 5, 10, 11})]
    return remove_faces(s, fs)


def dumbbell_schema():
    """Two one-vertex tori joined by a heavy bridge: genus 2, one face."""
    edges = [(0, 0, 1), (0, 0, 10), (1, 1, 1), (1, 1, 10), (0, 1, 100)]
    rot = [[0, 2, 1, 3, 8], [9, 4, 6, 5, 7]]
    s = Surface(2, edges, rot)
    assert s.f == 1 and s.genus == 2
    return s


def cover_stats_ok(s):
    c = build_cover(s)
    hs = c.hs
    beta = hs.betti
    n_, chi_, b_, g_ = c.stats()
    assert n_ == (1 << beta) * hs.n
    assert chi_ == (1 << beta) * (1 - beta)
    if hs.b > 1:
        assert b_ == (1 << (beta - 1)) * hs.b
    else:
        assert b_ == (1 << beta)
    assert g_ == 1 - (chi_ + b_) // 2
    return c


def test_cover_closed_forms_pants():
    s = pants_fixture()
    c = cover_stats_ok(s)
    assert c.stats()[0] == 4 * s.n
    assert c.stats()[2] == 6
    assert c.stats()[3] == 0


def test_cover_closed_forms_torus_minus_face():
    s = remove_faces(torus_grid(3, 3), [0])
    c = cover_stats_ok(s)
    assert c.stats()[2] == 4 and c.stats()[3] == 1


def test_cover_closed_forms_more():
    for s in (genus_schema(2, 1), remove_faces(torus_grid(4, 4), [0, 10]),
              planar_grid(3, 3).with_boundary([0])):
        cover_stats_ok(s)


def test_cover_disk_is_identity_sized():
    s = planar_grid(3, 3)
    disk = remove_faces(s, [max(range(s.f), key=lambda f: len(s.faces[f]))])
    c = build_cover(disk)
    assert c.surface.n == disk.n and c.surface.m == disk.m


def test_lift_empty_and_loop():
    s = genus_schema(1, 0)
    c = build_cover(s)
    lifted, endh = lift_walk(c, (), 0)
    assert lifted == () and endh == 0
    ha = signature_of(s, [0])
    lifted, endh = lift_walk(c, (0,), 0)
    assert endh == ha
    assert len(lifted) == 1


def test_lift_of_shortest_path_is_shortest():
    s = remove_faces(torus_grid(3, 3), [0])
    c = build_cover(s)
    from homocut.shortpath import surface_graph
    g0 = surface_graph(c.hs)
    gc = surface_graph(c.surface)
    d0 = g0.distances([0])[0]
    dc = gc.distances([c.vid(0, 0)])[0]
    # spot check: distance to any lift is at least the base distance, and the
    # lift of a shortest path realizes it on some sheet
    for v in range(c.hs.n):
        lifts = [dc[c.vid(v, h)] for h in range(c.sheets)]
        assert min(lifts) == d0[v]


def test_min_cycle_class_zero_is_empty():
    s = pants_fixture()
    c = build_cover(s)
    w, walk = min_cycle_in_class(c, 0)
    assert w == 0 and len(walk) == 0


def test_min_cycle_meridian_unit_torus():
    s = torus_grid(4, 4)
    col = [16 + 4 * i for i in range(4)]  # vertical edges of column 0
    h = signature_of(s, col)
    assert h != 0
    c = build_cover(s)
    w, walk = min_cycle_in_class(c, h)
    assert w == 4
    assert signature_of(s, walk) == h


def test_modes_agree_on_fixtures():
    # sliced mode needs simple, disjoint boundary cycles (greedy arc system)
    for s in (pants_fixture(), remove_faces(torus_grid(3, 3), [0]),
              torus_grid(3, 4), remove_faces(torus_grid(4, 3), [2])):
        c = build_cover(s)
        naive = min_cycles_all(c, "naive")
        sliced = min_cycles_all(c, "sliced")
        for h in range(c.sheets):
            assert naive[h][0] == sliced[h][0], (s, h)


def test_sliced_mode_rejects_nonsimple_boundary():
    s = genus_schema(2, 1)
    c = build_cover(s)
    from homocut.surface import SurfaceError
    with pytest.raises(SurfaceError):
        min_cycles_all(c, "sliced")


def test_min_even_matches_oracle_all_classes():
    fixtures = [
        pants_fixture(),
        remove_faces(torus_grid(3, 3), [0]),
        torus_grid(3, 3),
        genus_schema(2, 1),
        gen(GenSpec("torus-grid", rows=3, cols=3, weights=("uniform", 1, 100), seed=3)),
    ]
    for s in fixtures:
        c = build_cover(s)
        hs = c.hs
        sigs = edge_signatures(s)
        oracle = oracle_min_even_all(
            hs.n, list(zip(hs.edge_u, hs.edge_v, hs.weight)), list(sigs))
        table = all_classes(c)
        for h in range(c.sheets):
            assert h in oracle, (s, h)
            assert table.weight(h) == oracle[h][0], (s, h)
            w, sub = min_even_in_class(c, h)
            assert signature_of(s, sub) == h


def test_disconnected_optimum_on_dumbbell():
    s = dumbbell_schema()
    c = build_cover(s)
    h = signature_of(s, [0]) ^ signature_of(s, [2])  # both light handle loops
    w1, walk = min_cycle_in_class(c, h)
    assert w1 == 1 + 1 + 2 * 100  # single walk must cross the bridge twice
    w2, sub = min_even_in_class(c, h)
    assert w2 == 2
    assert sub.edges == frozenset({0, 2})
    assert len(sub.components()) == 2


def test_dp_triangle_property():
    s = genus_schema(2, 1)
    c = build_cover(s)
    t = all_classes(c)
    for h1 in range(c.sheets):
        for h2 in range(c.sheets):
            assert t.weight(h1 ^ h2) <= t.weight(h1) + t.weight(h2)


def test_component_bound():
    for s in (pants_fixture(), genus_schema(2, 1), dumbbell_schema()):
        c = build_cover(s)
        t = all_classes(c)
        hs = c.hs
        bound = max(hs.genus + hs.b - 1, 1)
        for h in range(c.sheets):
            _w, sub, comps = t.subgraphs[h]
            assert comps <= bound


def test_beta_cap(monkeypatch):
    s = genus_schema(2, 0)  # beta = 4
    monkeypatch.setenv("HOMOCUT_BETA_CAP", "3")
    with pytest.raises(BetaCapError):
        build_cover(s)
    monkeypatch.delenv("HOMOCUT_BETA_CAP")
    build_cover(s)


def test_min_cycle_sampling_falsification():
    """No random closed walk beats the per-class minimum (10^4 samples)."""
    s = gen(GenSpec("torus-grid", rows=3, cols=3,
                    weights=("uniform", 1, 50), seed=11))
    c = build_cover(s)
    table = min_cycles_all(c)
    rng = random.Random(0)
    hs = c.hs
    samples = 0
    while samples < 10_000:
        v0 = rng.randrange(hs.n)
        darts = []
        v = v0
        for _ in range(rng.randint(1, 14)):
            d = rng.choice(hs.rot[v])
            darts.append(d)
            v = hs.head(d)
        if v != v0:
            continue
        samples += 1
        h = signature_of(s, [d >> 1 for d in darts])
        w = sum(hs.dart_weight(d) for d in darts)
        assert table[h][0] <= w


def test_cover_edge_weights_match_projections():
    s = remove_faces(torus_grid(3, 3), [0])
    c = build_cover(s)
    cov = c.surface
    for e in range(cov.m):
        assert cov.weight[e] == c.hs.weight[e % c.hs.m]


def test_dp_table_monotone_and_zero_class():
    s = gen(GenSpec("torus-grid", rows=3, cols=3,
                    weights=("uniform", 1, 30), seed=2))
    c = build_cover(s)
    t = all_classes(c)
    for k in range(1, t.kmax + 1):
        assert t.table[k][0] == 0
        if k > 1:
            assert all(t.table[k][h] <= t.table[k - 1][h] for h in range(c.sheets))
