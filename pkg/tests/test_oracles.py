import itertools
import random

import pytest

from homocut.oracles import (
    OracleReport,
    cycle_space_basis,
    oracle_global_min_cut,
    oracle_max_flow_min_cut,
    oracle_min_even_all,
)


def rand_connected(rng, n, extra):
    edges = []
    for v in range(1, n):
        edges.append((rng.randrange(v), v, rng.randint(1, 20)))
    for _ in range(extra):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.append((u, v, rng.randint(1, 20)))
    return edges


def exhaustive_st_cut(n, edges, s, t):
    best = None
    for bits in range(1 << n):
        if not (bits >> s & 1) or (bits >> t & 1):
            continue
        w = sum(we for (u, v, we) in edges if (bits >> u & 1) != (bits >> v & 1))
        if best is None or w < best:
            best = w
    return best


def exhaustive_global_cut(n, edges):
    best = None
    for bits in range(1, 1 << (n - 1)):  # vertex n-1 stays on one side
        w = sum(we for (u, v, we) in edges if (bits >> u & 1) != (bits >> v & 1))
        if best is None or w < best:
            best = w
    return best


def test_max_flow_single_edge():
    val, cut, side = oracle_max_flow_min_cut(2, [(0, 1, 7)], 0, 1)
    assert val == 7 and cut == [0] and side == {0}


def test_max_flow_disconnected():
    val, cut, _ = oracle_max_flow_min_cut(3, [(0, 1, 3), (2, 2, 1)], 0, 2)
    assert val == 0 and cut == []


def test_max_flow_rejects_equal_terminals():
    with pytest.raises(ValueError):
        oracle_max_flow_min_cut(2, [(0, 1, 1)], 1, 1)


@pytest.mark.parametrize("seed", range(25))
def test_max_flow_matches_exhaustive(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 10)
    edges = rand_connected(rng, n, rng.randint(0, 6))
    s, t = 0, n - 1
    val, cut, side = oracle_max_flow_min_cut(n, edges, s, t)
    assert val == exhaustive_st_cut(n, edges, s, t)
    assert sum(edges[e][2] for e in cut) == val
    assert s in side and t not in side


def test_global_cut_square():
    val, _side = oracle_global_min_cut(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])
    assert val == 2


def test_global_cut_bridge():
    edges = [(0, 1, 5), (1, 2, 5), (2, 0, 5), (2, 3, 1), (3, 4, 5), (4, 5, 5), (5, 3, 5)]
    val, side = oracle_global_min_cut(6, edges)
    assert val == 1
    assert side in ({0, 1, 2}, {3, 4, 5})


@pytest.mark.parametrize("seed", range(25))
def test_global_cut_matches_exhaustive(seed):
    rng = random.Random(100 + seed)
    n = rng.randint(3, 12)
    edges = rand_connected(rng, n, rng.randint(0, 8))
    val, side = oracle_global_min_cut(n, edges)
    assert val == exhaustive_global_cut(n, edges)
    w = sum(we for (u, v, we) in edges if (u in side) != (v in side))
    assert w == val and 0 < len(side) < n


def test_min_even_all_trivial_class():
    # triangle with a pendant edge: cycle space = the triangle
    edges = [(0, 1, 2), (1, 2, 3), (2, 0, 4), (0, 3, 9)]
    sigs = [1, 0, 0, 0]
    table = oracle_min_even_all(4, edges, sigs)
    assert table[0] == (0, frozenset())
    assert table[1] == (9, frozenset({0, 1, 2}))


def test_min_even_all_matches_direct_enumeration():
    rng = random.Random(5)
    n, extra = 5, 5
    edges = rand_connected(rng, n, extra)
    m = len(edges)
    sigs = [rng.randrange(4) for _ in range(m)]
    table = oracle_min_even_all(n, edges, sigs)
    # direct check over all even subsets
    best = {}
    for bits in range(1 << m):
        deg = {}
        w = 0
        h = 0
        for e in range(m):
            if bits >> e & 1:
                u, v, we = edges[e]
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
                w += we
                h ^= sigs[e]
        if any(k % 2 for k in deg.values()):
            continue
        if h not in best or w < best[h]:
            best[h] = w
    assert {h: t[0] for h, t in table.items()} == best


def test_cycle_space_basis_size():
    edges = [(0, 1, 1), (1, 2, 1), (2, 0, 1), (0, 3, 1)]
    assert len(cycle_space_basis(4, edges)) == 1


def test_report_json():
    r = OracleReport("inst", "st-cut", 4, 4)
    s = r.to_json()
    assert '"match": true' in s


def test_crossing_diagnostic_reports_bound():
    from homocut.generate import torus_grid
    from homocut.surface import remove_faces, EvenSubgraph
    from homocut.homology import forest_cotree_greedy
    from homocut.oracles import crossing_diagnostic
    from homocut.cover import build_cover, min_even_in_class
    from homocut.homology import signature_of

    s = remove_faces(torus_grid(3, 3), [0])
    fc = forest_cotree_greedy(s)
    cov = build_cover(s)
    _w, sub = min_even_in_class(cov, 1)
    rep = crossing_diagnostic(s, sub, fc)
    assert rep["reference_bound"] == 12 * 1 + 4 * 1 - 5
    assert len(rep["per_arc"]) == s.betti
    assert rep["max"] >= 0
