"""Independent brute-force references used to verify the solvers.

Nothing here shares code with the solver paths: max-flow/min-cut is a plain
augmenting-path implementation over an adjacency map, the global cut is
Stoer-Wagner, and per-class minima come from enumerating the whole cycle
space.  Class labels are the only shared vocabulary: the enumeration oracle
takes per-edge signatures as *data* so both sides talk about the same
classes while the minimization stays independent.

All oracles require integer weights (decimal instances are scaled at parse
time anyway).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, asdict
import json


@dataclass(frozen=True)
class OracleReport:
    instance: str
    quantity: str
    oracle_value: object
    solver_value: object

    @property
    def match(self) -> bool:
        return self.oracle_value == self.solver_value

    def to_json(self) -> str:
        d = asdict(self)
        d["match"] = self.match
        return json.dumps(d, sort_keys=True)


def oracle_max_flow_min_cut(n, edges, s, t):
    """Exact max-flow / min-cut via shortest augmenting paths.

    Returns ``(value, cut edge ids, source-side vertex set)``.  Disconnected
    terminals give value 0 with an empty cut.
    """
    if s == t:
        raise ValueError("source equals target")
    cap = [dict() for _ in range(n)]
    for u, v, w in edges:
        if u == v:
            continue
        cap[u][v] = cap[u].get(v, 0) + w
        cap[v][u] = cap[v].get(u, 0) + w

    flow = 0
    while True:
        parent = {s: None}
        q = deque([s])
        while q and t not in parent:
            u = q.popleft()
            for v, c in cap[u].items():
                if c > 0 and v not in parent:
                    parent[v] = u
                    q.append(v)
        if t not in parent:
            break
        bottleneck = None
        v = t
        while parent[v] is not None:
            u = parent[v]
            c = cap[u][v]
            bottleneck = c if bottleneck is None else min(bottleneck, c)
            v = u
        v = t
        while parent[v] is not None:
            u = parent[v]
            cap[u][v] -= bottleneck
            cap[v][u] = cap[v].get(u, 0) + bottleneck
            v = u
        flow += bottleneck

    reach = {s}
    q = deque([s])
    while q:
        u = q.popleft()
        for v, c in cap[u].items():
            if c > 0 and v not in reach:
                reach.add(v)
                q.append(v)
    cut = [e for e, (u, v, _w) in enumerate(edges)
           if (u in reach) != (v in reach)]
    assert sum(edges[e][2] for e in cut) == flow
    return flow, cut, reach


def oracle_global_min_cut(n, edges):
    """Stoer-Wagner global minimum cut: ``(value, one side of the partition)``."""
    if n < 2:
        raise ValueError("global cut needs at least two vertices")
    w = [[0] * n for _ in range(n)]
    for u, v, c in edges:
        if u != v:
            w[u][v] += c
            w[v][u] += c
    groups = [[v] for v in range(n)]
    active = list(range(n))
    best = None
    best_side = None
    while len(active) > 1:
        a = active[0]
        inA = {a}
        conn = {v: w[a][v] for v in active if v != a}
        order = [a]
        while len(inA) < len(active):
            u = max(conn, key=lambda v: (conn[v], -v))
            order.append(u)
            inA.add(u)
            del conn[u]
            for v in conn:
                conn[v] += w[u][v]
        t_ = order[-1]
        s_ = order[-2]
        cut_of_phase = sum(w[t_][v] for v in active if v != t_)
        if best is None or cut_of_phase < best:
            best = cut_of_phase
            best_side = set(groups[t_])
        # merge t into s
        groups[s_].extend(groups[t_])
        for v in active:
            if v not in (s_, t_):
                w[s_][v] += w[t_][v]
                w[v][s_] = w[s_][v]
        active.remove(t_)
    return best, best_side


def cycle_space_basis(n, edges):
    """Fundamental even-subgraph masks from an arbitrary spanning forest."""
    adj = [[] for _ in range(n)]
    for e, (u, v, _w) in enumerate(edges):
        adj[u].append((v, e))
        adj[v].append((u, e))
    parent_edge = [-1] * n
    parent_vertex = [-1] * n
    seen = [False] * n
    order = []
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        stack = [root]
        while stack:
            u = stack.pop()
            order.append(u)
            for v, e in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    parent_edge[v] = e
                    parent_vertex[v] = u
                    stack.append(v)
    path_mask = [0] * n
    for u in order:
        if parent_vertex[u] >= 0:
            path_mask[u] = path_mask[parent_vertex[u]] ^ (1 << parent_edge[u])
    tree = {parent_edge[v] for v in range(n) if parent_edge[v] >= 0}
    basis = []
    for e, (u, v, _w) in enumerate(edges):
        if e in tree:
            continue
        basis.append(path_mask[u] ^ path_mask[v] ^ (1 << e))
    return basis


def oracle_min_even_all(n, edges, sigs, dim_cap=22):
    """Minimum-weight even subgraph per class by enumerating the cycle space.

    ``sigs`` labels each edge with its class; the minimization itself never
    consults the solver.  Returns ``class -> (weight, edge id frozenset)``.
    """
    basis = cycle_space_basis(n, edges)
    if len(basis) > dim_cap:
        raise ValueError(f"cycle space dimension {len(basis)} over cap {dim_cap}")
    basis_class = []
    for mask in basis:
        h = 0
        mm = mask
        while mm:
            e = (mm & -mm).bit_length() - 1
            h ^= sigs[e]
            mm &= mm - 1
        basis_class.append(h)

    weights = [e[2] for e in edges]
    best = {0: (0, 0)}  # class -> (weight, mask)
    mask = 0
    h = 0
    for i in range(1, 1 << len(basis)):
        j = (i & -i).bit_length() - 1  # Gray-code style incremental xor
        gray_prev = (i - 1) ^ ((i - 1) >> 1)
        gray = i ^ (i >> 1)
        flip = (gray ^ gray_prev).bit_length() - 1
        mask ^= basis[flip]
        h ^= basis_class[flip]
        wsum = 0
        mm = mask
        while mm:
            e = (mm & -mm).bit_length() - 1
            wsum += weights[e]
            mm &= mm - 1
        if h not in best or wsum < best[h][0]:
            best[h] = (wsum, mask)
    out = {}
    for h, (wsum, mask) in best.items():
        sel = frozenset(e for e in range(len(edges)) if mask >> e & 1)
        out[h] = (wsum, sel)
    return out


def crossing_diagnostic(surface, subgraph, fc):
    """Crossing counts of a fixed decomposition against each greedy arc.

    Reported next to the 12g+4b-5 reference line; with deterministic
    tie-breaking the bound is a diagnostic, never an assertion.
    """
    from .homology import crossing_counts

    counts = crossing_counts(surface, subgraph, fc)
    g = surface.genus
    b = surface.b
    return {
        "per_arc": counts,
        "max": max(counts, default=0),
        "reference_bound": 12 * g + 4 * b - 5,
    }
