"""Instance generators: grids, genus schemas, random rotation systems.

Identical `GenSpec` values produce bit-identical ``.crs`` text.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .surface import Surface, SurfaceError, emit_surface


@dataclass(frozen=True)
class GenSpec:
    kind: str  # planar-grid | torus-grid | genus-schema | random-rotation
    rows: int = 0
    cols: int = 0
    genus: int = 0
    subdivisions: int = 0
    vertices: int = 0
    edges: int = 0
    weights: object = "unit"  # "unit" | ("uniform", lo, hi)
    seed: int = 0


def gen(spec: GenSpec) -> Surface:
    if spec.kind == "planar-grid":
        s = planar_grid(spec.rows, spec.cols)
    elif spec.kind == "torus-grid":
        s = torus_grid(spec.rows, spec.cols)
    elif spec.kind == "genus-schema":
        s = genus_schema(spec.genus, spec.subdivisions)
    elif spec.kind == "random-rotation":
        s = random_rotation(spec.vertices, spec.edges, spec.seed)
    else:
        raise SurfaceError(f"unknown generator kind {spec.kind!r}")
    return _apply_weights(s, spec.weights, spec.seed)


def gen_text(spec: GenSpec) -> str:
    return emit_surface(gen(spec))


def _apply_weights(s: Surface, weights, seed: int) -> Surface:
    if weights == "unit":
        return s
    if isinstance(weights, tuple) and weights[0] == "uniform":
        _, lo, hi = weights
        rng = random.Random(seed)
        edges = [(s.edge_u[e], s.edge_v[e], rng.randint(lo, hi)) for e in range(s.m)]
        return Surface(s.n, edges, s.rot, boundary=s.boundary,
                       weight_scale=s.weight_scale)
    raise SurfaceError(f"unknown weight distribution {weights!r}")


def planar_grid(rows: int, cols: int) -> Surface:
    """rows x cols grid embedded in the sphere (outer face included)."""
    return _grid(rows, cols, wrap=False)


def torus_grid(rows: int, cols: int) -> Surface:
    """rows x cols grid with wraparound; genus 1, rows*cols square faces."""
    if rows < 2 or cols < 2:
        raise SurfaceError("torus grid needs rows, cols >= 2")
    return _grid(rows, cols, wrap=True)


def _grid(rows: int, cols: int, wrap: bool) -> Surface:
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise SurfaceError("grid too small")
    vid = lambda i, j: i * cols + j
    edges = []
    hor: dict[tuple[int, int], int] = {}
    ver: dict[tuple[int, int], int] = {}
    hc = cols if wrap else cols - 1
    vr = rows if wrap else rows - 1
    for i in range(rows):
        for j in range(hc):
            hor[(i, j)] = len(edges)
            edges.append((vid(i, j), vid(i, (j + 1) % cols), 1))
    for i in range(vr):
        for j in range(cols):
            ver[(i, j)] = len(edges)
            edges.append((vid(i, j), vid((i + 1) % rows, j), 1))
    rot = []
    for i in range(rows):
        for j in range(cols):
            order = []
            e = hor.get((i, j))  # east
            if e is not None:
                order.append(2 * e)
            nn = ver.get(((i - 1) % rows, j)) if (wrap or i > 0) else None
            if nn is not None:
                order.append(2 * nn + 1)
            w = hor.get((i, (j - 1) % cols)) if (wrap or j > 0) else None
            if w is not None:
                order.append(2 * w + 1)
            ss = ver.get((i, j)) if (wrap or i < rows - 1) else None
            if ss is not None:
                order.append(2 * ss)
            rot.append(order)
    return Surface(rows * cols, edges, rot)


def genus_schema(genus: int, subdivisions: int = 0) -> Surface:
    """One-vertex 2g-loop polygon schema of the genus-g surface, subdivided.

    The rotation (a1 b1 a1' b1' a2 ...) yields a single face; with s
    subdivisions per loop the schema has 1 + 2*g*s vertices.
    """
    if genus < 1:
        raise SurfaceError("genus schema needs genus >= 1")
    s = subdivisions
    n = 1 + 2 * genus * s
    edges = []
    first_dart = []  # dart leaving vertex 0 along loop k
    last_dart = []  # dart leaving vertex 0 against loop k
    next_v = 1
    for _k in range(2 * genus):
        if s == 0:
            e = len(edges)
            edges.append((0, 0, 1))
            first_dart.append(2 * e)
            last_dart.append(2 * e + 1)
        else:
            chain = [0] + list(range(next_v, next_v + s)) + [0]
            next_v += s
            ids = []
            for a, b in zip(chain, chain[1:]):
                ids.append(len(edges))
                edges.append((a, b, 1))
            first_dart.append(2 * ids[0])
            last_dart.append(2 * ids[-1] + 1)
    rot0 = []
    for k in range(genus):
        a, b = 2 * k, 2 * k + 1
        rot0.extend([first_dart[a], first_dart[b], last_dart[a], last_dart[b]])
    rot = [rot0]
    # degree-2 interior vertices: any order of their two darts
    per_vertex: dict[int, list[int]] = {}
    for e, (u, v, _w) in enumerate(edges):
        per_vertex.setdefault(u, []).append(2 * e)
        per_vertex.setdefault(v, []).append(2 * e + 1)
    for v in range(1, n):
        rot.append(sorted(per_vertex[v]))
    surf = Surface(n, edges, rot)
    if surf.f != 1 or surf.genus != genus:
        raise SurfaceError("schema construction produced a wrong surface")
    return surf


def random_rotation(n: int, m: int, seed: int) -> Surface:
    """Random connected multigraph with a random rotation system.

    The realized genus is whatever the rotation gives; loops and parallel
    edges are allowed.
    """
    if n < 1 or m < max(1, n - 1):
        raise SurfaceError("need m >= n-1 edges for a connected graph")
    rng = random.Random(seed)
    edges = []
    for v in range(1, n):
        edges.append((rng.randrange(v), v, 1))
    while len(edges) < m:
        edges.append((rng.randrange(n), rng.randrange(n), 1))
    per_vertex: dict[int, list[int]] = {v: [] for v in range(n)}
    for e, (u, v, _w) in enumerate(edges):
        per_vertex[u].append(2 * e)
        per_vertex[v].append(2 * e + 1)
    rot = []
    for v in range(n):
        darts = per_vertex[v]
        rng.shuffle(darts)
        rot.append(darts)
    return Surface(n, edges, rot)
