"""Dart-based cellular embeddings of graphs on orientable surfaces.

A surface is stored as a rotation system: darts ``2*e`` and ``2*e + 1`` are
the two directed sides of edge ``e`` (``2*e`` points from the first endpoint
to the second), reversal flips the low bit, and every vertex owns a cyclic
sequence of outgoing darts.  Faces are orbits of ``d -> succ(rev(d))`` where
``succ`` is the rotation successor at the head of ``d``.  Boundary is a set
of faces marked as holes; all other data (Euler characteristic, genus, Betti
number) is derived.

Weights are non-negative integers.  Decimal weights in input files are
scaled to integers at parse time; the scale is kept on the surface so
callers can convert reported weights back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


class SurfaceError(ValueError):
    """Invalid surface data (bad rotation system, disconnected graph, ...)."""


class FormatError(SurfaceError):
    """Malformed ``.crs`` instance text."""


def rev(dart: int) -> int:
    return dart ^ 1


def edge_of(dart: int) -> int:
    return dart >> 1


class Surface:
    """Immutable combinatorial surface: graph + rotation system + marked holes.

    Parameters
    ----------
    n : number of vertices.
    edges : sequence of ``(u, v, weight)`` with integer weight >= 0.
    rotations : per-vertex cyclic sequences of outgoing darts.  Dart
        ``2*e`` must appear at ``u``, dart ``2*e + 1`` at ``v``.
    boundary : face ids marked as boundary (holes).
    weight_scale : denominator applied when weights were scaled to integers.
    """

    __slots__ = (
        "n", "m", "edge_u", "edge_v", "weight", "rot", "boundary",
        "weight_scale", "faces", "face_of", "_succ", "_cache",
    )

    def __init__(self, n, edges, rotations, boundary=(), weight_scale=1):
        if n <= 0:
            raise SurfaceError("surface needs at least one vertex")
        if len(edges) == 0:
            raise SurfaceError("surface needs at least one edge")
        self.n = int(n)
        self.m = len(edges)
        self.edge_u = tuple(int(e[0]) for e in edges)
        self.edge_v = tuple(int(e[1]) for e in edges)
        self.weight = tuple(int(e[2]) for e in edges)
        self.weight_scale = int(weight_scale)
        if len(rotations) != self.n:
            raise SurfaceError("rotation count differs from vertex count")
        self.rot = tuple(tuple(int(d) for d in r) for r in rotations)

        for e in range(self.m):
            if not (0 <= self.edge_u[e] < self.n and 0 <= self.edge_v[e] < self.n):
                raise SurfaceError(f"edge {e} has endpoint out of range")
            if self.weight[e] < 0:
                raise SurfaceError(f"edge {e} has negative weight")

        # succ[d]: rotation successor of d at its tail.  Also validates that
        # the rotations partition the darts with each dart at its tail.
        succ = [-1] * (2 * self.m)
        seen = 0
        for v, r in enumerate(self.rot):
            k = len(r)
            for i, d in enumerate(r):
                if not (0 <= d < 2 * self.m):
                    raise SurfaceError(f"dart {d} out of range in rotation of {v}")
                if succ[d] != -1:
                    raise SurfaceError(f"dart {d} appears twice in rotations")
                if self.tail(d) != v:
                    raise SurfaceError(f"dart {d} listed at {v}, tail is {self.tail(d)}")
                succ[d] = r[(i + 1) % k]
                seen += 1
        if seen != 2 * self.m:
            raise SurfaceError("rotations do not cover every dart")
        self._succ = tuple(succ)

        self.faces, self.face_of = self._trace_faces()
        bset = frozenset(int(f) for f in boundary)
        for f in bset:
            if not (0 <= f < len(self.faces)):
                raise SurfaceError(f"boundary face {f} does not exist")
        self.boundary = bset
        self._cache = {}

    # -- dart primitives ---------------------------------------------------

    def tail(self, d: int) -> int:
        e = d >> 1
        return self.edge_u[e] if d & 1 == 0 else self.edge_v[e]

    def head(self, d: int) -> int:
        return self.tail(d ^ 1)

    def succ(self, d: int) -> int:
        """Rotation successor of ``d`` at its tail vertex."""
        return self._succ[d]

    def face_next(self, d: int) -> int:
        """Next dart of the face orbit through ``d``."""
        return self._succ[d ^ 1]

    def dart_weight(self, d: int) -> int:
        return self.weight[d >> 1]

    def _trace_faces(self):
        nd = 2 * self.m
        face_of = [-1] * nd
        faces = []
        for start in range(nd):
            if face_of[start] != -1:
                continue
            fid = len(faces)
            orbit = []
            d = start
            while True:
                face_of[d] = fid
                orbit.append(d)
                d = self._succ[d ^ 1]
                if d == start:
                    break
                if face_of[d] != -1:
                    raise SurfaceError("face tracing produced inconsistent orbits")
            faces.append(tuple(orbit))
        return tuple(faces), tuple(face_of)

    # -- derived topology ---------------------------------------------------

    @property
    def f(self) -> int:
        """Number of faces, boundary faces included."""
        return len(self.faces)

    @property
    def euler_closed(self) -> int:
        """Euler characteristic of the closed surface (holes filled)."""
        return self.n - self.m + self.f

    @property
    def is_connected(self) -> bool:
        return self.component_of()[1] == 1

    def component_of(self):
        """Vertex component labels and the component count."""
        comp = [-1] * self.n
        c = 0
        for s in range(self.n):
            if comp[s] != -1:
                continue
            comp[s] = c
            stack = [s]
            while stack:
                u = stack.pop()
                for d in self.rot[u]:
                    w = self.head(d)
                    if comp[w] == -1:
                        comp[w] = c
                        stack.append(w)
            c += 1
        return comp, c

    @property
    def genus(self) -> int:
        if not self.is_connected:
            raise SurfaceError("genus is defined per connected surface")
        chi = self.euler_closed
        if chi % 2 != 0:
            raise SurfaceError("odd Euler characteristic: not an orientable map")
        g = (2 - chi) // 2
        if g < 0:
            raise SurfaceError("negative genus: invalid rotation system")
        return g

    @property
    def b(self) -> int:
        return len(self.boundary)

    @property
    def betti(self) -> int:
        """Rank of the first Z2-homology group."""
        g = self.genus
        return 2 * g + self.b - 1 if self.b >= 1 else 2 * g

    def stats(self):
        """(chi, g, b, beta) with chi of the surface-with-boundary."""
        g = self.genus
        b = self.b
        return (2 - 2 * g - b, g, b, self.betti)

    # -- convenience --------------------------------------------------------

    def face_orbit(self, fid: int):
        return self.faces[fid]

    def face_edge_multiplicity(self, fid: int):
        """edge id -> number of orbit traversals for face ``fid``."""
        mult: dict[int, int] = {}
        for d in self.faces[fid]:
            mult[d >> 1] = mult.get(d >> 1, 0) + 1
        return mult

    def face_boundary_edges(self, fid: int) -> frozenset[int]:
        """Edges incident to face ``fid`` exactly once (its boundary cycle)."""
        return frozenset(e for e, k in self.face_edge_multiplicity(fid).items() if k == 1)

    def with_boundary(self, faces: Iterable[int]) -> "Surface":
        """Same embedding with a different set of marked faces.

        Marks do not affect any derived structure, so the copy shares the
        arrays instead of re-validating.
        """
        bset = frozenset(int(f) for f in faces)
        for f in bset:
            if not (0 <= f < len(self.faces)):
                raise SurfaceError(f"boundary face {f} does not exist")
        twin = object.__new__(Surface)
        for name in self.__slots__:
            setattr(twin, name, getattr(self, name))
        twin.boundary = bset
        twin._cache = {}
        return twin

    def total_weight(self) -> int:
        return sum(self.weight)

    def __repr__(self):
        return (f"Surface(n={self.n}, m={self.m}, f={self.f}, "
                f"b={self.b}, chi_closed={self.euler_closed})")


@dataclass(frozen=True)
class EvenSubgraph:
    """Edge set with all vertex degrees even; the carrier of a homology class."""

    surface: Surface
    edges: frozenset[int]

    def __post_init__(self):
        deg: dict[int, int] = {}
        s = self.surface
        for e in self.edges:
            if not (0 <= e < s.m):
                raise SurfaceError(f"edge {e} not in surface")
            deg[s.edge_u[e]] = deg.get(s.edge_u[e], 0) + 1
            deg[s.edge_v[e]] = deg.get(s.edge_v[e], 0) + 1
        odd = [v for v, k in deg.items() if k % 2]
        if odd:
            raise SurfaceError(f"subgraph has odd degree at vertices {sorted(odd)[:5]}")

    @property
    def weight(self) -> int:
        w = self.surface.weight
        return sum(w[e] for e in self.edges)

    def components(self):
        """Connected components of the subgraph as lists of edge ids."""
        s = self.surface
        adj: dict[int, list[int]] = {}
        for e in self.edges:
            adj.setdefault(s.edge_u[e], []).append(e)
            adj.setdefault(s.edge_v[e], []).append(e)
        seen_e: set[int] = set()
        comps = []
        for e0 in sorted(self.edges):
            if e0 in seen_e:
                continue
            comp = []
            stack = [e0]
            seen_e.add(e0)
            while stack:
                e = stack.pop()
                comp.append(e)
                for v in (s.edge_u[e], s.edge_v[e]):
                    for e2 in adj[v]:
                        if e2 not in seen_e:
                            seen_e.add(e2)
                            stack.append(e2)
            comps.append(sorted(comp))
        return comps

    def xor(self, other: "EvenSubgraph") -> "EvenSubgraph":
        if other.surface is not self.surface:
            raise SurfaceError("cannot xor subgraphs of different surfaces")
        return EvenSubgraph(self.surface, self.edges ^ other.edges)


@dataclass(frozen=True)
class ClosedWalk:
    """Cyclic dart sequence; consecutive darts meet head to tail."""

    surface: Surface
    darts: tuple[int, ...]

    def __post_init__(self):
        s = self.surface
        k = len(self.darts)
        for i, d in enumerate(self.darts):
            if not (0 <= d < 2 * s.m):
                raise SurfaceError(f"dart {d} not in surface")
            if k and s.head(d) != s.tail(self.darts[(i + 1) % k]):
                raise SurfaceError("walk darts are not head-to-tail")

    @property
    def weight(self) -> int:
        w = self.surface.weight
        return sum(w[d >> 1] for d in self.darts)

    def odd_edges(self) -> frozenset[int]:
        """Edges traversed an odd number of times."""
        mult: dict[int, int] = {}
        for d in self.darts:
            mult[d >> 1] = mult.get(d >> 1, 0) + 1
        return frozenset(e for e, k in mult.items() if k % 2)

    def carrier(self) -> EvenSubgraph:
        return EvenSubgraph(self.surface, self.odd_edges())

    def __len__(self):
        return len(self.darts)


# -- duality ------------------------------------------------------------------


@dataclass(frozen=True)
class DualMap:
    """Bijections linking a surface to its dual.

    Edge ids coincide between the two surfaces.  Primal face ``f`` is dual
    vertex ``f``; primal vertex ``v`` is the dual face ``vertex_to_dual_face[v]``.
    Dual vertices of marked primal faces are the dual boundary vertices.
    """

    primal: Surface
    dual: Surface
    vertex_to_dual_face: tuple[int, ...]

    @property
    def dual_boundary_vertices(self) -> frozenset[int]:
        return frozenset(self.primal.boundary)


def build_dual(surface: Surface):
    """Dual surface on the same dart set.

    The dual vertex for face ``f`` inherits the face orbit as its rotation;
    dual faces then come out as the primal vertex rotations, so applying
    ``build_dual`` twice returns the original map (same dart labels).
    Boundary marks do not transfer: the dual lives on the hole-filled
    surface and `DualMap` records which dual vertices were holes.
    """
    key = "dual"
    if key in surface._cache:
        return surface._cache[key]
    edges = [
        (surface.face_of[2 * e], surface.face_of[2 * e + 1], surface.weight[e])
        for e in range(surface.m)
    ]
    dual = Surface(surface.f, edges, surface.faces, boundary=(),
                   weight_scale=surface.weight_scale)
    v2f = [-1] * surface.n
    for v in range(surface.n):
        # dual face orbits are primal rotations; locate via any dart of v
        v2f[v] = dual.face_of[surface.rot[v][0]]
    dmap = DualMap(surface, dual, tuple(v2f))
    surface._cache[key] = dmap
    return dmap


def remove_faces(surface: Surface, faces: Iterable[int]) -> Surface:
    """Mark the given faces as boundary (delete their interiors)."""
    req = list(faces)
    if len(req) != len(set(req)):
        raise SurfaceError("duplicate face ids in removal request")
    for f in req:
        if not (0 <= f < surface.f):
            raise SurfaceError(f"face {f} does not exist")
        if f in surface.boundary:
            raise SurfaceError(f"face {f} is already boundary")
    return surface.with_boundary(surface.boundary | set(req))


def fill_boundaries(surface: Surface) -> Surface:
    """Glue disks back into every hole (unmark all boundary faces)."""
    if not surface.boundary:
        return surface
    return surface.with_boundary(())


# -- cycle decomposition -------------------------------------------------------


def cycle_decomposition(subgraph: EvenSubgraph):
    """Split an even subgraph into edge-disjoint, non-crossing closed walks.

    At each vertex the incident subgraph darts are paired consecutively in
    rotation order, which never creates a crossing.  Each edge of the
    subgraph is traversed exactly once over all returned walks.
    """
    s = subgraph.surface
    in_h = [False] * (2 * s.m)
    for e in subgraph.edges:
        in_h[2 * e] = in_h[2 * e + 1] = True

    partner: dict[int, int] = {}
    for v in range(s.n):
        local = [d for d in s.rot[v] if in_h[d]]
        if len(local) % 2:
            raise SurfaceError("subgraph is not even")
        for i in range(0, len(local), 2):
            partner[local[i]] = local[i + 1]
            partner[local[i + 1]] = local[i]

    walks = []
    used_edge = set()
    for start in range(2 * s.m):
        if not in_h[start] or (start >> 1) in used_edge:
            continue
        darts = []
        d = start
        while True:
            darts.append(d)
            used_edge.add(d >> 1)
            d = partner[d ^ 1]
            if d == start:
                break
        walks.append(ClosedWalk(s, tuple(darts)))
    return walks


# -- .crs text format ----------------------------------------------------------


def _dart_token(d: int) -> str:
    return f"{d >> 1}{'+' if d & 1 == 0 else '-'}"


def _parse_dart_token(tok: str, m: int) -> int:
    if len(tok) < 2 or tok[-1] not in "+-":
        raise FormatError(f"bad dart token {tok!r}")
    try:
        e = int(tok[:-1])
    except ValueError:
        raise FormatError(f"bad dart token {tok!r}") from None
    if not (0 <= e < m):
        raise FormatError(f"dart token {tok!r} references unknown edge")
    return 2 * e + (0 if tok[-1] == "+" else 1)


def parse_surface(text: str) -> Surface:
    """Parse the ``.crs`` instance format.

    Lines (``#`` starts a comment)::

        surface <n> <m>
        edge <eid> <u> <v> <weight>
        rot <v> : <dart> ...        darts as <eid>+ (tail u) or <eid>- (tail v)
        boundary <dart>             marks the face orbit containing the dart

    Decimal weights are scaled to integers by a common power of ten; the
    scale is stored as ``weight_scale``.  The graph must be connected.
    """
    n = m = None
    raw_edges: dict[int, tuple[int, int, str]] = {}
    raw_rot: dict[int, list[str]] = {}
    boundary_toks: list[str] = []

    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "surface":
                if n is not None:
                    raise FormatError("duplicate surface header")
                n, m = int(parts[1]), int(parts[2])
            elif kind == "edge":
                e, u, v = int(parts[1]), int(parts[2]), int(parts[3])
                if e in raw_edges:
                    raise FormatError(f"duplicate edge id {e}")
                raw_edges[e] = (u, v, parts[4])
            elif kind == "rot":
                v = int(parts[1])
                if parts[2] != ":":
                    raise FormatError("rot line missing ':'")
                if v in raw_rot:
                    raise FormatError(f"duplicate rotation for vertex {v}")
                raw_rot[v] = parts[3:]
            elif kind == "boundary":
                boundary_toks.append(parts[1])
            else:
                raise FormatError(f"unknown directive {kind!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"line {ln}: cannot parse {line!r}") from None

    if n is None:
        raise FormatError("missing surface header")
    if set(raw_edges) != set(range(m)):
        raise FormatError("edge ids must be exactly 0..m-1")

    # scale decimal weights to a common integer grid
    fracs = []
    for e in range(m):
        w = raw_edges[e][2]
        try:
            fracs.append(Fraction(w))
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad weight {w!r} on edge {e}") from None
    scale = 1
    for fr in fracs:
        den = fr.denominator
        g = _gcd(scale, den)
        scale = scale // g * den
    weights = [fr * scale for fr in fracs]
    edges = []
    for e in range(m):
        u, v, _ = raw_edges[e]
        w = weights[e]
        if w.denominator != 1 or w < 0:
            raise FormatError(f"weight of edge {e} is not a non-negative number")
        edges.append((u, v, int(w)))

    rotations = []
    for v in range(n):
        toks = raw_rot.get(v, [])
        rotations.append([_parse_dart_token(t, m) for t in toks])

    try:
        s = Surface(n, edges, rotations, weight_scale=scale)
    except SurfaceError as exc:
        raise FormatError(str(exc)) from None
    if not s.is_connected:
        raise FormatError("graph is not connected")

    marks = set()
    for tok in boundary_toks:
        marks.add(s.face_of[_parse_dart_token(tok, m)])
    if marks:
        s = s.with_boundary(marks)
    return s


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def emit_surface(s: Surface) -> str:
    """Canonical ``.crs`` text; parse(emit(.)) round-trips bit-exactly."""
    out = [f"surface {s.n} {s.m}"]
    for e in range(s.m):
        out.append(f"edge {e} {s.edge_u[e]} {s.edge_v[e]} {s.weight[e]}")
    for v in range(s.n):
        toks = " ".join(_dart_token(d) for d in s.rot[v])
        out.append(f"rot {v} : {toks}".rstrip())
    for f in sorted(s.boundary):
        out.append(f"boundary {_dart_token(min(s.faces[f]))}")
    return "\n".join(out) + "\n"


def canonical_form(s: Surface) -> str:
    """Canonical string of the map up to relabeling (weights included).

    Minimizes a BFS encoding over all starting darts; quadratic, intended
    for small test surfaces and isomorphism checks.
    """
    best = None
    for start in range(2 * s.m):
        code = _encode_from(s, start)
        if best is None or code < best:
            best = code
    return best


def _encode_from(s: Surface, start: int) -> str:
    dart_id: dict[int, int] = {}
    order = []

    def visit(d):
        if d not in dart_id:
            dart_id[d] = len(dart_id)
            order.append(d)

    visit(start)
    i = 0
    while i < len(order):
        d = order[i]
        i += 1
        visit(d ^ 1)
        visit(s.succ(d))
    parts = []
    for d in order:
        parts.append(f"{dart_id[d ^ 1]}.{dart_id[s.succ(d)]}.{s.dart_weight(d)}")
    marked = sorted(min(dart_id[x] for x in s.faces[f] if x in dart_id) for f in s.boundary)
    return ";".join(parts) + "|" + ",".join(map(str, marked))
