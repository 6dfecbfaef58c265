"""Slicing a combinatorial surface along a system of walks.

Walks are dart sequences.  Overlapping (non-crossing) walks are handled the
way the abstract-arc picture demands: each traversal of an edge becomes its
own parallel strand, an edge with ``s`` strands splits into ``s + 1`` copies,
and the thin strips between parallel strands become new boundary faces.

Three end behaviours:

* ``cycle``  -- closed walk, no ends;
* ``arc``    -- open walk whose endpoints open into marked boundary faces;
* ``slit``   -- open walk cut along its interior, endpoints left unsplit
  (the two sides of the cut meet at the endpoints, as for the lifted-path
  cut used by the covering-space search).

The engine validates that the system is non-crossing (consistent strand
nesting along shared runs, no interleaved visits at vertices) and raises
`SurfaceError` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key

from .surface import Surface, SurfaceError, rev


@dataclass(frozen=True)
class SliceResult:
    surface: Surface
    parent: Surface
    edge_origin: tuple[int, ...]
    vertex_origin: tuple[int, ...]

    def project_dart(self, dart: int) -> int:
        return 2 * self.edge_origin[dart >> 1] + (dart & 1)

    def project_walk(self, darts):
        return tuple(self.project_dart(d) for d in darts)

    def vertex_copies(self, old_vertex: int):
        return [v for v, o in enumerate(self.vertex_origin) if o == old_vertex]

    def edge_copies(self, old_edge: int):
        return [e for e, o in enumerate(self.edge_origin) if o == old_edge]


# item kinds on the expanded vertex circle
_COPY, _END, _ANCHOR = 0, 1, 2


class _System:
    def __init__(self, surface: Surface, walks, kinds):
        self.s = surface
        self.walks = [tuple(w) for w in walks]
        self.kinds = list(kinds)
        if len(self.walks) != len(self.kinds):
            raise SurfaceError("walk/kind length mismatch")
        for w, k in zip(self.walks, self.kinds):
            if k not in ("cycle", "arc", "slit"):
                raise SurfaceError(f"unknown walk kind {k!r}")
            if not w:
                raise SurfaceError("empty walk")
            for i, d in enumerate(w):
                if not (0 <= d < 2 * surface.m):
                    raise SurfaceError(f"dart {d} out of range")
                if i + 1 < len(w) and surface.head(d) != surface.tail(w[i + 1]):
                    raise SurfaceError("walk darts are not head-to-tail")
            if k == "cycle" and surface.head(w[-1]) != surface.tail(w[0]):
                raise SurfaceError("cycle walk does not close")
        # strands per edge: (walk, step)
        self.per_edge: dict[int, list[tuple[int, int]]] = {}
        for wi, w in enumerate(self.walks):
            for st, d in enumerate(w):
                self.per_edge.setdefault(d >> 1, []).append((wi, st))
        self._rotpos = [
            {d: i for i, d in enumerate(r)} for r in surface.rot
        ]
        self.anchors = self._place_anchors()

    # -- anchors -----------------------------------------------------------

    def _anchor_corner(self, vertex, emerge_dart):
        """First marked corner scanning rotation order from the emergence dart.

        The corner after dart x belongs to face_of(rev(x)); the arc end is
        drawn into the first hole corner reachable without crossing other
        darts of the vertex.
        """
        s = self.s
        r = s.rot[vertex]
        k = len(r)
        start = self._rotpos[vertex][emerge_dart]
        for off in range(k):
            x = r[(start + off) % k]
            if s.face_of[rev(x)] in s.boundary:
                return x
        raise SurfaceError(
            f"arc endpoint at vertex {vertex} does not touch a boundary face")

    def _place_anchors(self):
        """walk -> (start corner dart, end corner dart) for arc walks."""
        anchors = {}
        for wi, (w, k) in enumerate(zip(self.walks, self.kinds)):
            if k != "arc":
                continue
            v0 = self.s.tail(w[0])
            v1 = self.s.head(w[-1])
            anchors[wi] = (
                (v0, self._anchor_corner(v0, w[0])),
                (v1, self._anchor_corner(v1, rev(w[-1]))),
            )
        return anchors

    # -- strand nesting ------------------------------------------------------

    def _oriented_cursor(self, wi, st, forward_dart):
        """Cursor (walk, step, aligned) moving in the direction of forward_dart."""
        aligned = self.walks[wi][st] == forward_dart
        return (wi, st, aligned)

    def _advance(self, cur):
        """Next oriented continuation: ('dart', d, cursor) or terminal marker."""
        wi, st, aligned = cur
        w = self.walks[wi]
        kind = self.kinds[wi]
        if aligned:
            if st + 1 < len(w):
                return ("dart", w[st + 1], (wi, st + 1, True))
            if kind == "cycle":
                return ("dart", w[0], (wi, 0, True))
            if kind == "arc":
                return ("anchor", self.anchors[wi][1])
            return ("deadend",)
        else:
            if st - 1 >= 0:
                return ("dart", rev(w[st - 1]), (wi, st - 1, False))
            if kind == "cycle":
                return ("dart", rev(w[-1]), (wi, len(w) - 1, False))
            if kind == "arc":
                return ("anchor", self.anchors[wi][0])
            return ("deadend",)

    def _scan_rank(self, vertex, come_from, cont):
        """Rank of a continuation around ``vertex`` scanning from rev(come_from).

        Smaller rank means nearer the left side of the travel direction.
        Returns None for dead ends (no verdict).
        """
        r = self.s.rot[vertex]
        k = len(r)
        base = self._rotpos[vertex][rev(come_from)]
        if cont[0] == "dart":
            return ((self._rotpos[vertex][cont[1]] - base) % k, 0)
        if cont[0] == "anchor":
            av, ax = cont[1]
            if av != vertex:
                raise SurfaceError("anchor vertex mismatch")
            return ((self._rotpos[vertex][ax] - base) % k, 1)
        return None

    def _directional_verdict(self, a, b, forward_dart):
        """-1 if strand a nests left of b walking along forward_dart, else 1.

        None when the walks never diverge in this direction (identical runs,
        matching anchors, or a dead end).
        """
        cur_a = self._oriented_cursor(*a, forward_dart)
        cur_b = self._oriented_cursor(*b, forward_dart)
        come_from = forward_dart
        limit = 2 * (len(self.walks[a[0]]) + len(self.walks[b[0]])) + 4
        for _ in range(limit):
            na = self._advance(cur_a)
            nb = self._advance(cur_b)
            if na[0] == "dart" and nb[0] == "dart" and na[1] == nb[1]:
                cur_a, cur_b = na[2], nb[2]
                come_from = na[1]
                continue
            x = self.s.head(come_from)
            ra = self._scan_rank(x, come_from, na)
            rb = self._scan_rank(x, come_from, nb)
            if ra is None or rb is None or ra == rb:
                return None
            return -1 if ra < rb else 1
        return None

    def bundle(self, e):
        """Strands of edge e ordered from the face_of(2e) side across."""
        if not hasattr(self, "_bundle_cache"):
            self._bundle_cache = {}
        if e in self._bundle_cache:
            return self._bundle_cache[e]
        strands = self.per_edge.get(e, [])
        if len(strands) <= 1:
            self._bundle_cache[e] = list(strands)
            return self._bundle_cache[e]

        def compare(a, b):
            if a == b:
                return 0
            fwd = self._directional_verdict(a, b, 2 * e)
            bwd = self._directional_verdict(a, b, 2 * e + 1)
            eff_f = fwd
            eff_b = None if bwd is None else -bwd
            if eff_f is not None and eff_b is not None and eff_f != eff_b:
                raise SurfaceError("walks cross along a shared run")
            v = eff_f if eff_f is not None else eff_b
            if v is None:
                return -1 if a < b else 1  # identical corridors: nest by index
            return v

        out = sorted(strands, key=cmp_to_key(compare))
        self._bundle_cache[e] = out
        return out


def slice_system(surface: Surface, walks, kinds) -> SliceResult:
    """Cut ``surface`` along a non-crossing system of walks."""
    sys = _System(surface, walks, kinds)
    s = surface

    bundles = {e: sys.bundle(e) for e in sys.per_edge}
    strand_pos = {e: {sid: i for i, sid in enumerate(B)} for e, B in bundles.items()}

    # expanded circle per vertex: list of items
    #   (_COPY, e, j, dart)       edge-copy j of e seen via slot dart
    #   (_END, walk, step, side)  strand end; side 0 at tail(dart), 1 at head
    #   (_ANCHOR, walk, which)    arc end opening into a hole
    circles: list[list[tuple]] = []
    for v in range(s.n):
        items: list[tuple] = []
        zones: dict[int, list[tuple]] = {}  # corner dart -> anchor items
        for wi, (start, end) in sys.anchors.items():
            for which, (av, ax) in enumerate((start, end)):
                if av == v:
                    zones.setdefault(ax, []).append((_ANCHOR, wi, which))
        for d in s.rot[v]:
            e = d >> 1
            B = bundles.get(e, [])
            k = len(B)
            if d & 1 == 0:
                order = range(k)
                copy_order = range(k + 1)
            else:
                order = range(k - 1, -1, -1)
                copy_order = range(k, -1, -1)
            seq = []
            ends = []
            for idx in order:
                wi, st = B[idx]
                side = 0 if sys.walks[wi][st] == d else 1
                ends.append((_END, wi, st, side))
            for pos, cj in enumerate(copy_order):
                seq.append((_COPY, e, cj, d))
                if pos < len(ends):
                    seq.append(ends[pos])
            items.extend(seq)
            if d in zones:
                items.extend(_order_zone(sys, s, v, d, zones.pop(d)))
        if zones:
            raise SurfaceError("anchor corner lost during circle assembly")
        circles.append(items)

    # visit chords per vertex: pairs of item identities
    chords: list[list[tuple]] = [[] for _ in range(s.n)]
    for wi, w in enumerate(sys.walks):
        kind = sys.kinds[wi]
        for st in range(1, len(w)):
            v = s.tail(w[st])
            chords[v].append(((_END, wi, st - 1, 1), (_END, wi, st, 0)))
        if kind == "cycle":
            v = s.tail(w[0])
            chords[v].append(((_END, wi, len(w) - 1, 1), (_END, wi, 0, 0)))
        elif kind == "arc":
            v0, v1 = s.tail(w[0]), s.head(w[-1])
            chords[v0].append(((_ANCHOR, wi, 0), (_END, wi, 0, 0)))
            chords[v1].append(((_END, wi, len(w) - 1, 1), (_ANCHOR, wi, 1)))

    sectors, sector_of_item, flagged = _split_vertices(s, circles, chords)

    # number the new vertices (non-empty sectors only)
    new_vertex_id: dict[tuple[int, int], int] = {}
    vertex_origin: list[int] = []
    for v in range(s.n):
        for si in range(len(sectors[v])):
            if sectors[v][si]:
                new_vertex_id[(v, si)] = len(vertex_origin)
                vertex_origin.append(v)

    # number the new edges
    edge_ids: dict[tuple[int, int], int] = {}
    edge_origin: list[int] = []
    for e in range(s.m):
        for j in range(len(bundles.get(e, [])) + 1):
            edge_ids[(e, j)] = len(edge_origin)
            edge_origin.append(e)

    # endpoints come from the two slots of each copy
    endpoint: dict[tuple[int, int, int], int] = {}
    for v in range(s.n):
        for pos, item in enumerate(circles[v]):
            if item[0] == _COPY:
                _, e, j, d = item
                sec = sector_of_item[v][pos]
                endpoint[(e, j, d & 1)] = new_vertex_id[(v, sec)]

    edges = []
    for e in range(s.m):
        for j in range(len(bundles.get(e, [])) + 1):
            u = endpoint[(e, j, 0)]
            w2 = endpoint[(e, j, 1)]
            edges.append((u, w2, s.weight[e]))

    # rotations from the assembled sectors; track flagged (channel) corners
    rotations: list[list[int]] = [[] for _ in vertex_origin]
    corner_flags: set[tuple[int, int]] = set()
    for v in range(s.n):
        for si, (items, flags) in enumerate(zip(sectors[v], flagged[v])):
            if not items:
                continue
            nv = new_vertex_id[(v, si)]
            darts = []
            for it in items:
                _, e, j, d = it
                darts.append(2 * edge_ids[(e, j)] + (d & 1))
            rotations[nv] = darts
            for i, fl in enumerate(flags):
                if fl:
                    corner_flags.add((darts[i], darts[(i + 1) % len(darts)]))

    sliced = Surface(len(vertex_origin), edges, rotations,
                     weight_scale=s.weight_scale)

    # boundary: channel faces plus survivors of old marked faces
    marked = set()
    for fid, orbit in enumerate(sliced.faces):
        flag = False
        for d in orbit:
            nxt = sliced.face_next(d)
            if (rev(d), nxt) in corner_flags:
                flag = True
                break
            old = 2 * edge_origin[d >> 1] + (d & 1)
            if s.face_of[old] in s.boundary:
                flag = True
                break
        if flag:
            marked.add(fid)
    if marked:
        sliced = sliced.with_boundary(marked)

    return SliceResult(sliced, s, tuple(edge_origin), tuple(vertex_origin))


def _order_zone(sys, s, v, corner_dart, zone_items):
    """Order anchor ends sharing one hole corner so their chords nest."""
    if len(zone_items) == 1:
        return zone_items
    r = s.rot[v]
    k = len(r)
    base = sys._rotpos[v][corner_dart]

    def linpos(item):
        _, wi, which = item
        w = sys.walks[wi]
        emerge = w[0] if which == 0 else rev(w[-1])
        e = emerge >> 1
        slot_rank = (sys._rotpos[v][emerge] - base - 1) % k
        B = sys.bundle(e)
        if emerge == 2 * e:
            strand = (wi, 0) if which == 0 else (wi, len(w) - 1)
            inslot = B.index(strand)
        else:
            strand = (wi, 0) if which == 0 else (wi, len(w) - 1)
            inslot = len(B) - 1 - B.index(strand)
        return (slot_rank, inslot)

    return sorted(zone_items, key=lambda it: linpos(it), reverse=True)


def _split_vertices(s, circles, chords):
    """Sectors (vertex copies) from non-crossing chords on each circle.

    Returns per-vertex sector item lists (copies only, in rotation order),
    the sector index of every circle position, and per-corner channel flags.
    """
    all_sectors = []
    all_sector_of = []
    all_flags = []
    for v in range(s.n):
        items = circles[v]
        pos_of = {}
        for i, it in enumerate(items):
            if it[0] != _COPY:
                pos_of[it] = i
        vchords = []
        for a, b in chords[v]:
            try:
                vchords.append((pos_of[a], pos_of[b]))
            except KeyError:
                raise SurfaceError("walk visits a vertex its darts do not touch")
        _check_noncrossing(vchords, len(items))

        L = len(items)
        breaks = sorted({p for ch in vchords for p in ch})
        if not breaks:
            sector_items = [[it for it in items if it[0] == _COPY]]
            flags = [_flags_single(items)]
            sector_of = {i: 0 for i in range(L)}
            all_sectors.append(sector_items)
            all_sector_of.append([0] * L)
            all_flags.append(flags)
            continue

        nb = len(breaks)
        gap_items: list[list[int]] = []
        gap_of_pos = [-1] * L
        for gi in range(nb):
            lo = breaks[gi]
            hi = breaks[(gi + 1) % nb]
            run = []
            p = (lo + 1) % L
            while p != hi:
                run.append(p)
                gap_of_pos[p] = gi
                p = (p + 1) % L
            gap_items.append(run)
        # gap gi runs from after breaks[gi] to before breaks[(gi+1) % nb]
        gap_after = {breaks[gi]: gi for gi in range(nb)}
        gap_before = {breaks[(gi + 1) % nb]: gi for gi in range(nb)}

        next_gap = {}
        for a, b in vchords:
            next_gap[gap_before[a]] = (gap_after[b], True)
            next_gap[gap_before[b]] = (gap_after[a], True)

        seen = [False] * nb
        sector_items = []
        sector_flags = []
        sector_of_gap = [-1] * nb
        for g0 in range(nb):
            if seen[g0]:
                continue
            sid = len(sector_items)
            run_items = []
            run_flags = []  # run_flags[i] flags corner (item i, item i+1 cyclic)
            pending = False
            prefix_pending = False
            g = g0
            while True:
                seen[g] = True
                sector_of_gap[g] = sid
                for p in gap_items[g]:
                    it = items[p]
                    if it[0] == _COPY:
                        if run_items:
                            run_flags.append(pending)
                        else:
                            prefix_pending = pending
                        run_items.append(it)
                        pending = False
                    else:
                        pending = True  # inert strand end: slit tip
                g, jumped = next_gap[g]
                if jumped:
                    pending = True
                if g == g0:
                    break
            if run_items:
                run_flags.append(pending or prefix_pending)
            sector_flags.append(run_flags)
            sector_items.append(run_items)

        sector_of_pos = []
        for p in range(L):
            if gap_of_pos[p] >= 0:
                sector_of_pos.append(sector_of_gap[gap_of_pos[p]])
            else:
                sector_of_pos.append(-1)  # chord end, belongs to no sector
        all_sectors.append(sector_items)
        all_sector_of.append(sector_of_pos)
        all_flags.append(sector_flags)
    return all_sectors, all_sector_of, all_flags


def _flags_single(items):
    """Corner flags for an unsplit vertex: slit tips flag their corner.

    flags[i] marks the corner between copy i and copy i+1 (cyclic).
    """
    flags = []
    pending = False
    prefix_pending = False
    count = 0
    for it in items:
        if it[0] == _COPY:
            if count:
                flags.append(pending)
            else:
                prefix_pending = pending
            pending = False
            count += 1
        else:
            pending = True
    if count:
        flags.append(pending or prefix_pending)
    return flags


def _check_noncrossing(vchords, L):
    for i in range(len(vchords)):
        a1, b1 = vchords[i]
        for j in range(i + 1, len(vchords)):
            a2, b2 = vchords[j]
            if _interleaved(a1, b1, a2, b2, L):
                raise SurfaceError("walks cross at a vertex")


def _interleaved(a1, b1, a2, b2, L):
    def inside(x, lo, hi):
        return ((x - lo) % L) < ((hi - lo) % L) and x != lo
    c = int(inside(a2, a1, b1)) + int(inside(b2, a1, b1))
    return c == 1


# -- public operation -----------------------------------------------------------


def slice_along(surface: Surface, walks) -> SliceResult:
    """Slice along a set of vertex-simple, pairwise non-crossing walks.

    Each walk is a dart sequence: a closed sequence is sliced as a simple
    cycle, an open one as a boundary-to-boundary arc (its endpoints must lie
    on marked faces).  Weights are inherited; the projection in the result
    maps copies back to their originals.
    """
    seqs = []
    kinds = []
    for w in walks:
        darts = tuple(getattr(w, "darts", w))
        if not darts:
            raise SurfaceError("empty walk")
        closed = surface.head(darts[-1]) == surface.tail(darts[0])
        tails = [surface.tail(d) for d in darts]
        if len({d >> 1 for d in darts}) != len(darts):
            raise SurfaceError("walk is not simple")
        if closed:
            if len(set(tails)) != len(tails):
                raise SurfaceError("walk is not simple")
            kinds.append("cycle")
        else:
            endv = surface.head(darts[-1])
            if len(set(tails)) != len(tails) or (endv in tails[1:]):
                raise SurfaceError("walk is not simple")
            kinds.append("arc")
        seqs.append(darts)
    return slice_system(surface, seqs, kinds)
