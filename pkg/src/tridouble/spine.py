"""A special polyhedron with fundamental group G, from the trivial presentation.

Model
-----
The surface is a sphere with one handle per non-identity element.  Each
handle is a tube joining two holes ("feet") ``h+`` and ``h-`` of the
central sphere, and carries a core circle bounding a disc.  Every relator
is a closed curve: a letter ``h`` runs through the tube from ``h+`` to
``h-`` (``h^-1`` the other way), and consecutive letters are joined by a
straight chord of a round disc ``D`` in the central sphere whose boundary
circle contains all the feet.  The rest of the central sphere carries no
curves.

Inside a tube the strands are parallel, at positions ``0..s-1`` read
counter-clockwise along ``h+`` and clockwise along ``h-``; the core meets
strand ``j`` at the core vertex ``(h, j)`` and closes up behind the strands
(from ``s-1`` back to ``0``).  The counter-clockwise rotation at a core
vertex is ``[to j+1, toward h+, to j-1, toward h-]``; at a chord crossing
it comes from exact rational geometry.  Regions are the faces of this
embedded graph on the surface, the core discs and the relator discs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import VerificationError
from .groups import FiniteGroupTable, trivial_presentation
from .polyhedron import SpecialPolyhedron

PLUS, MINUS = 1, -1
# germ slots at a core vertex
TO_NEXT, TO_PLUS, TO_PREV, TO_MINUS = 0, 1, 2, 3


@dataclass(frozen=True)
class Layout:
    """Cyclic order of the feet on the boundary of ``D`` and, per handle,
    the strand position of every passage."""

    feet: tuple[tuple[int, int], ...]                 # (handle, side)
    positions: dict                                  # (relator, letter) -> position


@dataclass
class SpineData:
    polyhedron: SpecialPolyhedron
    core_vertex: dict            # vertex id -> handle, for core vertices
    layout: Layout
    crossings: int               # chord-chord crossings
    self_crossings: int
    handle_passages: dict        # handle -> number of strands


def _passages(relators):
    by_handle: dict[int, list] = {}
    for r, word in enumerate(relators):
        for k, (h, _) in enumerate(word):
            by_handle.setdefault(h, []).append((r, k))
    return by_handle


def _chords(relators, positions):
    """Chord endpoints ``((h, side, j), (h, side, j), relator)``: from the
    exit of letter k to the entry of letter k+1."""
    out = []
    for r, word in enumerate(relators):
        L = len(word)
        for k in range(L):
            h1, e1 = word[k]
            h2, e2 = word[(k + 1) % L]
            start = (h1, MINUS if e1 > 0 else PLUS, positions[(r, k)])
            end = (h2, PLUS if e2 > 0 else MINUS, positions[(r, (k + 1) % L)])
            out.append((start, end, r))
    return out


def _circle_coords(layout: Layout, sizes: dict) -> dict:
    coord = {}
    c = 0
    for h, side in layout.feet:
        s = sizes[h]
        for local in range(s):
            j = local if side == PLUS else s - 1 - local
            coord[(h, side, j)] = c
            c += 1
    return coord


def _count_crossings(chords, coord):
    segs = []
    for a, b, r in chords:
        x, y = coord[a], coord[b]
        segs.append((min(x, y), max(x, y), r))
    total = same = 0
    for i in range(len(segs)):
        a, b, r = segs[i]
        for j in range(i + 1, len(segs)):
            c, d, r2 = segs[j]
            if (a < c < b) != (a < d < b):
                total += 1
                same += r == r2
    return total, same


def optimise_layout(G: FiniteGroupTable, seed: int = 0, restarts: int = 8) -> Layout:
    """Deterministic local search for a layout with few crossings (self
    crossings of a relator count double)."""
    pres = trivial_presentation(G)
    rels = pres.relators
    passages = _passages(rels)
    sizes = {h: len(v) for h, v in passages.items()}
    rng = random.Random(seed)
    handles = sorted(passages)

    def cost(layout):
        tot, same = _count_crossings(_chords(rels, layout.positions), _circle_coords(layout, sizes))
        return tot + same

    best = None
    for attempt in range(restarts):
        feet = [(h, s) for h in handles for s in (PLUS, MINUS)]
        pos = {}
        for h in handles:
            order = list(range(sizes[h]))
            if attempt:
                rng.shuffle(order)
                pass
            for p, j in zip(passages[h], order):
                pos[p] = j
        if attempt:
            rng.shuffle(feet)
        cur = Layout(tuple(feet), pos)
        cur_cost = cost(cur)
        improved = True
        while improved:
            improved = False
            moves = []
            for i in range(len(feet)):
                for j in range(i + 1, len(feet)):
                    moves.append(("feet", i, j))
            for h in handles:
                ps = passages[h]
                for i in range(len(ps)):
                    for j in range(i + 1, len(ps)):
                        moves.append(("pos", ps[i], ps[j]))
            rng.shuffle(moves)
            for kind, a, b in moves:
                if kind == "feet":
                    f = list(cur.feet)
                    f[a], f[b] = f[b], f[a]
                    cand = Layout(tuple(f), cur.positions)
                else:
                    p = dict(cur.positions)
                    p[a], p[b] = p[b], p[a]
                    cand = Layout(cur.feet, p)
                c = cost(cand)
                if c < cur_cost:
                    cur, cur_cost = cand, c
                    improved = True
        if best is None or cur_cost < best[0]:
            best = (cur_cost, cur)
    return best[1]


# ---------------------------------------------------------------------------
# exact geometry


def _point(t: Fraction):
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


def _intersection(p1, p2, p3, p4):
    """Parameters ``(s, u)`` of the crossing of segments p1p2 and p3p4."""
    dx1, dy1 = p2[0] - p1[0], p2[1] - p1[1]
    dx2, dy2 = p4[0] - p3[0], p4[1] - p3[1]
    den = dx1 * dy2 - dy1 * dx2
    rx, ry = p3[0] - p1[0], p3[1] - p1[1]
    s = (rx * dy2 - ry * dx2) / den
    u = (rx * dy1 - ry * dx1) / den
    return s, u, den


def build_spine(G: FiniteGroupTable, layout: Layout | None = None) -> SpineData:
    m = G.order
    if m < 2:
        raise ValueError("the chord model needs a non-trivial group")
    pres = trivial_presentation(G)
    rels = pres.relators
    passages = _passages(rels)
    sizes = {h: len(v) for h, v in passages.items()}
    if layout is None:
        layout = optimise_layout(G)
    chords = _chords(rels, layout.positions)
    coord = _circle_coords(layout, sizes)
    N = len(coord)

    # vertices
    vid: dict = {}
    core_vertex = {}
    for h in sorted(sizes):
        for j in range(sizes[h]):
            vid[("core", h, j)] = len(vid)
            core_vertex[vid[("core", h, j)]] = h

    for attempt in range(20):
        ts = [Fraction(2 * k - N, N) * 3 + Fraction(k * k + attempt, 9973 * N) for k in range(N)]
        pts = {key: _point(ts[c]) for key, c in coord.items()}
        cross = []  # (chord i, chord j, s_i, s_j, den)
        points = set()
        degenerate = False
        for i in range(len(chords)):
            a, b, _ = chords[i]
            x, y = sorted((coord[a], coord[b]))
            for j in range(i + 1, len(chords)):
                c, d, _ = chords[j]
                if (x < coord[c] < y) != (x < coord[d] < y):
                    s, u, den = _intersection(pts[a], pts[b], pts[c], pts[d])
                    P = (pts[a][0] + s * (pts[b][0] - pts[a][0]), pts[a][1] + s * (pts[b][1] - pts[a][1]))
                    if P in points:
                        degenerate = True
                    points.add(P)
                    cross.append((i, j, s, u, den))
        if not degenerate:
            break
    else:  # pragma: no cover - the perturbation always separates points
        raise VerificationError("could not place chords in general position")

    # per chord: list of (param, crossing vertex id)
    along: list[list] = [[] for _ in chords]
    slot_of: dict = {}  # (vertex, chord, towards_end: bool) -> slot
    for i, j, s, u, den in cross:
        v = len(vid)
        vid[("x", i, j)] = v
        along[i].append((s, v))
        along[j].append((u, v))
        # ccw order from v: towards end of i, then end/start of j ...
        if den > 0:
            order = [(i, True), (j, True), (i, False), (j, False)]
        else:
            order = [(i, True), (j, False), (i, False), (j, True)]
        for slot, (c, fwd) in enumerate(order):
            slot_of[(v, c, fwd)] = slot

    edges = []
    chord_edges = []
    for c, (a, b, _) in enumerate(chords):
        nodes = [(vid[("core", a[0], a[2])], TO_MINUS if a[1] == MINUS else TO_PLUS)]
        for _, v in sorted(along[c]):
            nodes.append((v, None))
        nodes.append((vid[("core", b[0], b[2])], TO_MINUS if b[1] == MINUS else TO_PLUS))
        ids = []
        for k in range(len(nodes) - 1):
            v0, s0 = nodes[k]
            v1, s1 = nodes[k + 1]
            if s0 is None:
                s0 = slot_of[(v0, c, True)]
            if s1 is None:
                s1 = slot_of[(v1, c, False)]
            ids.append(len(edges))
            edges.append((v0, s0, v1, s1))
        chord_edges.append(ids)
    core_edges = {}
    for h in sorted(sizes):
        s = sizes[h]
        core_edges[h] = []
        for j in range(s):
            core_edges[h].append(len(edges))
            edges.append((vid[("core", h, j)], TO_NEXT, vid[("core", h, (j + 1) % s)], TO_PREV))

    V = len(vid)
    # darts: 2k is edge k forwards, 2k+1 backwards
    leave = [[None] * 4 for _ in range(V)]
    for k, (v0, s0, v1, s1) in enumerate(edges):
        for d, (v, s) in ((2 * k, (v0, s0)), (2 * k + 1, (v1, s1))):
            if leave[v][s] is not None:
                raise VerificationError(f"slot {s} of vertex {v} used twice")
            leave[v][s] = d
    for v in range(V):
        if None in leave[v]:
            raise VerificationError(f"vertex {v} is not 4-valent")

    def head(d):
        v0, s0, v1, s1 = edges[d >> 1]
        return (v1, s1) if d % 2 == 0 else (v0, s0)

    faces = []
    seen = bytearray(2 * len(edges))
    for d0 in range(2 * len(edges)):
        if seen[d0]:
            continue
        word = []
        d = d0
        while not seen[d]:
            seen[d] = 1
            word.append((d >> 1, 1 if d % 2 == 0 else -1))
            w, s = head(d)
            d = leave[w][(s + 1) % 4]
        faces.append(tuple(word))
    chi = V - len(edges) + len(faces)
    if chi != 4 - 2 * m:
        raise VerificationError(f"surface faces are not discs: V-E+F = {chi}, expected {4 - 2 * m}")

    regions = list(faces)
    for h in sorted(sizes):
        regions.append(tuple((k, 1) for k in core_edges[h]))
    for r, word in enumerate(rels):
        w = []
        for c, (_, _, rr) in enumerate(chords):
            if rr == r:
                w += [(k, 1) for k in chord_edges[c]]
        regions.append(tuple(w))
    P = SpecialPolyhedron(V, tuple(edges), tuple(regions))
    total, same = _count_crossings(chords, coord)
    return SpineData(P, core_vertex, layout, total, same, sizes)
