"""Triangulations as face-pairing data.

A triangulation is ``n`` tetrahedra together with a complete, involutive
system of face pairings.  Multiple and self adjacencies are allowed and the
gluing need not be a manifold.

Conventions
-----------
* Vertices of a tetrahedron are labelled 0..3 and face ``f`` is the face
  opposite vertex ``f``.
* A face-end is a pair ``(t, f)``.  The gluing of ``(t, f)`` is a triple
  ``(t2, f2, p)`` where ``p`` is a permutation of the vertex labels (a tuple
  of 4 ints, ``p[k]`` the image of vertex ``k``) with ``p[f] == f2``.
* A face *class* is an unordered pair of glued face-ends; its key is the
  lexicographically smaller face-end, and its reference direction points
  from the key to the other end.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    DisconnectedError,
    IncompleteGluingError,
    NonInvolutiveGluingError,
    ParseError,
    SelfGluedFaceError,
)

Perm = tuple[int, int, int, int]

EDGES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {e: i for i, e in enumerate(EDGES)}
EDGE_INDEX.update({(b, a): i for (a, b), i in list(EDGE_INDEX.items())})
PERMS: tuple[Perm, ...] = tuple(itertools.permutations(range(4)))  # type: ignore[assignment]
IDENTITY: Perm = (0, 1, 2, 3)


def perm_inverse(p: Sequence[int]) -> Perm:
    inv = [0, 0, 0, 0]
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)  # type: ignore[return-value]


def perm_compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """Return ``p o q`` (apply ``q`` first)."""
    return (p[q[0]], p[q[1]], p[q[2]], p[q[3]])


def perm_sign(p: Sequence[int]) -> int:
    sign = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                sign = -sign
    return sign


def other_two(a: int, b: int) -> tuple[int, int]:
    """The two labels in 0..3 distinct from ``a`` and ``b``, ascending."""
    c, d = (x for x in range(4) if x != a and x != b)
    return c, d


@dataclass(frozen=True)
class Triangulation:
    """``n`` tetrahedra and the gluing table.

    ``gluings[4 * t + f]`` is ``(t2, f2, p)``.  Instances are validated on
    construction and immutable afterwards.
    """

    n: int
    gluings: tuple[tuple[int, int, Perm], ...]
    _face_keys: tuple[int, ...] = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        _validate(self.n, self.gluings)
        # face class index for every face-end, classes ordered by key
        keys = [-1] * (4 * self.n)
        k = 0
        for i in range(4 * self.n):
            t2, f2, _ = self.gluings[i]
            j = 4 * t2 + f2
            if j > i:
                keys[i] = keys[j] = k
                k += 1
        object.__setattr__(self, "_face_keys", tuple(keys))

    # -- construction -------------------------------------------------
    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int, int, int, Sequence[int]]]) -> "Triangulation":
        """Build from pairings ``(t, f, t2, f2, p)``; each pairing given once."""
        table: list = [None] * (4 * n)
        for t, f, t2, f2, p in pairs:
            p = tuple(p)
            _check_face_end(n, t, f)
            _check_face_end(n, t2, f2)
            if p not in PERMS or p[f] != f2:
                raise ParseError(f"bad permutation {p} for gluing ({t},{f})->({t2},{f2})")
            for i, val in ((4 * t + f, (t2, f2, p)), (4 * t2 + f2, (t, f, perm_inverse(p)))):
                if table[i] is not None and table[i] != val:
                    raise NonInvolutiveGluingError(
                        f"face-end ({i // 4},{i % 4}) glued inconsistently: {table[i]} vs {val}")
                table[i] = val
        missing = [i for i, g in enumerate(table) if g is None]
        if missing:
            i = missing[0]
            raise IncompleteGluingError(f"face-end ({i // 4},{i % 4}) is not glued")
        return cls(n, tuple(table))

    # -- accessors ----------------------------------------------------
    def glued(self, t: int, f: int) -> tuple[int, int, Perm]:
        return self.gluings[4 * t + f]

    def face_class(self, t: int, f: int) -> int:
        return self._face_keys[4 * t + f]

    @property
    def num_face_classes(self) -> int:
        return 2 * self.n

    def face_pairs(self) -> list[tuple[int, int, int, int, Perm]]:
        """Each pairing once, keyed by its smaller face-end, ascending."""
        out = []
        for i, (t2, f2, p) in enumerate(self.gluings):
            if 4 * t2 + f2 > i:
                out.append((i // 4, i % 4, t2, f2, p))
        return out

    def relabel(self, tet_perm: Sequence[int], vertex_perms: Sequence[Sequence[int]]) -> "Triangulation":
        """Tetrahedron ``t`` becomes ``tet_perm[t]`` and its vertex ``v`` becomes
        ``vertex_perms[t][v]``."""
        n = self.n
        table: list = [None] * (4 * n)
        for i, (t2, f2, p) in enumerate(self.gluings):
            t, f = divmod(i, 4)
            s, s2 = vertex_perms[t], vertex_perms[t2]
            q = perm_compose(s2, perm_compose(p, perm_inverse(s)))
            table[4 * tet_perm[t] + s[f]] = (tet_perm[t2], s2[f2], q)
        return Triangulation(n, tuple(table))

    def __str__(self) -> str:
        return serialize(self)


def _check_face_end(n: int, t: int, f: int) -> None:
    if not (0 <= t < n) or not (0 <= f < 4):
        raise ParseError(f"face-end ({t},{f}) out of range for n={n}")


def _validate(n: int, gluings: Sequence) -> None:
    if n < 1:
        raise ParseError("a triangulation needs at least one tetrahedron")
    if len(gluings) != 4 * n:
        raise IncompleteGluingError(f"expected {4 * n} face-ends, got {len(gluings)}")
    for i, g in enumerate(gluings):
        if g is None:
            raise IncompleteGluingError(f"face-end ({i // 4},{i % 4}) is not glued")
        t2, f2, p = g
        if not (0 <= t2 < n and 0 <= f2 < 4) or p[i % 4] != f2 or sorted(p) != [0, 1, 2, 3]:
            raise ParseError(f"malformed gluing at face-end ({i // 4},{i % 4}): {g}")
        j = 4 * t2 + f2
        if j == i:
            raise SelfGluedFaceError(f"face-end ({i // 4},{i % 4}) is glued to itself")
        back = gluings[j]
        if back is None or back[0] != i // 4 or back[1] != i % 4 or tuple(back[2]) != perm_inverse(p):
            raise NonInvolutiveGluingError(f"gluing of face-end ({i // 4},{i % 4}) is not involutive")
    seen = bytearray(n)
    seen[0] = 1
    stack = [0]
    while stack:
        t = stack.pop()
        for f in range(4):
            t2 = gluings[4 * t + f][0]
            if not seen[t2]:
                seen[t2] = 1
                stack.append(t2)
    if not all(seen):
        raise DisconnectedError(f"gluing graph is disconnected (tetrahedron {seen.index(0)} unreachable from 0)")


# ---------------------------------------------------------------------------
# TRI text format

_PAIR_RE = re.compile(r"^\s*(\S+)\s+(\S+)\s*:\s*(\S+)\s+(\S+)\s*:\s*(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s*$")


def parse(text: str) -> Triangulation:
    """Parse the TRI format.

    Each pair line specifies the gluing of its first face-end; the reverse
    gluing is implied.  Listing both directions is allowed provided they
    agree.  ``;`` may stand for a line break (the one-line form printed by
    the census).
    """
    n = None
    table: list = []
    origin: dict[int, int] = {}
    for lineno, raw in enumerate(text.replace(";", "\n").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "tri":
                raise ParseError("expected header 'tri <n>'", lineno, 1)
            n = _int_field(parts[1], lineno, raw)
            if n < 1:
                raise ParseError("n must be positive", lineno, raw.index(parts[1]) + 1)
            table = [None] * (4 * n)
            continue
        m = _PAIR_RE.match(raw)
        if not m:
            raise ParseError("expected '<t> <f> : <t2> <f2> : <p0> <p1> <p2> <p3>'", lineno, 1)
        vals = [_int_field(m.group(k), lineno, raw, m.start(k)) for k in range(1, 9)]
        t, f, t2, f2 = vals[:4]
        p = tuple(vals[4:])
        for k, (tt, ff) in ((1, (t, f)), (3, (t2, f2))):
            if not (0 <= tt < n and 0 <= ff < 4):
                raise ParseError(f"face-end ({tt},{ff}) out of range", lineno, m.start(k) + 1)
        if sorted(p) != [0, 1, 2, 3]:
            raise ParseError(f"{p} is not a permutation of 0..3", lineno, m.start(5) + 1)
        if p[f] != f2:
            raise ParseError(f"permutation maps face {f} to {p[f]}, not {f2}", lineno, m.start(5) + 1)
        i, j = 4 * t + f, 4 * t2 + f2
        if i == j:
            raise SelfGluedFaceError(f"line {lineno}: face-end ({t},{f}) glued to itself")
        for a, val in ((i, (t2, f2, p)), (j, (t, f, perm_inverse(p)))):
            if table[a] is not None and table[a] != val:
                raise NonInvolutiveGluingError(
                    f"line {lineno}: face-end ({a // 4},{a % 4}) already glued to "
                    f"({table[a][0]},{table[a][1]}) on line {origin[a]}")
            if table[a] is None:
                table[a] = val
                origin[a] = lineno
    if n is None:
        raise ParseError("empty input: missing 'tri <n>' header", 1, 1)
    for a, g in enumerate(table):
        if g is None:
            raise IncompleteGluingError(f"face-end ({a // 4},{a % 4}) is not glued")
    return Triangulation(n, tuple(table))


def _int_field(tok: str, lineno: int, raw: str, pos: int | None = None) -> int:
    if not re.fullmatch(r"[+-]?\d+", tok):
        col = (raw.find(tok) if pos is None else pos) + 1
        raise ParseError(f"expected an integer, got {tok!r}", lineno, col)
    return int(tok)


def serialize(T: Triangulation) -> str:
    lines = [f"tri {T.n}"]
    for t, f, t2, f2, p in T.face_pairs():
        lines.append(f"{t} {f} : {t2} {f2} : {p[0]} {p[1]} {p[2]} {p[3]}")
    return "\n".join(lines) + "\n"


def one_line(text: str) -> str:
    """Serialized form on a single line, ``;``-separated."""
    return "; ".join(text.strip().splitlines())


# ---------------------------------------------------------------------------
# edge classes


@dataclass(frozen=True)
class EdgeClass:
    """An orbit of tetrahedron edges under the gluings.

    ``wedges`` lists the ``valence`` distinct wedges ``(t, (a, b))`` in walk
    order.  ``boundary_word`` is the attaching word of the dual region: one
    ``(face class, sign)`` letter per wedge.  ``walk_length`` is the length of
    the directed walk, ``valence`` or ``2 * valence``.
    """

    index: int
    wedges: tuple[tuple[int, tuple[int, int]], ...]
    orientable: bool
    boundary_word: tuple[tuple[int, int], ...]
    walk_length: int

    @property
    def valence(self) -> int:
        return len(self.wedges)


def edge_classes(T: Triangulation, seed: int | None = None) -> list[EdgeClass]:
    """Partition the ``6n`` tetrahedron edges into edge classes.

    With ``seed`` set, every tie-break is randomized: class order, seed
    wedge and direction of each walk, the first face crossed and the
    reference direction of each face class.  Invariants computed from the
    result must not depend on it.
    """
    n = T.n
    g = T.gluings
    keys = T._face_keys
    rng = random.Random(seed) if seed is not None else None
    flip = [1] * (2 * n)
    if rng is not None:
        flip = [rng.choice((1, -1)) for _ in range(2 * n)]

    seen = bytearray(6 * n)
    starts = []
    if rng is None:
        order = range(6 * n)
    else:
        # pick a random member of every orbit as its seed wedge
        comp = _edge_orbits(T)
        groups: dict[int, list[int]] = {}
        for w, c in enumerate(comp):
            groups.setdefault(c, []).append(w)
        order = [rng.choice(ws) for ws in groups.values()]
        rng.shuffle(order)
    for w in order:
        if seen[w]:
            continue
        t, e = divmod(w, 6)
        a, b = EDGES[e]
        c, d = other_two(a, b)
        first = c
        if rng is not None:
            if rng.random() < 0.5:
                a, b = b, a
            first = rng.choice((c, d))
        starts.append((t, a, b, first))
        # mark the orbit
        tt, aa, bb, x = t, a, b, first
        while True:
            seen[6 * tt + EDGE_INDEX[(aa, bb)]] = 1
            t2, f2, p = g[4 * tt + x]
            aa, bb = p[aa], p[bb]
            tt = t2
            if (tt, aa, bb) == (t, a, b) or (tt, bb, aa) == (t, a, b):
                break
            x = 6 - aa - bb - f2

    out = []
    for idx, (t, a, b, first) in enumerate(starts):
        wedges = []
        word = []
        tt, aa, bb, x = t, a, b, first
        steps = 0
        while True:
            steps += 1
            i = 4 * tt + x
            t2, f2, p = g[i]
            fc = keys[i]
            sign = 1 if 4 * t2 + f2 > i else -1
            wedges.append((tt, (aa, bb) if aa < bb else (bb, aa)))
            word.append((fc, sign * flip[fc]))
            aa, bb = p[aa], p[bb]
            tt = t2
            if tt == t and aa == a and bb == b:
                break
            x = 6 - aa - bb - f2
        q = len(set(wedges))
        out.append(EdgeClass(idx, tuple(wedges[:q]), steps == q, tuple(word[:q]), steps))
    return out


def _edge_orbits(T: Triangulation) -> list[int]:
    """Union-find labels of the 6n wedges (independent brute-force orbit)."""
    parent = list(range(6 * T.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, (t2, f2, p) in enumerate(T.gluings):
        t, f = divmod(i, 4)
        for a, b in EDGES:
            if f in (a, b):
                continue
            u = find(6 * t + EDGE_INDEX[(a, b)])
            v = find(6 * t2 + EDGE_INDEX[(p[a], p[b])])
            if u != v:
                parent[u] = v
    return [find(x) for x in range(6 * T.n)]


def is_manifold(T: Triangulation) -> tuple[bool, list[int]]:
    """``(ok, bad)``: ``ok`` iff every edge class is orientable (no Moebius
    strip around an edge); ``bad`` lists the offending class indices."""
    bad = [e.index for e in edge_classes(T) if not e.orientable]
    return not bad, bad


# ---------------------------------------------------------------------------
# vertex links


@dataclass(frozen=True)
class VertexLink:
    corners: tuple[tuple[int, int], ...]
    num_edges: int
    num_vertices: int
    orientable: bool

    @property
    def num_triangles(self) -> int:
        return len(self.corners)

    @property
    def euler_characteristic(self) -> int:
        return self.num_triangles - self.num_edges + self.num_vertices

    @property
    def genus(self) -> int:
        """Genus if orientable, otherwise the cross-cap number."""
        chi = self.euler_characteristic
        return (2 - chi) // 2 if self.orientable else 2 - chi


def vertex_links(T: Triangulation) -> list[VertexLink]:
    n = T.n
    g = T.gluings
    parent = list(range(4 * n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # link vertices are edge germs (t, v, w): the end v of edge vw in tet t
    germ_parent: dict = {}

    def gfind(x):
        while germ_parent.setdefault(x, x) != x:
            germ_parent[x] = germ_parent[germ_parent[x]]
            x = germ_parent[x]
        return x

    # orientation of corner triangles: relative sign propagated along gluings
    adj: list[list[tuple[int, int]]] = [[] for _ in range(4 * n)]
    for i, (t2, f2, p) in enumerate(g):
        t, f = divmod(i, 4)
        par = -1 if perm_sign(p) > 0 else 1  # odd gluings preserve orientation
        for v in range(4):
            if v == f:
                continue
            a, b = 4 * t + v, 4 * t2 + p[v]
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
            adj[a].append((b, par))
            for w in range(4):
                if w != v and w != f:
                    u1, u2 = gfind((t, v, w)), gfind((t2, p[v], p[w]))
                    if u1 != u2:
                        germ_parent[u1] = u2
    classes: dict[int, list[int]] = {}
    for c in range(4 * n):
        classes.setdefault(find(c), []).append(c)
    germ_count: dict[int, set] = {}
    for t in range(n):
        for v in range(4):
            for w in range(4):
                if w != v:
                    germ_count.setdefault(find(4 * t + v), set()).add(gfind((t, v, w)))
    links = []
    for root, corners in sorted(classes.items(), key=lambda kv: kv[1][0]):
        sign = {corners[0]: 1}
        stack = [corners[0]]
        orientable = True
        while stack:
            c = stack.pop()
            for d, par in adj[c]:
                s = sign[c] * par
                if d not in sign:
                    sign[d] = s
                    stack.append(d)
                elif sign[d] != s:
                    orientable = False
        links.append(VertexLink(
            corners=tuple(divmod(c, 4) for c in corners),
            num_edges=3 * len(corners) // 2,
            num_vertices=len(germ_count[root]),
            orientable=orientable,
        ))
    return links


# ---------------------------------------------------------------------------
# random gluings (testing / experiments)


def random_triangulation(n: int, rng: random.Random) -> Triangulation:
    """A random connected gluing of ``n`` tetrahedra."""
    ends = [(t, f) for t in range(n) for f in range(4)]
    free = set(ends)
    pairs = []
    order = list(range(n))
    rng.shuffle(order)
    # random spanning tree first, so the result is connected
    for k in range(1, n):
        t_new = order[k]
        cand = [e for e in free if e[0] in order[:k]]
        a = rng.choice(cand)
        b = (t_new, rng.randrange(4))
        free.discard(a)
        free.discard(b)
        pairs.append((a, b))
    rest = sorted(free)
    rng.shuffle(rest)
    for k in range(0, len(rest), 2):
        pairs.append((rest[k], rest[k + 1]))
    out = []
    for (t, f), (t2, f2) in pairs:
        p = rng.choice([q for q in PERMS if q[f] == f2])
        out.append((t, f, t2, f2, p))
    return Triangulation.from_pairs(n, out)


def fig1_triangulation() -> Triangulation:
    """Two tetrahedra glued along the identity of their boundary (S^3)."""
    return Triangulation.from_pairs(2, [(0, f, 1, f, IDENTITY) for f in range(4)])
