"""Special polyhedra and the duality with triangulations.

A special polyhedron is stored through its singular graph and the attaching
words of its regions.  Every graph edge records, at each end, the *germ
slot* (0..3) it occupies at its endpoint, so that the four-Y local model at
a vertex can be read off from the region words: a region passing through a
vertex enters along one germ and leaves along another, occupying the corner
spanned by those two germs.

For the dual of a triangulation the vertices are the tetrahedra, the germ
slot of a face class at a tetrahedron is the face index, and the corner
``{g, x}`` at tetrahedron ``t`` is crossed by the region dual to the edge of
``t`` with endpoints the two labels outside ``{g, x}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import NotDualizableError
from .triangulation import PERMS, Triangulation, edge_classes

Letter = tuple[int, int]


@dataclass(frozen=True)
class SpecialPolyhedron:
    """Singular graph plus region attaching words.

    ``edges[k] = (v0, g0, v1, g1)``: edge ``k`` runs from germ ``g0`` of
    vertex ``v0`` to germ ``g1`` of ``v1``.  A letter ``(k, +1)`` traverses it
    from the first end to the second.  Regions listed in ``boundary_loops``
    are open (the region is removed, its attaching circle kept).
    """

    num_vertices: int
    edges: tuple[tuple[int, int, int, int], ...]
    regions: tuple[tuple[Letter, ...], ...]
    boundary_loops: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        for k, (v0, g0, v1, g1) in enumerate(self.edges):
            if not (0 <= v0 < self.num_vertices and 0 <= v1 < self.num_vertices):
                raise ValueError(f"edge {k} has an endpoint out of range")
        for r, word in enumerate(self.regions):
            for k, s in word:
                if not (0 <= k < len(self.edges)) or s not in (1, -1):
                    raise ValueError(f"region {r} has a bad letter {(k, s)}")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_regions(self) -> int:
        return len(self.regions)

    @property
    def euler_characteristic(self) -> int:
        closed = self.num_regions - len(self.boundary_loops)
        return self.num_vertices - self.num_edges + closed

    def degree(self, v: int) -> int:
        return sum((e[0] == v) + (e[2] == v) for e in self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.num_vertices
        for v0, _, v1, _ in self.edges:
            deg[v0] += 1
            deg[v1] += 1
        return deg

    def is_bad(self, v: int) -> bool:
        """A vertex is bad when some edge has both ends at it."""
        return any(e[0] == v and e[2] == v for e in self.edges)

    def bad_vertices(self) -> list[int]:
        return sorted({e[0] for e in self.edges if e[0] == e[2]})

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return True
        adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for v0, _, v1, _ in self.edges:
            adj[v0].append(v1)
            adj[v1].append(v0)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.num_vertices

    def p0_view(self) -> "SpecialPolyhedron":
        """Regular neighbourhood of the singular set: every region opened up."""
        return SpecialPolyhedron(self.num_vertices, self.edges, self.regions,
                                 frozenset(range(self.num_regions)))

    def corners(self):
        """Yield ``(region, position, vertex, germ_in, germ_out)`` for every
        passage of a region through a vertex, ``position`` indexing the
        outgoing letter."""
        E = self.edges
        for r, word in enumerate(self.regions):
            L = len(word)
            for i in range(L):
                k_in, s_in = word[i - 1]
                k_out, s_out = word[i]
                v0, g0, v1, g1 = E[k_in]
                v_in, g_in = (v1, g1) if s_in > 0 else (v0, g0)
                w0, h0, w1, h1 = E[k_out]
                v_out, g_out = (w0, h0) if s_out > 0 else (w1, h1)
                if v_in != v_out:
                    raise NotDualizableError(f"region {r} is not a closed path at letter {i}", vertex=v_out)
                yield r, i, v_out, g_in, g_out


def dual_polyhedron(T: Triangulation) -> SpecialPolyhedron:
    edges = tuple((t, f, t2, f2) for t, f, t2, f2, _ in T.face_pairs())
    regions = tuple(e.boundary_word for e in edge_classes(T))
    return SpecialPolyhedron(T.n, edges, regions)


def dual_triangulation(P: SpecialPolyhedron) -> Triangulation:
    """Rebuild the triangulation whose dual is ``P``.

    Each passage of a region through germs ``g, x`` of vertex ``v`` fills the
    corner ``{g, x}``; following the region across edge ``(v, g) -> (w, h)``
    into corner ``{h, y}`` forces the face permutation to send ``x`` to ``y``.
    """
    nv = P.num_vertices
    slots: list[dict[int, tuple[int, int]]] = [dict() for _ in range(nv)]
    for k, (v0, g0, v1, g1) in enumerate(P.edges):
        for end, (v, g) in enumerate(((v0, g0), (v1, g1))):
            if not 0 <= g < 4 or g in slots[v]:
                raise NotDualizableError(f"vertex {v}: germ slot {g} invalid or used twice", vertex=v)
            slots[v][g] = (k, end)
    for v in range(nv):
        if len(slots[v]) != 4:
            raise NotDualizableError(f"vertex {v} has valence {len(slots[v])}, expected 4", vertex=v)
    if not P.is_connected():
        raise NotDualizableError("singular graph is disconnected")

    used: list[dict[frozenset, int]] = [dict() for _ in range(nv)]
    for r, i, v, g_in, g_out in P.corners():
        if g_in == g_out:
            raise NotDualizableError(f"region {r} backtracks at vertex {v}", vertex=v)
        c = frozenset((g_in, g_out))
        used[v][c] = used[v].get(c, 0) + 1
    for v in range(nv):
        for c in combinations(range(4), 2):
            if used[v].get(frozenset(c), 0) != 1:
                raise NotDualizableError(
                    f"vertex {v} does not match the four-Y model: corner {c} used "
                    f"{used[v].get(frozenset(c), 0)} times", vertex=v)

    perm: list[list[int | None]] = [[None] * 4 for _ in P.edges]
    for k, (v0, g0, v1, g1) in enumerate(P.edges):
        perm[k][g0] = g1
    E = P.edges
    for r, word in enumerate(P.regions):
        L = len(word)
        for i in range(L):
            k, s = word[i]
            v0, g0, v1, g1 = E[k]
            # germ before the edge at its tail, germ after it at its head
            kp, sp = word[i - 1]
            a0, b0, a1, b1 = E[kp]
            x = b1 if sp > 0 else b0
            kn, sn = word[(i + 1) % L]
            c0, d0, c1, d1 = E[kn]
            y = d0 if sn > 0 else d1
            if s < 0:
                x, y = y, x
            if perm[k][x] is not None and perm[k][x] != y:
                raise NotDualizableError(f"edge {k}: inconsistent sheet matching", vertex=v0)
            perm[k][x] = y
    pairs = []
    for k, (v0, g0, v1, g1) in enumerate(P.edges):
        p = tuple(perm[k])
        if p not in PERMS:
            raise NotDualizableError(f"edge {k}: sheets do not define a face permutation", vertex=v0)
        pairs.append((v0, g0, v1, g1, p))
    try:
        return Triangulation.from_pairs(nv, pairs)
    except ValueError as exc:
        raise NotDualizableError(f"reconstructed gluing is invalid: {exc}") from exc
