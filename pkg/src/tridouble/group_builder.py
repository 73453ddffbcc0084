"""From a finite group G to a triangulation whose automorphism group is G.

Every special polyhedron in the pipeline is carried by its dual
triangulation (vertices = tetrahedra, edge germs = faces), so the local
moves are written as face-pairing surgery:

* bubble: a pillow (two tetrahedra glued along three faces) is inserted in
  every face pairing, which adds two vertices per edge and leaves no edge
  with both ends at one vertex;
* curl: a tetrahedron whose faces 2 and 3 are glued to each other by
  ``(0 1)(2 3)`` is inserted in a face pairing; its valence-one edge is a
  region bounded by a single loop.

A voltage is attached to every dart ``(t, f)`` (leaving tetrahedron ``t``
through face ``f``); the finite cover has tetrahedra ``(t, x)`` and glues
face ``f`` of ``(t, x)`` to the partner face of ``(t', x * voltage)``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property

from .census import Isomorphism, automorphisms, enumerate_census
from .errors import DisconnectedError, DomainError, ResourceLimitError, VerificationError
from .geometry import V_OCTAHEDRON
from .groups import FiniteGroupTable
from .homology import abelianized_pi1
from .polyhedron import SpecialPolyhedron, dual_polyhedron, dual_triangulation
from .snf import AbelianGroup
from .spine import TO_MINUS, build_spine
from .triangulation import (
    IDENTITY, Triangulation, edge_classes, is_manifold, perm_compose, perm_inverse, vertex_links,
)

MU = (1, 0, 3, 2)
DEFAULT_MAX_CURLED = 50_000


def _swap(a: int, b: int):
    p = list(IDENTITY)
    p[a], p[b] = p[b], p[a]
    return tuple(p)


@dataclass(frozen=True)
class MarkedPolyhedron:
    """A special polyhedron (as its dual triangulation) with voltages.

    ``voltages[4 * t + f]`` is the group element carried by the dart leaving
    ``t`` through face ``f``.  ``curl_counts`` maps a germ ``(t, f)`` at a
    good vertex to the number of curls on its underlying edge.
    """

    triangulation: Triangulation
    group: FiniteGroupTable
    voltages: tuple[int, ...]
    stage: str = "Q"
    curl_counts: dict = field(default_factory=dict, compare=False)
    info: dict = field(default_factory=dict, compare=False)

    @property
    def num_vertices(self) -> int:
        return self.triangulation.n

    @cached_property
    def polyhedron(self) -> SpecialPolyhedron:
        return dual_polyhedron(self.triangulation)

    @cached_property
    def bad(self) -> tuple[bool, ...]:
        flags = [False] * self.triangulation.n
        for t, f, t2, f2, p in self.triangulation.face_pairs():
            if t == t2:
                flags[t] = True
        return tuple(flags)

    def bad_vertices(self) -> list[int]:
        return [t for t, b in enumerate(self.bad) if b]

    def check_voltages(self) -> None:
        G = self.group
        for i, (t2, f2, _) in enumerate(self.triangulation.gluings):
            if G.mul(self.voltages[i], self.voltages[4 * t2 + f2]) != 0:
                raise VerificationError(f"dart voltages at face-end {divmod(i, 4)} are not inverse")


# ---------------------------------------------------------------------------
# Q_G


def s3_spine_triangulation() -> Triangulation:
    """A one-tetrahedron, one-vertex triangulation of S^3 (the smallest in
    signature order), found among the one-tetrahedron gluings."""
    for cf in enumerate_census(1):
        T = cf.representative
        links = vertex_links(T)
        if (is_manifold(T)[0] and len(links) == 1 and links[0].euler_characteristic == 2
                and abelianized_pi1(dual_polyhedron(T)) == AbelianGroup(0)):
            return T
    raise VerificationError("no one-tetrahedron triangulation of S^3 found")  # pragma: no cover


def build_Q(G: FiniteGroupTable) -> MarkedPolyhedron:
    m = G.order
    if m == 1:
        T = s3_spine_triangulation()
        return MarkedPolyhedron(T, G, (0,) * (4 * T.n), "Q", info={"crossings": 0, "self_crossings": 0})
    spine = build_spine(G)
    T = dual_triangulation(spine.polyhedron)
    core = spine.core_vertex
    volt = []
    for i, (t2, f2, _) in enumerate(T.gluings):
        t, f = divmod(i, 4)
        a = core[t] if (t in core and f == TO_MINUS) else 0
        b = core[t2] if (t2 in core and f2 == TO_MINUS) else 0
        volt.append(G.mul(a, G.inv(b)))
    Q = MarkedPolyhedron(T, G, tuple(volt), "Q", info={
        "crossings": spine.crossings,
        "self_crossings": spine.self_crossings,
        "handle_passages": dict(spine.handle_passages),
        "k_realized": T.n / m ** 4,
    })
    Q.check_voltages()
    return Q


# ---------------------------------------------------------------------------
# moves


def bubble_all(Q: MarkedPolyhedron) -> MarkedPolyhedron:
    T = Q.triangulation
    G = Q.group
    n = T.n
    pairs = T.face_pairs()
    table: list = list(T.gluings) + [None] * (4 * 2 * len(pairs))
    volt = list(Q.voltages) + [0] * (4 * 2 * len(pairs))

    def glue(t, f, t2, f2, p, v):
        table[4 * t + f] = (t2, f2, p)
        table[4 * t2 + f2] = (t, f, perm_inverse(p))
        volt[4 * t + f] = v
        volt[4 * t2 + f2] = G.inv(v)

    for k, (t, f, t2, f2, p) in enumerate(pairs):
        A, B = n + 2 * k, n + 2 * k + 1
        v = Q.voltages[4 * t + f]
        sigma = _swap(f, 3)
        for g in range(3):
            glue(A, g, B, g, IDENTITY, 0)
        glue(t, f, A, 3, sigma, v)
        glue(B, 3, t2, f2, perm_compose(p, sigma), 0)
    out = MarkedPolyhedron(Triangulation(n + 2 * len(pairs), tuple(table)), G, tuple(volt), "Q'",
                           info={"from": n})
    out.check_voltages()
    return out


def predicted_curled_size(c: int) -> int:
    return 2 * c * (c + 1)


def add_curls(Q: MarkedPolyhedron, max_vertices: int | None = DEFAULT_MAX_CURLED) -> MarkedPolyhedron:
    """Edge ``e_i`` (the ``i``-th face pairing in key order, from 1) gets
    ``i`` curls in a chain."""
    if Q.bad_vertices():
        raise DomainError("curls are added to a polyhedron without bad vertices")
    T = Q.triangulation
    G = Q.group
    n = T.n
    target = predicted_curled_size(n)
    if max_vertices is not None and target > max_vertices:
        raise ResourceLimitError(
            f"curled polyhedron would have {target} vertices (limit {max_vertices})", stage="curls")
    pairs = T.face_pairs()
    total = n + sum(range(1, len(pairs) + 1))
    table: list = list(T.gluings) + [None] * (4 * (total - n))
    volt = list(Q.voltages) + [0] * (4 * (total - n))

    def glue(t, f, t2, f2, p, v):
        table[4 * t + f] = (t2, f2, p)
        table[4 * t2 + f2] = (t, f, perm_inverse(p))
        volt[4 * t + f] = v
        volt[4 * t2 + f2] = G.inv(v)

    counts = {}
    nxt = n
    for k, (t, f, t2, f2, p) in enumerate(pairs):
        i = k + 1
        chain = list(range(nxt, nxt + i))
        nxt += i
        for U in chain:
            glue(U, 2, U, 3, MU, 0)
        sigma = _swap(f, 0)
        glue(t, f, chain[0], 0, sigma, Q.voltages[4 * t + f])
        for a, b in zip(chain, chain[1:]):
            glue(a, 1, b, 0, MU, 0)
        glue(chain[-1], 1, t2, f2, perm_compose(p, perm_compose(sigma, MU)), 0)
        counts[(t, f)] = i
        counts[(t2, f2)] = i
    out = MarkedPolyhedron(Triangulation(total, tuple(table)), G, tuple(volt), "Q''",
                           curl_counts=counts, info={"from": n})
    out.check_voltages()
    return out


def lambda_(P: MarkedPolyhedron, v: int, germ: int) -> int:
    """Longest simple path in the singular graph leaving ``v`` through
    ``germ`` whose vertices other than ``v`` are all bad."""
    T = P.triangulation
    bad = P.bad
    if bad[v]:
        raise DomainError(f"vertex {v} is bad")
    w = T.glued(v, germ)[0]
    if not bad[w]:
        return 0
    best = 1
    stack = [(w, 1, frozenset((v, w)))]
    while stack:
        x, length, seen = stack.pop()
        best = max(best, length)
        for f in range(4):
            y = T.glued(x, f)[0]
            if y not in seen and bad[y]:
                stack.append((y, length + 1, seen | {y}))
    return best


def universal_cover(P: MarkedPolyhedron, G: FiniteGroupTable | None = None) -> MarkedPolyhedron:
    """The voltage cover with ``|G|`` sheets."""
    G = P.group if G is None else G
    T = P.triangulation
    m = G.order
    n = T.n
    if G.generated_subgroup(set(P.voltages)) != set(range(m)):
        raise VerificationError("voltages do not generate the group")
    table = [None] * (4 * n * m)
    for i, (t2, f2, p) in enumerate(T.gluings):
        t, f = divmod(i, 4)
        v = P.voltages[i]
        for x in range(m):
            table[4 * (t * m + x) + f] = (t2 * m + G.mul(x, v), f2, p)
    try:
        C = Triangulation(n * m, tuple(table))
    except DisconnectedError as exc:
        raise VerificationError(f"cover is disconnected: {exc}") from exc
    base = edge_classes(T)
    lifted = edge_classes(C)
    if len(lifted) != m * len(base):
        raise VerificationError("some region carries a non-trivial voltage")
    counts = {}
    for (t, f), i in P.curl_counts.items():
        for x in range(m):
            counts[(t * m + x, f)] = i
    return MarkedPolyhedron(C, G, (0,) * (4 * n * m), "P", curl_counts=counts, info={"sheets": m})


def deck_transformations(C: MarkedPolyhedron) -> list[Isomorphism]:
    """The left action ``(t, x) -> (t, g x)`` of every ``g`` on a cover built
    by :func:`universal_cover`, as tetrahedron relabellings."""
    G = C.group
    m = G.order
    base = C.triangulation.n // m
    out = []
    for g in range(m):
        tp = tuple(t * m + G.mul(g, x) for t in range(base) for x in range(m))
        out.append(Isomorphism(tp, (IDENTITY,) * (base * m)))
    return out


# ---------------------------------------------------------------------------
# full pipeline


@dataclass
class GroupReport:
    order: int
    stage_counts: dict
    abelianized: dict
    bad_after_bubble: int
    lambda_ok: bool
    aut_order: int
    k_Q: float
    k_P: float
    vol_D: float
    crossings: int
    self_crossings: int
    seconds: float

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "stage_counts": self.stage_counts,
            "abelianized_pi1": {k: v.to_json() for k, v in self.abelianized.items()},
            "bad_vertices_after_bubble": self.bad_after_bubble,
            "lambda_matches_curls": self.lambda_ok,
            "aut_order": self.aut_order,
            "k_Q": self.k_Q,
            "k_P": self.k_P,
            "vol_D_bound": self.vol_D,
            "crossings": self.crossings,
            "self_crossings": self.self_crossings,
        }


def check_lambda(P: MarkedPolyhedron) -> bool:
    for (t, f), i in P.curl_counts.items():
        if P.bad[t] or lambda_(P, t, f) != i:
            return False
    return True


def realize_group(G: FiniteGroupTable, max_vertices: int | None = DEFAULT_MAX_CURLED,
                  homology_checks: bool = True) -> tuple[Triangulation, GroupReport]:
    start = time.perf_counter()
    m = G.order
    Q = build_Q(G)
    Q1 = bubble_all(Q)
    c, c1 = Q.num_vertices, Q1.num_vertices
    if c1 != 5 * c:
        raise VerificationError(f"bubbling gave {c1} vertices, expected {5 * c}")
    bad1 = len(Q1.bad_vertices())
    if bad1:
        raise VerificationError(f"{bad1} bad vertices survive bubbling")
    Q2 = add_curls(Q1, max_vertices)
    c2 = Q2.num_vertices
    if c2 != predicted_curled_size(c1):
        raise VerificationError(f"curling gave {c2} vertices, expected {predicted_curled_size(c1)}")
    nbad = len(Q2.bad_vertices())
    if nbad != c1 * (2 * c1 + 1):
        raise VerificationError(f"{nbad} bad vertices after curling, expected {c1 * (2 * c1 + 1)}")
    lam = check_lambda(Q2)
    if not lam:
        raise VerificationError("lambda does not recover the curl counts")
    abel = {}
    if homology_checks:
        abel = {"Q": abelianized_pi1(Q.polyhedron), "Q'": abelianized_pi1(Q1.polyhedron),
                "Q''": abelianized_pi1(Q2.polyhedron)}
        if len(set(abel.values())) != 1 or abel["Q"] != G.abelianization():
            raise VerificationError(f"abelianized fundamental groups disagree: {abel}")
    PG = universal_cover(Q2, G)
    cP = PG.num_vertices
    if cP != m * c2:
        raise VerificationError(f"cover has {cP} vertices, expected {m * c2}")
    TG = dual_triangulation(PG.polyhedron)
    rep = automorphisms(TG)
    if rep.aut_order != m:
        raise VerificationError(f"automorphism group has order {rep.aut_order}, expected {m}")
    report = GroupReport(
        order=m,
        stage_counts={"Q": c, "Q'": c1, "Q''": c2, "P": cP},
        abelianized=abel,
        bad_after_bubble=bad1,
        lambda_ok=lam,
        aut_order=rep.aut_order,
        k_Q=c / m ** 4,
        k_P=cP / m ** 9,
        vol_D=2 * cP * V_OCTAHEDRON,
        crossings=Q.info.get("crossings", 0),
        self_crossings=Q.info.get("self_crossings", 0),
        seconds=time.perf_counter() - start,
    )
    return TG, report
