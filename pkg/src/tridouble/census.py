"""Canonical forms, isomorphisms, automorphism groups and census enumeration.

Canonical form
--------------
Pick a base tetrahedron and one of its 24 vertex labelings, then relabel by
breadth-first search: face-ends are visited in order ``(new tet, new face)``
and an undiscovered neighbour receives the next index together with the
vertex labeling that turns the discovering gluing into the identity.  Each
pairing becomes one integer code (key face-end, partner face-end, index of
the permutation in lexicographic order), emitted in ascending key order;
this is exactly the line order of :func:`serialize`.  The canonical
representative minimises the code sequence over all ``24 n`` starts.
"""

from __future__ import annotations

import itertools
import multiprocessing
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .geometry import exceptional_candidate
from .triangulation import (
    IDENTITY, PERMS, Triangulation, edge_classes, parse, perm_compose, perm_inverse, serialize,
)

PERM_INDEX = {p: i for i, p in enumerate(PERMS)}
INV = [PERM_INDEX[perm_inverse(p)] for p in PERMS]
COMP = [[PERM_INDEX[perm_compose(p, q)] for q in PERMS] for p in PERMS]
ID = PERM_INDEX[IDENTITY]
# perms sending face f to face g
PERMS_TO = [[[i for i, p in enumerate(PERMS) if p[f] == g] for g in range(4)] for f in range(4)]


def _table(T: Triangulation) -> list[tuple[int, int, int]]:
    return [(t2, f2, PERM_INDEX[p]) for t2, f2, p in T.gluings]


@dataclass(frozen=True)
class Isomorphism:
    """Tetrahedron ``t`` goes to ``tet_perm[t]``, its vertex ``v`` to
    ``vertex_perms[t][v]``."""

    tet_perm: tuple[int, ...]
    vertex_perms: tuple[tuple[int, int, int, int], ...]

    def apply(self, T: Triangulation) -> Triangulation:
        return T.relabel(self.tet_perm, self.vertex_perms)

    def is_valid(self, source: Triangulation, target: Triangulation) -> bool:
        """Check the transport identity on every pairing."""
        if source.n != target.n or sorted(self.tet_perm) != list(range(source.n)):
            return False
        for t, f, t2, f2, p in source.face_pairs():
            s, s2 = self.vertex_perms[t], self.vertex_perms[t2]
            img = target.glued(self.tet_perm[t], s[f])
            want = (self.tet_perm[t2], s2[f2], perm_compose(s2, perm_compose(p, perm_inverse(s))))
            if img != want:
                return False
        return True

    def compose(self, other: "Isomorphism") -> "Isomorphism":
        """``self o other``."""
        tp = tuple(self.tet_perm[other.tet_perm[t]] for t in range(len(self.tet_perm)))
        vp = tuple(perm_compose(self.vertex_perms[other.tet_perm[t]], other.vertex_perms[t])
                   for t in range(len(self.tet_perm)))
        return Isomorphism(tp, vp)

    def inverse(self) -> "Isomorphism":
        n = len(self.tet_perm)
        tp = [0] * n
        vp: list = [None] * n
        for t in range(n):
            tp[self.tet_perm[t]] = t
            vp[self.tet_perm[t]] = perm_inverse(self.vertex_perms[t])
        return Isomorphism(tuple(tp), tuple(vp))


@dataclass(frozen=True)
class CanonicalForm:
    representative: Triangulation
    signature: str
    codes: tuple[int, ...] = field(repr=False, compare=False, default=())


# ---------------------------------------------------------------------------
# BFS relabelling


def _bfs_codes(glue, n: int, base: int, s0: int, best=None):
    """Codes of the BFS relabelling from ``(base, s0)``.

    ``glue[4t+f]`` is ``(t2, f2, perm index)`` or ``None`` (undecided).
    Returns ``(status, codes, newidx, labels)``; ``status`` is ``-1`` if the
    sequence was found smaller than ``best``, ``1`` if larger (aborted), ``0``
    if equal or ``best`` is None, and ``2`` if an undecided gluing was met.
    """
    n4 = 4 * n
    newidx = [-1] * n
    lab = [0] * n
    newidx[base] = 0
    lab[base] = s0
    order = [base]
    codes = []
    status = 0
    pos = 0
    for i in range(n):
        if i >= len(order):
            return 2, codes, newidx, lab
        t = order[i]
        st = lab[t]
        sinv = PERMS[INV[st]]
        for F in range(4):
            f = sinv[F]
            g = glue[4 * t + f]
            if g is None:
                return 2, codes, newidx, lab
            t2, f2, p = g
            j = newidx[t2]
            if j < 0:
                j = newidx[t2] = len(order)
                order.append(t2)
                lab[t2] = COMP[st][INV[p]]
            F2 = PERMS[lab[t2]][f2]
            k2 = 4 * j + F2
            k1 = 4 * i + F
            if k2 < k1:
                continue
            q = COMP[lab[t2]][COMP[p][INV[st]]]
            code = (k1 * n4 + k2) * 24 + q
            codes.append(code)
            if status == 0 and best is not None:
                if pos < len(best):
                    b = best[pos]
                    if code < b:
                        status = -1
                    elif code > b:
                        return 1, codes, newidx, lab
            pos += 1
    return status, codes, newidx, lab


def _decode(n: int, codes: Sequence[int]) -> Triangulation:
    n4 = 4 * n
    pairs = []
    for c in codes:
        q = c % 24
        k = c // 24
        k1, k2 = divmod(k, n4)
        pairs.append((k1 // 4, k1 % 4, k2 // 4, k2 % 4, PERMS[q]))
    return Triangulation.from_pairs(n, pairs)


def _canonical(T: Triangulation):
    glue = _table(T)
    best = None
    starts = []
    for b in range(T.n):
        for s in range(24):
            status, codes, newidx, lab = _bfs_codes(glue, T.n, b, s, best)
            if best is None or status == -1:
                best = codes
                starts = [(newidx, lab)]
            elif status == 0:
                starts.append((newidx, lab))
    return best, starts


def canonical_form(T: Triangulation) -> CanonicalForm:
    codes, _ = _canonical(T)
    rep = _decode(T.n, codes)
    return CanonicalForm(rep, serialize(rep), tuple(codes))


def signature(T: Triangulation) -> str:
    return canonical_form(T).signature


def _iso_from_labels(newidx, lab) -> Isomorphism:
    return Isomorphism(tuple(newidx), tuple(PERMS[x] for x in lab))


def is_isomorphic(T1: Triangulation, T2: Triangulation) -> Isomorphism | None:
    """A verified isomorphism ``T1 -> T2``, or ``None``."""
    if T1.n != T2.n:
        return None
    c1, s1 = _canonical(T1)
    c2, s2 = _canonical(T2)
    if c1 != c2:
        return None
    to_canon1 = _iso_from_labels(*s1[0])
    to_canon2 = _iso_from_labels(*s2[0])
    iso = to_canon2.inverse().compose(to_canon1)
    if not iso.is_valid(T1, T2):
        raise AssertionError("isomorphism witness failed verification")
    return iso


# ---------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True)
class IsomGroupReport:
    aut_order: int
    aut_generators: tuple[Isomorphism, ...]
    exceptional_flag: bool

    @property
    def isom_plus_order(self) -> int:
        return self.aut_order

    @property
    def isom_order(self) -> int:
        return 2 * self.aut_order

    @property
    def valid(self) -> bool:
        """Whether Isom(D(T)) = Aut(T) x Z/2 may be asserted."""
        return not self.exceptional_flag


def _tet_colours(T: Triangulation, rounds: int | None = None) -> list[int]:
    """Colour refinement on tetrahedra starting from labelling-invariant
    data (the multiset of edge profiles); stops when the partition is stable."""
    n = T.n
    prof = {}
    for e in edge_classes(T):
        for t, ab in e.wedges:
            prof.setdefault(t, []).append((e.valence, e.orientable))
    colours = [hash(tuple(sorted(prof[t]))) for t in range(n)]
    colours = _compress(colours)
    ncol = len(set(colours))
    g = T.gluings
    r = 0
    while rounds is None or r < rounds:
        r += 1
        new = [hash((colours[t], tuple(sorted(colours[g[4 * t + f][0]] for f in range(4)))))
               for t in range(n)]
        new = _compress(new)
        k = len(set(new))
        colours = new
        if k == ncol:
            break
        ncol = k
    return colours


def _compress(values: list) -> list[int]:
    index: dict = {}
    for v in sorted(set(values)):
        index[v] = len(index)
    return [index[v] for v in values]


def _transport(glue, n: int, src: int, dst: int, s0: int, colours=None):
    """Try to extend ``src -> dst`` with vertex labelling ``s0`` to an
    automorphism.  Returns ``(tet_map, labels)`` or ``None``."""
    img = [-1] * n
    lab = [0] * n
    used = bytearray(n)
    img[src] = dst
    lab[src] = s0
    used[dst] = 1
    stack = [src]
    while stack:
        t = stack.pop()
        u = img[t]
        st = lab[t]
        sp = PERMS[st]
        for f in range(4):
            t2, f2, p = glue[4 * t + f]
            u2, g2, q = glue[4 * u + sp[f]]
            # the labelling of t2 is forced: q o s_t = s_t2 o p
            s2 = COMP[COMP[q][st]][INV[p]]
            if img[t2] < 0:
                if used[u2] or (colours is not None and colours[t2] != colours[u2]):
                    return None
                img[t2] = u2
                lab[t2] = s2
                used[u2] = 1
                stack.append(t2)
            elif img[t2] != u2 or lab[t2] != s2:
                return None
            if PERMS[s2][f2] != g2:
                return None
    return img, lab


def automorphism_group(T: Triangulation) -> list[Isomorphism]:
    """All combinatorial automorphisms (tetrahedron 0's image and labelling
    determine the rest)."""
    glue = _table(T)
    n = T.n
    colours = _tet_colours(T) if n > 8 else None
    if colours is None:
        ref = 0
        cands = range(n)
    else:
        classes: dict[int, list[int]] = {}
        for t, c in enumerate(colours):
            classes.setdefault(c, []).append(t)
        best = min(classes.values(), key=lambda ts: (len(ts), ts[0]))
        ref = best[0]
        cands = best
    out = []
    for b in cands:
        for s in range(24):
            res = _transport(glue, n, ref, b, s, colours)
            if res is not None:
                img, lab = res
                out.append(Isomorphism(tuple(img), tuple(PERMS[x] for x in lab)))
    return out


def automorphisms(T: Triangulation) -> IsomGroupReport:
    auts = automorphism_group(T)
    for a in auts:
        if not a.is_valid(T, T):
            raise AssertionError("automorphism failed verification")
    return IsomGroupReport(len(auts), tuple(_generators(auts)), exceptional_candidate(T))


def _generators(auts: list[Isomorphism]) -> list[Isomorphism]:
    """A small generating set, grown greedily."""
    if not auts:
        return []
    ident = Isomorphism(tuple(range(len(auts[0].tet_perm))), tuple(IDENTITY for _ in auts[0].tet_perm))
    key = lambda a: (a.tet_perm, a.vertex_perms)
    span = {key(ident)}
    gens: list[Isomorphism] = []
    elems = [ident]
    for a in auts:
        if key(a) in span:
            continue
        gens.append(a)
        # closure
        frontier = list(elems)
        elems_set = {key(e): e for e in elems}
        queue = [x for x in frontier]
        while queue:
            x = queue.pop()
            for g in gens:
                y = g.compose(x)
                if key(y) not in elems_set:
                    elems_set[key(y)] = y
                    queue.append(y)
        elems = list(elems_set.values())
        span = set(elems_set)
    return gens


# ---------------------------------------------------------------------------
# enumeration


@dataclass
class CensusResult:
    n: int
    members: list[CanonicalForm]
    truncated: bool = False
    nodes: int = 0

    def __iter__(self) -> Iterator[CanonicalForm]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


def _prefix_ok(glue, n: int, created: int, cand_codes: list[int]) -> bool:
    """Prune unless the candidate prefix could still be minimal."""
    for b in range(created):
        for s in range(24):
            if b == 0 and s == ID:
                continue
            status, codes, _, _ = _bfs_codes(glue, n, b, s, cand_codes)
            if status == -1:
                # smaller at a position where the candidate is decided
                return False
    return True


def _leaves(n: int, glue, created: int, max_nodes, counter, prefix_codes):
    """Depth-first generation of BFS-normal gluings extending ``glue``."""
    n4 = 4 * n
    # first undecided face-end
    k = next((i for i in range(n4) if glue[i] is None), None)
    counter[0] += 1
    if max_nodes is not None and counter[0] > max_nodes:
        raise _Truncated
    if k is None:
        if created == n:
            yield list(glue)
        return
    t, f = divmod(k, 4)
    if t >= created:
        return  # disconnected
    options = []
    if created < n:
        options.append((created, f, ID, created + 1))
    for k2 in range(k + 1, 4 * created):
        if glue[k2] is None:
            t2, f2 = divmod(k2, 4)
            for p in PERMS_TO[f][f2]:
                options.append((t2, f2, p, created))
    for t2, f2, p, c2 in options:
        glue[k] = (t2, f2, p)
        glue[4 * t2 + f2] = (t, f, INV[p])
        code = (k * n4 + 4 * t2 + f2) * 24 + p
        codes = prefix_codes + [code]
        if _prefix_ok(glue, n, c2, codes):
            yield from _leaves(n, glue, c2, max_nodes, counter, codes)
        glue[k] = None
        glue[4 * t2 + f2] = None


class _Truncated(Exception):
    pass


def _run_branch(args):
    n, first, max_nodes = args
    glue: list = [None] * (4 * n)
    t2, f2, p, created = first
    glue[0] = (t2, f2, p)
    glue[4 * t2 + f2] = (0, 0, INV[p])
    code = (4 * t2 + f2) * 24 + p
    counter = [0]
    out = []
    truncated = False
    try:
        if _prefix_ok(glue, n, created, [code]):
            for leaf in _leaves(n, glue, created, max_nodes, counter, [code]):
                T = Triangulation(n, tuple((a, b, PERMS[c]) for a, b, c in leaf))
                cf = canonical_form(T)
                if cf.representative == T:
                    out.append(cf.signature)
    except _Truncated:
        truncated = True
    return out, truncated, counter[0]


def _first_choices(n: int):
    if n == 1:
        return [(0, f2, p, 1) for f2 in range(1, 4) for p in PERMS_TO[0][f2]]
    out = [(1, 0, ID, 2)]
    out += [(0, f2, p, 1) for f2 in range(1, 4) for p in PERMS_TO[0][f2]]
    return out


def enumerate_census(n: int, filter: Callable[[Triangulation], bool] | None = None,
                     jobs: int = 1, max_nodes: int | None = None) -> CensusResult:
    """Every isomorphism class of connected n-tetrahedron gluings once, in
    ascending signature order.  ``max_nodes`` bounds the search per branch;
    exceeding it sets ``truncated`` on the result."""
    if n < 1:
        raise ValueError("n must be positive")
    tasks = [(n, c, max_nodes) for c in _first_choices(n)]
    if jobs > 1:
        with multiprocessing.get_context("spawn").Pool(jobs) as pool:
            results = pool.map(_run_branch, tasks)
    else:
        results = [_run_branch(a) for a in tasks]
    sigs = sorted({s for out, _, _ in results for s in out})
    truncated = any(tr for _, tr, _ in results)
    nodes = sum(c for _, _, c in results)
    members = []
    for s in sigs:
        T = parse(s)
        if filter is None or filter(T):
            members.append(CanonicalForm(T, s))
    return CensusResult(n, members, truncated, nodes)


def relabelings(n: int) -> Iterator[Isomorphism]:
    """All ``n! * 24^n`` relabellings."""
    for tp in itertools.permutations(range(n)):
        for vp in itertools.product(PERMS, repeat=n):
            yield Isomorphism(tp, vp)
