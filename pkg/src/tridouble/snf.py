"""Exact Smith normal form over the integers.

Matrices are lists of rows of Python ints, so there is no overflow.  The
cokernel convention throughout is ``Z^rows / column span``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

Matrix = list[list[int]]


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^free_rank`` plus cyclic factors ``Z/d`` with ``d_1 | d_2 | ...``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not an invariant-factor chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_diagonal(cls, rows: int, diagonal: Iterable[int]) -> "AbelianGroup":
        d = [abs(x) for x in diagonal if x != 0]
        return cls(rows - len(d), tuple(x for x in sorted(d) if x > 1))

    @property
    def order(self) -> int | None:
        """Group order, or ``None`` if infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " ⊕ ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return direct_sum(self, other)


def direct_sum(*groups: AbelianGroup) -> AbelianGroup:
    rank = sum(g.free_rank for g in groups)
    cyclic = [d for g in groups for d in g.torsion]
    if not cyclic:
        return AbelianGroup(rank)
    diag, _, _ = smith_normal_form(_diag(cyclic))
    return AbelianGroup(rank, AbelianGroup.from_diagonal(len(cyclic), diag).torsion)


def _diag(d: Sequence[int]) -> Matrix:
    return [[d[i] if i == j else 0 for j in range(len(d))] for i in range(len(d))]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    cols = len(B[0]) if B else 0
    Bt = list(zip(*B)) if B else [()] * cols
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def determinant(A: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[list[int], Matrix, Matrix]:
    """Return ``(diagonal, U, V)`` with ``U * M * V`` diagonal in Smith form.

    ``diagonal`` holds the ``min(rows, cols)`` diagonal entries, each
    non-negative and dividing the next (zeros last).  ``U`` and ``V`` are
    unimodular.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    A = [list(map(int, r)) for r in M]
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row dst += q * row src
        if q:
            ad, as_ = A[dst], A[src]
            for k in range(cols):
                if as_[k]:
                    ad[k] += q * as_[k]
            ud, us = U[dst], U[src]
            for k in range(rows):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(dst, src, q):  # col dst += q * col src
        if q:
            for r in A:
                if r[src]:
                    r[dst] += q * r[src]
            for r in V:
                if r[src]:
                    r[dst] += q * r[src]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            Ai = A[i]
            for j in range(t, cols):
                x = Ai[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            moved = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        swap_rows(t, i)
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        swap_cols(t, j)
                        moved = True
                        break
            if moved:
                continue
            # row and column cleared; enforce divisibility of the rest
            bad = next((i for i in range(t + 1, rows)
                        if any(A[i][j] % p for j in range(t + 1, cols))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diag = [A[k][k] for k in range(min(rows, cols))]
    return diag, U, V


def cokernel(M: Sequence[Sequence[int]], rows: int | None = None) -> AbelianGroup:
    """``Z^rows / column span of M`` by the dense algorithm."""
    r = len(M) if rows is None else rows
    if not M or not M[0]:
        return AbelianGroup(r)
    diag, _, _ = smith_normal_form(M)
    return AbelianGroup.from_diagonal(r, diag)


def sparse_cokernel(num_gens: int, relations: Iterable[Mapping[int, int]]) -> AbelianGroup:
    """``Z^num_gens`` modulo the given relations (sparse ``{gen: coeff}``).

    Unit pivots are eliminated sparsely, cheapest first; whatever is left is
    handed to the dense Smith normal form.
    """
    rels: dict[int, dict[int, int]] = {}
    occ: dict[int, set[int]] = {}
    for rid, r in enumerate(relations):
        r = {g: c for g, c in r.items() if c}
        if not r:
            continue
        rels[rid] = r
        for g in r:
            if not 0 <= g < num_gens:
                raise ValueError(f"generator {g} out of range")
            occ.setdefault(g, set()).add(rid)
    gens_left = num_gens
    heap = [(len(r), rid) for rid, r in rels.items()]
    heapq.heapify(heap)
    while heap:
        size, rid = heapq.heappop(heap)
        r = rels.get(rid)
        if r is None:
            continue
        if size != len(r):
            heapq.heappush(heap, (len(r), rid))
            continue
        units = [g for g, c in r.items() if c in (1, -1)]
        if not units:
            continue
        g = min(units, key=lambda x: (len(occ[x]), x))
        c = r[g]
        del rels[rid]
        for h in r:
            occ[h].discard(rid)
        for sid in list(occ[g]):
            s = rels[sid]
            f = s[g] * c  # s -= (s[g]/c) * r, with 1/c == c
            for h, x in r.items():
                y = s.get(h, 0) - f * x
                if y:
                    if h not in s:
                        occ[h].add(sid)
                    s[h] = y
                else:
                    if h in s:
                        del s[h]
                        occ[h].discard(sid)
            if not s:
                del rels[sid]
            else:
                heapq.heappush(heap, (len(s), sid))
        del occ[g]
        gens_left -= 1
    if not rels:
        return AbelianGroup(gens_left)
    used = sorted({g for r in rels.values() for g in r})
    index = {g: i for i, g in enumerate(used)}
    M = [[0] * len(rels) for _ in used]
    for j, r in enumerate(rels.values()):
        for g, x in r.items():
            M[index[g]][j] = x
    sub = cokernel(M)
    return AbelianGroup(sub.free_rank + gens_left - len(used), sub.torsion)
