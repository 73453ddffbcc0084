"""Integer homology of D(T) and of special polyhedra.

``H_1(D(T))`` splits as a free part of rank ``n + 1`` carried by the
singular graph, plus the group generated by one meridian per edge class
subject to one relation per face class (the boundary of a pair of pants).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .polyhedron import SpecialPolyhedron
from .snf import AbelianGroup, cokernel, sparse_cokernel
from .triangulation import Triangulation, edge_classes


@dataclass(frozen=True)
class RegionIncidence:
    """Signed traversal counts: ``rows[e][f]`` for edge class ``e`` and face
    class ``f`` (sparse; missing entries are zero)."""

    num_rows: int
    num_cols: int
    rows: tuple[dict[int, int], ...]

    def dense(self) -> list[list[int]]:
        M = [[0] * self.num_cols for _ in range(self.num_rows)]
        for e, row in enumerate(self.rows):
            for f, x in row.items():
                M[e][f] = x
        return M

    def columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [dict() for _ in range(self.num_cols)]
        for e, row in enumerate(self.rows):
            for f, x in row.items():
                cols[f][e] = x
        return cols


def region_incidence(T: Triangulation, seed: int | None = None) -> RegionIncidence:
    classes = edge_classes(T, seed=seed)
    rows = []
    for e in classes:
        row: dict[int, int] = {}
        for f, s in e.boundary_word:
            row[f] = row.get(f, 0) + s
        rows.append({f: x for f, x in row.items() if x})
    return RegionIncidence(len(classes), 2 * T.n, tuple(rows))


def meridian_group(T: Triangulation, seed: int | None = None) -> AbelianGroup:
    """Meridians modulo the pants relations: ``Z^{#classes} / span(columns of C)``."""
    C = region_incidence(T, seed=seed)
    return sparse_cokernel(C.num_rows, C.columns())


def h1_double(T: Triangulation, seed: int | None = None) -> AbelianGroup:
    return AbelianGroup(T.n + 1) + meridian_group(T, seed=seed)


def graph_h1(num_vertices: int, edges) -> AbelianGroup:
    """H_1 of a graph from its boundary matrix (always free)."""
    M = [[0] * len(edges) for _ in range(num_vertices)]
    for k, (v0, _, v1, _) in enumerate(edges):
        M[v0][k] -= 1
        M[v1][k] += 1
    # coker of the boundary map is H_0; H_1 = ker has rank E - rank
    h0 = cokernel(M, rows=num_vertices) if edges else AbelianGroup(num_vertices)
    rank = num_vertices - h0.free_rank
    return AbelianGroup(len(edges) - rank)


def h1_meridinal_filling(T: Triangulation) -> AbelianGroup:
    """Filling every cusp along its meridian kills all meridian generators,
    leaving the free part carried by the singular graph."""
    from .polyhedron import dual_polyhedron

    P = dual_polyhedron(T)
    return graph_h1(P.num_vertices, P.edges)


def spanning_tree(P: SpecialPolyhedron) -> set[int]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(P.num_vertices)]
    for k, (v0, _, v1, _) in enumerate(P.edges):
        adj[v0].append((k, v1))
        adj[v1].append((k, v0))
    tree: set[int] = set()
    seen = bytearray(P.num_vertices)
    if P.num_vertices:
        seen[0] = 1
    queue = [0] if P.num_vertices else []
    for v in queue:
        for k, w in adj[v]:
            if not seen[w]:
                seen[w] = 1
                tree.add(k)
                queue.append(w)
    if not all(seen):
        raise DomainError("special polyhedron is disconnected")
    return tree


def abelianized_pi1(P: SpecialPolyhedron) -> AbelianGroup:
    """H_1(P): non-tree edges modulo the abelianized closed-region words."""
    tree = spanning_tree(P)
    gen = {}
    for k in range(P.num_edges):
        if k not in tree:
            gen[k] = len(gen)
    rels = []
    for r, word in enumerate(P.regions):
        if r in P.boundary_loops:
            continue
        rel: dict[int, int] = {}
        for k, s in word:
            if k in gen:
                rel[gen[k]] = rel.get(gen[k], 0) + s
        rels.append(rel)
    return sparse_cokernel(len(gen), rels)
