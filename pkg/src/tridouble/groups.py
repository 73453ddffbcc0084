"""Finite groups given by multiplication tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import GroupTableError, ParseError
from .snf import AbelianGroup, sparse_cokernel


@dataclass(frozen=True)
class FiniteGroupTable:
    """Elements ``0..m-1`` with ``0`` the identity; ``table[a][b] = a*b``."""

    table: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        m = len(self.table)
        if m < 1:
            raise GroupTableError("a group needs at least one element")
        for a, row in enumerate(self.table):
            if len(row) != m or any(not 0 <= x < m for x in row):
                raise GroupTableError(f"row {a} is not a list of {m} elements in 0..{m - 1}")
        T = self.table
        for a in range(m):
            if T[0][a] != a or T[a][0] != a:
                raise GroupTableError("element 0 is not the identity")
        for a in range(m):
            if 0 not in T[a]:
                raise GroupTableError(f"element {a} has no inverse")
            b = T[a].index(0)
            if T[b][a] != 0:
                raise GroupTableError(f"element {a} has no two-sided inverse")
        for a, b, c in itertools.product(range(m), repeat=3):
            if T[T[a][b]][c] != T[a][T[b][c]]:
                raise GroupTableError(f"multiplication is not associative at ({a}, {b}, {c})")

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        return tuple(row.index(0) for row in self.table)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def generated_subgroup(self, gens) -> set[int]:
        out = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in out:
                    out.add(y)
                    frontier.append(y)
        return out

    def abelianization(self) -> AbelianGroup:
        """G/[G,G] computed from the trivial presentation."""
        pres = trivial_presentation(self)
        rels = []
        for word in pres.relators:
            r: dict[int, int] = {}
            for g, s in word:
                r[g - 1] = r.get(g - 1, 0) + s
            rels.append(r)
        return sparse_cokernel(self.order - 1, rels)


@dataclass(frozen=True)
class TrivialPresentation:
    """Generators ``G \\ {1}``; relators ``a b c^-1`` for ``ab = c != 1`` and
    ``a b`` for ``ab = 1``.  Words are tuples of ``(element, +-1)``."""

    generators: tuple[int, ...]
    relators: tuple[tuple[tuple[int, int], ...], ...]


def trivial_presentation(G: FiniteGroupTable) -> TrivialPresentation:
    m = G.order
    rels = []
    for a in range(1, m):
        for b in range(1, m):
            c = G.mul(a, b)
            if c:
                rels.append(((a, 1), (b, 1), (c, -1)))
            else:
                rels.append(((a, 1), (b, 1)))
    return TrivialPresentation(tuple(range(1, m)), tuple(rels))


def trivial_group() -> FiniteGroupTable:
    return FiniteGroupTable(((0,),), "trivial")


def cyclic_group(m: int) -> FiniteGroupTable:
    if m < 1:
        raise GroupTableError("cyclic group order must be positive")
    return FiniteGroupTable(tuple(tuple((a + b) % m for b in range(m)) for a in range(m)), f"cyclic:{m}")


def symmetric_group(k: int) -> FiniteGroupTable:
    if k < 1:
        raise GroupTableError("symmetric group degree must be positive")
    elems = list(itertools.permutations(range(k)))  # identity first
    index = {p: i for i, p in enumerate(elems)}
    table = tuple(tuple(index[tuple(p[q[i]] for i in range(k))] for q in elems) for p in elems)
    return FiniteGroupTable(table, f"sym:{k}")


def parse_group(text: str) -> FiniteGroupTable:
    """``group <m>`` followed by ``m`` rows of ``m`` element indices."""
    lines = [(i, l) for i, l in enumerate(text.splitlines(), start=1)
             if l.strip() and not l.lstrip().startswith("%")]
    if not lines:
        raise ParseError("empty group file: missing 'group <m>' header", 1, 1)
    lineno, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "group" or not parts[1].isdigit():
        raise ParseError("expected header 'group <m>'", lineno, 1)
    m = int(parts[1])
    rows = []
    for lineno, line in lines[1:]:
        toks = line.split()
        try:
            rows.append(tuple(int(x) for x in toks))
        except ValueError:
            raise ParseError("expected integers", lineno, 1) from None
        if len(toks) != m:
            raise GroupTableError(f"line {lineno}: expected {m} entries, got {len(toks)}")
    if len(rows) != m:
        raise GroupTableError(f"expected {m} rows, got {len(rows)}")
    return FiniteGroupTable(tuple(rows), f"table:{m}")


def group_from_spec(spec: str) -> FiniteGroupTable:
    """Built-in names ``trivial``, ``cyclic:<m>``, ``sym:<k>``, or a path to a
    group file."""
    if spec == "trivial":
        return trivial_group()
    kind, _, arg = spec.partition(":")
    if kind in ("cyclic", "sym") and arg:
        if not arg.isdigit():
            raise GroupTableError(f"bad group spec {spec!r}")
        return cyclic_group(int(arg)) if kind == "cyclic" else symmetric_group(int(arg))
    try:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise GroupTableError(f"cannot read group file {spec!r}: {exc.strerror}") from None
    return parse_group(text)
