import random

import pytest
from hypothesis import given, strategies as st

from tridouble.snf import (
    AbelianGroup, cokernel, determinant, direct_sum, matmul, smith_normal_form, sparse_cokernel,
)

import oracles


def matrices(max_rows=6, max_cols=6, bound=5):
    return st.integers(1, max_rows).flatmap(lambda r: st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def test_diagonal_example():
    g = cokernel([[2, 0], [0, 3]])
    assert (g.free_rank, g.torsion) == (0, (6,))
    assert str(g) == "Z/6"


def test_zero_matrix():
    g = cokernel([[0, 0]] * 3)
    assert (g.free_rank, g.torsion) == (3, ())


def test_empty_matrix():
    assert cokernel([], rows=4) == AbelianGroup(4)
    assert sparse_cokernel(3, []) == AbelianGroup(3)


def test_rendering():
    assert str(AbelianGroup(0)) == "0"
    assert str(AbelianGroup(1)) == "Z"
    assert str(AbelianGroup(3, (2, 4))) == "Z^3 ⊕ Z/2 ⊕ Z/4"
    assert AbelianGroup(2, (2,)).to_json() == {"rank": 2, "torsion": [2]}


def test_invariant_factor_chain_enforced():
    with pytest.raises(ValueError):
        AbelianGroup(0, (4, 2))


def test_direct_sum_normalises():
    assert direct_sum(AbelianGroup(0, (2,)), AbelianGroup(1, (3,))) == AbelianGroup(1, (6,))
    assert AbelianGroup(0, (2,)) + AbelianGroup(0, (2,)) == AbelianGroup(0, (2, 2))


@given(matrices())
def test_witnesses(M):
    diag, U, V = smith_normal_form(M)
    D = matmul(matmul(U, M), V)
    rows, cols = len(M), len(M[0])
    for i in range(rows):
        for j in range(cols):
            assert D[i][j] == (diag[i] if i == j else 0)
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[len(nz):] == [0] * (len(diag) - len(nz))


@given(matrices())
def test_against_naive_oracle(M):
    rank, tors = oracles.coker_oracle(M, len(M))
    g = cokernel(M)
    assert (g.free_rank, list(g.torsion)) == (rank, tors)


@given(matrices(4, 4, 4))
def test_against_determinantal_divisors(M):
    d = [x for x in oracles.determinantal_divisors(M) if x > 1]
    assert list(cokernel(M).torsion) == d


@given(matrices(7, 7, 9))
def test_sparse_agrees_with_dense(M):
    rows, cols = len(M), len(M[0])
    rels = [{i: M[i][j] for i in range(rows) if M[i][j]} for j in range(cols)]
    assert sparse_cokernel(rows, rels) == cokernel(M)


def test_deterministic():
    rng = random.Random(5)
    M = [[rng.randint(-9, 9) for _ in range(7)] for _ in range(6)]
    assert smith_normal_form(M) == smith_normal_form([row[:] for row in M])


def test_big_entries_exact():
    M = [[10 ** 30, 0], [0, 10 ** 30 + 1]]
    g = cokernel(M)
    assert g.torsion == (10 ** 30 * (10 ** 30 + 1),)
