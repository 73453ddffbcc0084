import functools
import itertools
import random
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from tridouble.census import (
    automorphism_group, automorphisms, canonical_form, enumerate_census, is_isomorphic, relabelings,
    signature,
)
from tridouble.geometry import volume_report
from tridouble.homology import h1_double
from tridouble.triangulation import (
    PERMS, Triangulation, edge_classes, is_manifold, random_triangulation, vertex_links,
)

import oracles
from shared import as_dict, census, fig1


@functools.lru_cache(maxsize=None)
def orbit_census(n):
    return oracles.orbit_census(n)


def _from_dict(n, g):
    return Triangulation.from_pairs(n, [(t, f, t2, f2, p) for (t, f), (t2, f2, p) in g.items()
                                        if (t, f) < (t2, f2)])


def _shuffle(T, rng):
    tp = list(range(T.n))
    rng.shuffle(tp)
    return T.relabel(tp, [rng.choice(PERMS) for _ in range(T.n)])


@pytest.mark.parametrize("n", [1, 2])
def test_counts_match_orbit_oracle(n):
    members = census(n)
    classes = orbit_census(n)
    assert len(members) == len(classes)
    assert {signature(T) for T in members} == {signature(_from_dict(n, g)) for g, _ in classes}


def test_census_one_count():
    assert len(census(1)) == 11


@pytest.mark.parametrize("n", [1, 2])
def test_signatures_idempotent_distinct_sorted(n):
    sigs = [signature(T) for T in census(n)]
    assert len(set(sigs)) == len(sigs)
    assert sigs == sorted(sigs)
    for T, s in zip(census(n), sigs):
        cf = canonical_form(T)
        assert cf.representative == T
        assert canonical_form(cf.representative).signature == s


def test_fig1_in_census():
    assert signature(fig1()) in {signature(T) for T in census(2)}


def test_fig1_relabelings_share_signature():
    rng = random.Random(3)
    s = signature(fig1())
    for _ in range(10):
        assert signature(_shuffle(fig1(), rng)) == s


def test_signature_vs_backtracking_n1():
    members = census(1)
    for a, b in itertools.product(range(len(members)), repeat=2):
        same = oracles.backtrack_isomorphic(1, as_dict(members[a]), as_dict(members[b]))
        assert same == (a == b)


@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_isomorphism_witness(n, seed):
    rng = random.Random(seed)
    T = random_triangulation(n, rng)
    U = _shuffle(T, rng)
    iso = is_isomorphic(T, U)
    assert iso is not None
    assert iso.is_valid(T, U)
    assert iso.apply(T) == U
    assert oracles.backtrack_isomorphic(n, as_dict(T), as_dict(U))


def test_different_valences_not_isomorphic():
    a, b = census(2)[0], fig1()
    assert sorted(e.valence for e in edge_classes(a)) != sorted(e.valence for e in edge_classes(b))
    assert is_isomorphic(a, b) is None


def test_fig1_automorphisms():
    rep = automorphisms(fig1())
    assert rep.aut_order == oracles.count_automorphisms(2, as_dict(fig1())) == 48
    assert rep.isom_order == 96
    assert all(g.is_valid(fig1(), fig1()) for g in rep.aut_generators)
    assert rep.exceptional_flag is False and rep.valid


@pytest.mark.parametrize("n", [1, 2])
def test_aut_order_against_relabeling_count(n):
    for T in census(n):
        k = automorphisms(T).aut_order
        assert k == oracles.count_automorphisms(n, as_dict(T))
        assert (24 ** n * (1 if n == 1 else 2)) % k == 0


def test_aut_generators_generate():
    T = fig1()
    rep = automorphisms(T)
    key = lambda a: (a.tet_perm, a.vertex_perms)
    elems = {key(g): g for g in rep.aut_generators}
    frontier = list(elems.values())
    while frontier:
        x = frontier.pop()
        for g in rep.aut_generators:
            y = g.compose(x)
            if key(y) not in elems:
                elems[key(y)] = y
                frontier.append(y)
    assert len(elems) == rep.aut_order


def test_colour_refinement_path():
    # n > 8 switches on the colour-class search; compare with a relabeled copy
    rng = random.Random(11)
    for _ in range(3):
        T = random_triangulation(10, rng)
        U = _shuffle(T, rng)
        assert len(automorphism_group(T)) == len(automorphism_group(U))
        for a in automorphism_group(T):
            assert a.is_valid(T, T)


def test_relabelings_count():
    assert sum(1 for _ in relabelings(1)) == 24
    assert sum(1 for _ in relabelings(2)) == 2 * 24 ** 2


@given(st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
def test_invariants_constant_on_classes(n, seed):
    rng = random.Random(seed)
    T = random_triangulation(n, rng)
    U = _shuffle(T, rng)
    prof = lambda X: sorted((e.valence, e.orientable) for e in edge_classes(X))
    links = lambda X: sorted((l.euler_characteristic, l.orientable) for l in vertex_links(X))
    assert prof(T) == prof(U)
    assert links(T) == links(U)
    assert h1_double(T) == h1_double(U)
    vT, vU = volume_report(T), volume_report(U)
    assert sorted(vT.cusp_horoball_volumes) == sorted(vU.cusp_horoball_volumes)
    assert replace(vT, cusp_horoball_volumes=()) == replace(vU, cusp_horoball_volumes=())
    assert automorphisms(T).aut_order == automorphisms(U).aut_order


def test_filter_and_order():
    res = enumerate_census(2, filter=lambda T: is_manifold(T)[0])
    assert [cf.representative for cf in res] == [T for T in census(2) if is_manifold(T)[0]]


def test_parallel_matches_serial():
    a = [cf.signature for cf in enumerate_census(2, jobs=2)]
    assert a == [signature(T) for T in census(2)]


def test_truncation_is_reported():
    res = enumerate_census(2, max_nodes=3)
    assert res.truncated
    assert len(res) < 173


def test_bad_n():
    with pytest.raises(ValueError):
        enumerate_census(0)
