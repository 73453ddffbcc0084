import functools

import pytest

from tridouble.census import automorphism_group
from tridouble.errors import DomainError, ResourceLimitError, VerificationError
from tridouble.group_builder import (
    MarkedPolyhedron, add_curls, bubble_all, build_Q, check_lambda, deck_transformations, lambda_,
    predicted_curled_size, realize_group, universal_cover,
)
from tridouble.groups import cyclic_group, group_from_spec, symmetric_group, trivial_group
from tridouble.homology import abelianized_pi1
from tridouble.snf import AbelianGroup
from tridouble.spine import build_spine

from shared import realized


@functools.lru_cache(maxsize=None)
def stages(spec):
    G = group_from_spec(spec)
    Q = build_Q(G)
    Q1 = bubble_all(Q)
    Q2 = add_curls(Q1)
    return G, Q, Q1, Q2


def test_trivial_spine():
    G, Q, Q1, Q2 = stages("trivial")
    assert Q.num_vertices == 1
    assert abelianized_pi1(Q.polyhedron) == AbelianGroup(0)


@pytest.mark.parametrize("spec", ["cyclic:2", "cyclic:3", "cyclic:4", "sym:3"])
def test_spine_fundamental_group(spec):
    G = group_from_spec(spec)
    S = build_spine(G)
    assert abelianized_pi1(S.polyhedron) == G.abelianization()
    m = G.order
    assert all(v == 3 * m - 4 for v in S.handle_passages.values())


def test_z2_spine_shape():
    G, Q, _, _ = stages("cyclic:2")
    assert abelianized_pi1(Q.polyhedron) == AbelianGroup(0, (2,))
    # a single relator aa crossing itself once
    assert Q.info["crossings"] == Q.info["self_crossings"] == 1
    assert Q.num_vertices == 3


def test_z3_constant_reported():
    G, Q, _, _ = stages("cyclic:3")
    k = Q.info["k_realized"]
    assert Q.num_vertices <= k * 3 ** 4 + 1e-9
    assert Q.num_vertices == 16


@pytest.mark.parametrize("spec", ["trivial", "cyclic:2", "cyclic:3"])
def test_bubble(spec):
    G, Q, Q1, _ = stages(spec)
    assert Q1.num_vertices == 5 * Q.num_vertices
    assert Q1.bad_vertices() == []
    assert Q1.polyhedron.bad_vertices() == []
    assert abelianized_pi1(Q1.polyhedron) == abelianized_pi1(Q.polyhedron)


@pytest.mark.parametrize("spec", ["trivial", "cyclic:2"])
def test_curls(spec):
    G, Q, Q1, Q2 = stages(spec)
    c = Q1.num_vertices
    nu = 2 * c
    assert Q2.num_vertices == 2 * c * (c + 1) == predicted_curled_size(c)
    bad = Q2.bad_vertices()
    assert len(bad) == nu * (nu + 1) // 2
    # the old vertices stay good; every bad vertex is a new curl
    assert min(bad) == c
    assert abelianized_pi1(Q2.polyhedron) == abelianized_pi1(Q1.polyhedron)


def test_curls_need_good_vertices():
    _, Q, _, _ = stages("trivial")
    assert Q.bad_vertices() == [0]
    with pytest.raises(DomainError):
        add_curls(Q)


def test_resource_limit():
    with pytest.raises(ResourceLimitError) as exc:
        realize_group(symmetric_group(3))
    assert exc.value.stage == "curls"
    _, _, Q1, _ = stages("cyclic:2")
    with pytest.raises(ResourceLimitError):
        add_curls(Q1, max_vertices=100)


def test_lambda_recovers_curl_counts():
    _, _, Q1, Q2 = stages("cyclic:2")
    T1 = Q1.triangulation
    for k, (t, f, t2, f2, p) in enumerate(T1.face_pairs()):
        assert lambda_(Q2, t, f) == k + 1
        assert lambda_(Q2, t2, f2) == k + 1
    assert check_lambda(Q2)


def test_lambda_on_bad_vertex():
    _, _, _, Q2 = stages("cyclic:2")
    with pytest.raises(DomainError):
        lambda_(Q2, Q2.bad_vertices()[0], 0)


def test_lambda_without_curls():
    _, _, Q1, _ = stages("cyclic:2")
    # no bad neighbours: the path cannot leave v
    assert all(lambda_(Q1, 0, f) == 0 for f in range(4))


def test_lambda_automorphism_invariant():
    _, _, _, Q2 = stages("cyclic:2")
    T = Q2.triangulation
    good = [t for t in range(T.n) if not Q2.bad[t]]
    for a in automorphism_group(T):
        for v in good:
            for f in range(4):
                assert lambda_(Q2, a.tet_perm[v], a.vertex_perms[v][f]) == lambda_(Q2, v, f)


@pytest.mark.parametrize("spec", ["cyclic:2"])
def test_cover(spec):
    G, _, _, Q2 = stages(spec)
    P = universal_cover(Q2, G)
    m = G.order
    assert P.num_vertices == m * Q2.num_vertices
    assert P.polyhedron.euler_characteristic == m * Q2.polyhedron.euler_characteristic
    assert abelianized_pi1(P.polyhedron) == AbelianGroup(0)
    decks = deck_transformations(P)
    assert len(decks) == m
    assert all(d.is_valid(P.triangulation, P.triangulation) for d in decks)
    assert check_lambda(P)


def test_cover_needs_generating_voltages():
    G, _, _, Q2 = stages("cyclic:2")
    flat = MarkedPolyhedron(Q2.triangulation, G, (0,) * len(Q2.voltages), "Q''")
    with pytest.raises(VerificationError):
        universal_cover(flat, G)


def test_voltage_inverse_pairs():
    for spec in ("cyclic:2", "cyclic:3"):
        for X in stages(spec)[1:]:
            X.check_voltages()


@pytest.mark.parametrize("spec,m", [("trivial", 1), ("cyclic:2", 2)])
def test_realize(spec, m):
    T, rep = realized(spec)
    sc = rep.stage_counts
    assert rep.aut_order == m
    assert sc["Q'"] == 5 * sc["Q"]
    assert sc["Q''"] == 2 * sc["Q'"] * (sc["Q'"] + 1)
    assert sc["P"] == m * sc["Q''"] == T.n
    assert rep.k_P * m ** 9 == pytest.approx(sc["P"])
    assert rep.vol_D == pytest.approx(2 * sc["P"] * 3.663862376708876)
    assert set(rep.abelianized.values()) == {group_from_spec(spec).abelianization()}
