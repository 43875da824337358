import copy

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orliksolomon.exactfield import GF2, QQ
from orliksolomon.graph import bond_lattice, complete_graph, path_graph
from orliksolomon.laurent import T
from orliksolomon.manifold import circle, cp1, elliptic_curve, euclidean, from_betti, s1_times_r
from orliksolomon.presheaf import (ExplicitPresheaf, GradedSpace, PresheafError, constant_presheaf,
                                   diagonal_presheaf, presheaf_from_json, skyscraper, validate)

from test_graph import graphs

A2 = GradedSpace([0, 1], ["x", "y"])


def test_skyscraper_supports():
    L = bond_lattice(complete_graph(3))
    at_bottom = skyscraper(L, L.bottom, A2)
    assert [at_bottom.dim(p) for p in range(L.n)] == [2, 0, 0, 0, 0]
    const = skyscraper(L, L.top, A2)
    assert all(const.dim(p) == 2 for p in range(L.n))
    a = L.atoms[0]
    sky = skyscraper(L, a, A2)
    assert sky.map(a, L.bottom) == [[1, 0], [0, 1]]
    assert validate(sky) and validate(const)


def test_corrupted_cover_map_is_caught():
    L = bond_lattice(complete_graph(3))
    C = skyscraper(L, L.top, A2)
    maps = copy.deepcopy(C.maps)
    a = L.atoms[0]
    maps[L.top, a] = [[1, 0], [0, 2]]
    bad = ExplicitPresheaf(L, QQ, C.spaces, maps)
    v = validate(bad)
    assert not v
    assert v.certificate["from"] == L.top


def test_degree_mixing_map_is_caught():
    L = bond_lattice(complete_graph(2))
    C = ExplicitPresheaf(L, QQ, {0: A2, 1: A2}, {(1, 0): [[0, 1], [0, 0]]})
    assert not validate(C)


def test_cp1_cover_map_on_k2():
    C = diagonal_presheaf(cp1(), complete_graph(2))
    # u (x) 1 -> 1 (x) w + w (x) 1 and u (x) w -> w (x) w
    assert C.space(1).labels == ["u[1]", "u[w]"]
    assert C.space(0).labels == ["u[1][1]", "u[1][w]", "u[w][1]", "u[w][w]"]
    assert C.cover_map(1, 0) == [[0, 0], [1, 0], [1, 0], [0, 1]]


def test_zero_diagonal_gives_zero_maps():
    C = diagonal_presheaf(s1_times_r(), complete_graph(3))
    L = C.poset
    for q in range(L.n):
        for p in L.upper_covers[q]:
            assert not any(x for row in C.cover_map(p, q) for x in row)


def test_thom_products():
    C = diagonal_presheaf(euclidean(2), complete_graph(3))
    L = C.poset
    a, b = L.atoms[:2]
    assert C.product(a, 0, b, 0) == {(L.top, 0): 1}
    assert C.product(a, 0, a, 0) == {}


def test_self_product_carries_euler_class_when_diagonal_is_nonzero():
    C = diagonal_presheaf(cp1(), complete_graph(2))
    # u^2 = u * e(TM) = 2 u (x) w
    assert C.product(1, 0, 1, 0) == {(1, 1): 2}


@pytest.mark.parametrize("M", [cp1("Q"), circle("GF2"), euclidean(2, "GF2"), elliptic_curve("Q")],
                         ids=lambda M: M.name)
@pytest.mark.parametrize("G", [complete_graph(2), complete_graph(3), path_graph(3)], ids=["K2", "K3", "P3"])
def test_diagonal_presheaf_validates(M, G):
    v = validate(diagonal_presheaf(M, G))
    assert v, (v.reason, v.certificate)


@given(graphs(max_n=4), st.lists(st.integers(0, 2), min_size=2, max_size=3))
@settings(max_examples=25, deadline=None)
def test_grading_matches_thom_shift(G, tail):
    M = from_betti([1] + tail[:-1] + [tail[-1]], field="GF2")
    C = diagonal_presheaf(M, G)
    L = C.poset
    for p in range(L.n):
        assert C.poincare(p) == T ** (M.real_dim * L.rank[p]) * M.poincare() ** len(L.labels[p])


def test_projective_composites_are_path_independent():
    C = diagonal_presheaf(cp1(), complete_graph(4))
    L = C.poset
    v = validate(C, exhaustive=False, samples=300, seed=3)
    assert v
    assert any(x for row in C.map(L.top, L.bottom) for x in row)


def test_odd_dimension_over_q_is_refused():
    with pytest.raises(PresheafError):
        diagonal_presheaf(circle("Q"), complete_graph(2))


def test_generic_json_round_trip():
    L = bond_lattice(complete_graph(3))
    C = constant_presheaf(L)
    again = presheaf_from_json(C.to_json())
    assert validate(again)
    assert again.maps == C.maps
    assert again.product(1, 0, 2, 0) == C.product(1, 0, 2, 0)
