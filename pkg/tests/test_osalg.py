import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orliksolomon.exactfield import GF2, QQ
from orliksolomon.graph import bond_lattice, complete_graph, cycle_graph
from orliksolomon.osalg import build_os, exactness_check, merge_sign, os_dim_oracle
from orliksolomon.poset import boolean_lattice, truncate

from test_graph import graphs


def test_merge_sign():
    assert merge_sign((1,), (0,)) == (-1, (0, 1))
    assert merge_sign((0, 2), (1,)) == (-1, (0, 1, 2))
    assert merge_sign((0,), (0,)) == (0, None)


def test_k3_relation():
    # e_b e_c rewritten in the NBC basis of the partition lattice of [3]
    A = build_os(bond_lattice(complete_graph(3)))
    eb, ec = A.gen(1), A.gen(2)
    assert (eb * ec).terms == {(0, 1): -1, (0, 2): 1}
    assert A.gen(0).boundary() == A.one()
    assert (A.gen(0) * A.gen(1)).boundary() == A.gen(1) - A.gen(0)


def test_boolean_lattice_is_exterior_algebra():
    A = build_os(boolean_lattice(4))
    assert [len(A.degree_basis(k)) for k in range(5)] == [1, 4, 6, 4, 1]


@given(graphs(max_n=5), st.sampled_from([QQ, GF2]))
@settings(max_examples=40, deadline=None)
def test_nbc_count_is_mobius_and_oracle(G, F):
    L = bond_lattice(G)
    A = build_os(L, F)
    mu = L.mobius_row(L.bottom)
    for p in range(L.n):
        want = (-1) ** L.rank[p] * mu[p]
        assert A.dim(p) == want
        assert os_dim_oracle(L, p, F) == want


@given(graphs(max_n=5))
@settings(max_examples=30, deadline=None)
def test_exact_off_bottom(G):
    L = bond_lattice(G)
    A = build_os(L)
    for p in range(L.n):
        if p != L.bottom:
            assert exactness_check(A, p)


@given(graphs(max_n=4), st.data())
@settings(max_examples=40, deadline=None)
def test_product_is_associative_and_graded_commutative(G, data):
    A = build_os(bond_lattice(G))
    mons = [S for ms in A.basis().values() for S in ms]
    x, y, z = (A.element({data.draw(st.sampled_from(mons)): 1}) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    dx, dy = len(next(iter(x.terms))), len(next(iter(y.terms)))
    assert x * y == (y * x).scale((-1) ** (dx * dy))


@given(graphs(max_n=4), st.data())
@settings(max_examples=40, deadline=None)
def test_boundary_is_a_derivation(G, data):
    A = build_os(bond_lattice(G))
    mons = [S for ms in A.basis().values() for S in ms]
    S = data.draw(st.sampled_from(mons))
    Tm = data.draw(st.sampled_from(mons))
    x, y = A.element({S: 1}), A.element({Tm: 1})
    assert (x * y).boundary() == x.boundary() * y + (x * y.boundary()).scale((-1) ** len(S))


def test_interval_algebra_of_a_truncation():
    T = truncate(bond_lattice(cycle_graph(4)), 2)
    from orliksolomon.osalg import OSAlgebra
    for p in range(T.n):
        A = OSAlgebra(T, top=p)
        assert A.dim(p) == abs(T.mobius(T.bottom, p))


def test_oracle_guard():
    with pytest.raises(ValueError):
        os_dim_oracle(bond_lattice(complete_graph(5)), 51, max_atoms=5)
