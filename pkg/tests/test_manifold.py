import json

import pytest

from orliksolomon.laurent import LaurentPoly2
from orliksolomon.manifold import (ManifoldError, circle, cp1, cpn, elliptic_curve, euclidean, from_betti,
                                   manifold_from_json, s1_times_r, sphere, surface)

BUILTINS = [cp1("Q"), cp1("GF2"), cpn(2), elliptic_curve("Q"), elliptic_curve("GF2"), surface(2),
            euclidean(2), euclidean(3), circle("GF2"), s1_times_r("GF2"), sphere(4)]


@pytest.mark.parametrize("M", BUILTINS, ids=lambda M: f"{M.name}-{M.field.name}")
def test_builtins_validate(M):
    v = M.validate()
    assert v, (v.reason, v.certificate)


@pytest.mark.parametrize("M", BUILTINS, ids=lambda M: f"{M.name}-{M.field.name}")
def test_json_round_trip(M):
    again = manifold_from_json(json.dumps(M.to_json()))
    assert again.betti == M.betti
    assert again.cup == M.cup
    assert (again.diagonal_class or {}) == (M.diagonal_class or {})


def test_euler_class_of_projective_curves():
    assert cp1().euler_class() == {1: 2}
    assert elliptic_curve().euler_class() == {}
    assert surface(2).euler_class() == {5: -2}


def test_asymmetric_diagonal_is_rejected():
    M = cp1()
    M.diagonal_class = {(1, 0): 1}
    assert not M.validate()


def test_wrong_euler_class_is_rejected():
    bad = manifold_from_json({**cp1().to_json(), "diagonal_class": [[2, "w", "1"], [2, "1", "w"]]})
    v = bad.validate()
    assert not v and "chi" in v.reason


def test_non_commutative_cup_is_rejected():
    data = elliptic_curve().to_json()
    data["cup"] = [{"i": "a1", "j": "b1", "out": [[1, "w"]]}, {"i": "b1", "j": "a1", "out": [[1, "w"]]}]
    assert not manifold_from_json(data).validate()


def test_betti_mismatch_and_unknown_names():
    with pytest.raises(ManifoldError):
        manifold_from_json({"real_dim": 2, "betti": [1, 1, 1], "basis": [{"name": "1", "deg": 0}]})
    with pytest.raises(ManifoldError):
        manifold_from_json({"real_dim": 2, "basis": [{"name": "1", "deg": 0}],
                            "cup": [{"i": "x", "j": "1", "out": []}]})


def test_poincare_and_euler_characteristic():
    M = from_betti([1, 2, 3])
    assert M.poincare() == LaurentPoly2.from_t_coeffs([1, 2, 3])
    assert M.euler_char() == 2
    assert elliptic_curve().euler_char() == 0


def test_koszul_sign_in_tensor_product():
    E = elliptic_curve()
    a, b = E.index("a1"), E.index("b1")
    # (a (x) 1)(1 (x) b) = a (x) b, while (1 (x) b)(a (x) 1) = -a (x) b
    assert E.tensor_mul({(a, 0): 1}, {(0, b): 1}) == {(a, b): 1}
    assert E.tensor_mul({(0, b): 1}, {(a, 0): 1}) == {(a, b): -1}
    # restricting a (x) b to the diagonal gives ab = w
    assert E.regroup({(a, b): 1}, [0, 0], 1) == {(E.index("w"),): 1}
    assert E.regroup({(b, a): 1}, [0, 0], 1) == {(E.index("w"),): -1}
