"""Invariant suites behind ``orliksolomon check`` and a small graph corpus."""
from __future__ import annotations

import random
from typing import Callable, Dict, Iterator, List, Optional

from .exactfield import GF2, QQ
from .graph import SimpleGraph, bond_lattice, chromatic_poly_dc, chromatic_poly_mobius
from .poset import Verdict


def graphs_up_to(n: int, min_vertices: int = 1) -> Iterator[SimpleGraph]:
    """All simple graphs on at most n vertices (n <= 7), one per isomorphism class."""
    import networkx as nx
    if n > 7:
        raise ValueError("the graph atlas stops at 7 vertices")
    for H in nx.graph_atlas_g():
        k = H.number_of_nodes()
        if min_vertices <= k <= n:
            yield SimpleGraph(k, H.edges())


def random_betti(rng: random.Random, max_dim: int = 4, max_b: int = 3) -> List[int]:
    m = rng.randint(0, max_dim)
    return [1] + [rng.randint(0, max_b) for _ in range(m)]


def _mobius(seed: int, max_elements: Optional[int]) -> Verdict:
    from .osalg import build_os, os_dim_oracle
    for G in graphs_up_to(4):
        L = bond_lattice(G, max_elements)
        mu = L.mobius_row(L.bottom)
        for F in (QQ, GF2):
            A = build_os(L, F)
            for p in range(L.n):
                want = (-1) ** L.rank[p] * mu[p]
                if A.dim(p) != want or os_dim_oracle(L, p, F) != want:
                    return Verdict(False, "NBC count differs from the Mobius value", {"graph": G.to_json(), "p": p})
    return Verdict(True)


def _exactness(seed: int, max_elements: Optional[int]) -> Verdict:
    from .osalg import build_os, exactness_check
    for G in graphs_up_to(4):
        L = bond_lattice(G, max_elements)
        for F in (QQ, GF2):
            A = build_os(L, F)
            for p in range(L.n):
                if p != L.bottom:
                    v = exactness_check(A, p)
                    if not v:
                        return Verdict(False, "OS complex not exact", {"graph": G.to_json(), "p": p})
    return Verdict(True)


def _chromatic(seed: int, max_elements: Optional[int]) -> Verdict:
    for G in graphs_up_to(5):
        if chromatic_poly_dc(G) != chromatic_poly_mobius(G, max_elements=max_elements):
            return Verdict(False, "deletion-contraction and Mobius sum disagree", {"graph": G.to_json()})
    return Verdict(True)


def _presheaf(seed: int, max_elements: Optional[int]) -> Verdict:
    from .manifold import circle, cp1, euclidean
    from .presheaf import diagonal_presheaf, validate
    for M in (cp1("Q"), circle("GF2"), euclidean(2, "GF2")):
        for G in graphs_up_to(3, 2):
            v = validate(diagonal_presheaf(M, G, max_elements))
            if not v:
                return Verdict(False, v.reason, {"manifold": M.name, "graph": G.to_json(), **v.certificate})
    return Verdict(True)


def _complex(seed: int, max_elements: Optional[int]) -> Verdict:
    from .manifold import circle, cp1
    from .oscomplex import OSComplex, leibniz_check
    from .presheaf import diagonal_presheaf
    for M in (cp1("Q"), circle("GF2")):
        for G in graphs_up_to(3, 2):
            C = diagonal_presheaf(M, G, max_elements)
            K = OSComplex(C.poset, C)
            for v in (K.d_squared_check(), leibniz_check(K)):
                if not v:
                    return Verdict(False, v.reason, {"manifold": M.name, "graph": G.to_json()})
    return Verdict(True)


def _e1(seed: int, max_elements: Optional[int]) -> Verdict:
    from .chromatic import e1_poly_closed, e1_poly_direct
    from .manifold import from_betti
    rng = random.Random(seed)
    for _ in range(5):
        M = from_betti(random_betti(rng))
        for G in graphs_up_to(4):
            if e1_poly_closed(M, G) != e1_poly_direct(M, G, max_elements):
                return Verdict(False, "closed form differs from lattice sum", {"betti": M.betti, "graph": G.to_json()})
    return Verdict(True)


def _z2(seed: int, max_elements: Optional[int]) -> Verdict:
    from .chromatic import betti, poincare_z2, presentation
    from .manifold import euclidean, s1_times_r
    for M in (euclidean(2, "GF2"), s1_times_r("GF2")):
        for G in graphs_up_to(3, 2):
            pres = presentation(M, G)
            page = betti(M, G, ring=False, max_elements=max_elements)
            page_dims = {k: v for k, v in page.dims.items() if v}
            if not (pres.poincare() == poincare_z2(M, G) and pres.e2_dims() == page_dims):
                return Verdict(False, "formula, presentation and E2 page disagree",
                               {"manifold": M.name, "graph": G.to_json()})
    return Verdict(True)


def _hyperplane(seed: int, max_elements: Optional[int]) -> Verdict:
    from .hyperplane import (chamber_count_mobius, coordinate_arrangement, intersection_lattice,
                             lines_in_plane, random_arrangement, zaslavsky_f)
    arrs = [coordinate_arrangement(3), lines_in_plane(3), random_arrangement(6, 3, seed)]
    for A in arrs:
        L = intersection_lattice(A, max_elements=max_elements)
        f = zaslavsky_f(A, L)
        if f[-1] != chamber_count_mobius(L):
            return Verdict(False, "chamber count differs from the Mobius sum", {"arrangement": A.to_json()})
    return Verdict(True)


def _projective(seed: int, max_elements: Optional[int]) -> Verdict:
    from .chromatic import betti_projective
    from .graph import complete_graph
    from .manifold import cp1, elliptic_curve
    cases = [(cp1(), 2, [1, 0, 1]), (cp1(), 3, [1, 0, 0, 1]), (elliptic_curve(), 2, [1, 4, 5, 2])]
    for M, n, want in cases:
        got = betti_projective(M, complete_graph(n), ring=False).betti()
        if got != want:
            return Verdict(False, "Betti numbers differ", {"manifold": M.name, "n": n, "got": got})
    return Verdict(True)


SUITES: Dict[str, Callable[[int, Optional[int]], Verdict]] = {
    "mobius": _mobius,
    "exactness": _exactness,
    "chromatic": _chromatic,
    "presheaf": _presheaf,
    "complex": _complex,
    "e1": _e1,
    "z2": _z2,
    "hyperplane": _hyperplane,
    "projective": _projective,
}


def run_suite(name: str, seed: int = 0, max_elements: Optional[int] = None) -> Verdict:
    return SUITES[name](seed, max_elements)
