"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py`` (lines go to stdout).
"""
import random
import sys
import time
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from orliksolomon.chromatic import (betti, betti_projective, e1_poly_closed, e1_poly_direct, euler_char,
                                    poincare_z2, presentation)
from orliksolomon.exactfield import GF2, QQ
from orliksolomon.graph import (SimpleGraph, bond_lattice, chromatic_poly_dc, chromatic_poly_mobius,
                                complete_graph, contract, count_colorings, delete)
from orliksolomon.hyperplane import (braid_arrangement, chamber_count_mobius, complex_poincare,
                                     coordinate_arrangement, intersection_lattice, lines_in_plane,
                                     random_arrangement, zaslavsky_f)
from orliksolomon.laurent import S, T, LaurentPoly2
from orliksolomon.manifold import circle, cp1, elliptic_curve, euclidean, from_betti, s1_times_r
from orliksolomon.osalg import build_os, exactness_check, os_dim_oracle
from orliksolomon.oscomplex import OSComplex, dg1_generation_check, leibniz_check, page_from_json
from orliksolomon.poset import check_locally_geometric, induced
from orliksolomon.presheaf import GradedSpace, diagonal_presheaf, skyscraper
from orliksolomon.suites import graphs_up_to

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # pragma: no cover
    ACCEPTANCE_LINES = []

SEED = 20240601


def record(n: int, title: str, ok: bool, elapsed: float, limit: float = None, detail: str = ""):
    in_time = limit is None or elapsed < limit
    passed = ok and in_time
    budget = f" (limit {limit:.0f}s)" if limit is not None else ""
    note = "" if in_time else " [over time budget]"
    line = f"{'PASS' if passed else 'FAIL'} criterion {n:2d}: {title} [{elapsed:.2f}s{budget}]{note}"
    if detail:
        line += f" -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


# pages computed for the pipelines are shared with the Euler-characteristic and
# degeneration criteria
@lru_cache(maxsize=None)
def _page(mkey, field, gkey, ring=True):
    M = {"R2": euclidean(2, field), "S1xR": s1_times_r(field), "CP1": cp1(field), "E": elliptic_curve(field),
         "S1": circle(field)}[mkey]
    G = SimpleGraph(*gkey)
    if mkey in ("CP1", "E") and field == "Q":
        return M, G, betti_projective(M, G, ring=ring)
    return M, G, betti(M, G, ring=ring)


def small_graphs(n, lo=1):
    return list(graphs_up_to(n, lo))


def test_criterion_01_mobius_dimension_identity():
    t = time.time()
    bad = []
    checked = 0
    for G in small_graphs(5):
        L = bond_lattice(G)
        mu = L.mobius_row(L.bottom)
        for F in (QQ, GF2):
            A = build_os(L, F)
            for p in range(L.n):
                want = (-1) ** L.rank[p] * mu[p]
                checked += 1
                if not (A.dim(p) == os_dim_oracle(L, p, F) == want):
                    bad.append((G, p, F.name))
    ok = record(1, "NBC count = brute-force quotient dim = (-1)^r mu, all graphs <= 5 vertices, Q and GF2",
                not bad, time.time() - t, 60, f"{checked} (graph, p, field) checks, {len(bad)} mismatches")
    assert ok, bad[:3]


def test_criterion_02_exactness():
    t = time.time()
    bad = []
    for G in small_graphs(5):
        L = bond_lattice(G)
        for F in (QQ, GF2):
            A = build_os(L, F)
            for p in range(L.n):
                if p != L.bottom and not exactness_check(A, p):
                    bad.append((G, p, F.name))
    ok = record(2, "H(A*([0,p]), d) = 0 for p != 0, same corpus", not bad, time.time() - t, 60,
                f"{len(bad)} failures")
    assert ok, bad[:3]


def test_criterion_03_chromatic_identity():
    t = time.time()
    graphs6 = small_graphs(6)
    bad = [G for G in graphs6 if chromatic_poly_dc(G) != chromatic_poly_mobius(G)]
    bad_counts = [(G, k) for G in small_graphs(5) for k in range(5)
                  if chromatic_poly_dc(G)(t=k) != count_colorings(G, k)]
    ok = record(3, "deletion-contraction = Mobius sum (<= 6 vertices); chi_G(k) = colourings (n <= 5, k <= 4)",
                not bad and not bad_counts, time.time() - t,
                detail=f"{len(graphs6)} graphs, {len(bad)} + {len(bad_counts)} mismatches")
    assert ok


def _skyscraper_sweep(P, A):
    failures = 0
    cases = 0
    want_here = {(0, d): c for d, c in A.dims.items()}
    for p in range(P.n):
        U, _ = induced(P, [x for x in range(P.n) if P.leq(p, x)], p)
        for alpha in range(U.n):
            page = __import__("orliksolomon.oscomplex", fromlist=["homology"]).homology(
                OSComplex(U, skyscraper(U, alpha, A)))
            got = {k: v for k, v in page.dims.items() if v}
            cases += 1
            if got != (want_here if alpha == U.bottom else {}):
                failures += 1
    return cases, failures


def test_criterion_04_skyscraper_homology():
    t = time.time()
    rng = random.Random(SEED)
    A = GradedSpace([0, 1, 1], ["a", "b", "c"])
    posets = [bond_lattice(G) for G in small_graphs(4)]
    pairs = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    for _ in range(5):
        posets.append(bond_lattice(SimpleGraph(5, rng.sample(pairs, rng.randint(3, 8)))))
    for s in range(3):
        posets.append(intersection_lattice(random_arrangement(20, 4, seed=SEED + s), max_rank=2))
    geometric = all(check_locally_geometric(P) for P in posets)
    cases = failures = 0
    for P in posets:
        c, f = _skyscraper_sweep(P, A)
        cases += c
        failures += f
    ok = record(4, "sky-scraper homology on [p, oo) is A at column 0 iff alpha = p, else 0",
                geometric and failures == 0, time.time() - t,
                detail=f"{len(posets)} posets (bond lattices + 20-hyperplane rank-2 truncations), "
                       f"{cases} (p, alpha) pairs, {failures} failures")
    assert ok


def test_criterion_05_leibniz_and_d_squared():
    t = time.time()
    manifolds = [cp1("Q"), euclidean(2, "GF2"), s1_times_r("GF2"), circle("GF2")]
    bad = []
    pairs = 0
    for G in small_graphs(4):
        for M in manifolds:
            C = diagonal_presheaf(M, G)
            K = OSComplex(C.poset, C)
            ncells = sum(len(c) for c in K.cells.values())
            pairs += ncells * ncells
            for v in (K.d_squared_check(), leibniz_check(K)):
                if not v:
                    bad.append((M.name, G, v.reason))
    ok = record(5, "Leibniz rule and d^2 = 0, all graphs <= 4 vertices, Q (CP1) and GF2 (R2, S1xR, S1)",
                not bad, time.time() - t, 120, f"{pairs} basis pairs, {len(bad)} failures")
    assert ok, bad[:3]


def test_criterion_06_two_variable_polynomial():
    t = time.time()
    rng = random.Random(SEED)
    vectors = []
    while len(vectors) < 20:
        m = rng.randint(0, 4)
        vectors.append([1] + [rng.randint(0, 3) for _ in range(m)])
    graphs5 = small_graphs(5)
    bad = []
    for b in vectors:
        M = from_betti(b)
        for G in graphs5:
            P = e1_poly_closed(M, G)
            if P != e1_poly_direct(M, G):
                bad.append(("direct", b, G))
            for e in G.sorted_edges:
                if P != e1_poly_closed(M, delete(G, e)) + S ** -1 * T ** M.real_dim * e1_poly_closed(M, contract(G, e)):
                    bad.append(("dc", b, G, e))
    ok = record(6, "e1_poly_closed = e1_poly_direct and deletion-contraction, graphs <= 5, 20 Betti vectors",
                not bad, time.time() - t, detail=f"{len(graphs5) * len(vectors)} (M, G) pairs, {len(bad)} failures")
    assert ok, bad[:3]


def test_criterion_07_classical_configuration_spaces():
    t = time.time()
    bad = []
    for m in (2, 3):
        for n in range(1, 6):
            want = LaurentPoly2.const(1)
            for k in range(1, n):
                want = want * (1 + k * T ** (m - 1))
            if poincare_z2(euclidean(m), complete_graph(n)) != want:
                bad.append((m, n))
    ok = record(7, "poincare_z2(R^m, K_n) = prod (1 + k t^(m-1)), n <= 5, m in {2, 3}", not bad,
                time.time() - t, 10)
    assert ok, bad


def test_criterion_08_triple_agreement():
    t = time.time()
    bad = []
    count = 0
    for G in small_graphs(4):
        for mkey in ("R2", "S1xR"):
            M, _, page = _page(mkey, "GF2", G.key())
            pres = presentation(M, G)
            count += 1
            if not (poincare_z2(M, G) == pres.poincare() == page.poincare()
                    and pres.e2_dims() == {k: v for k, v in page.dims.items() if v}):
                bad.append((mkey, G))
    ok = record(8, "poincare_z2 = presentation dims = GF2 E2 dims, graphs <= 4, M in {R2, S1xR}",
                not bad, time.time() - t, detail=f"{count} cases, {len(bad)} disagreements")
    assert ok, bad[:3]


@pytest.mark.parametrize("mkey,n,want", [("CP1", 2, [1, 0, 1]), ("CP1", 3, [1, 0, 0, 1]), ("E", 2, [1, 4, 5, 2])])
def test_criterion_09_projective_pipeline(mkey, n, want):
    t = time.time()
    M, G, page = _page(mkey, "Q", complete_graph(n).key())
    ok = page.betti() == want and page.collapse == "guaranteed"
    detail = f"Betti {tuple(page.betti())}, collapse {page.collapse}"
    if (mkey, n) == ("CP1", 2):
        ok = ok and page.weight_table().get(2) == {2: 1}
        detail += f", weights {page.weight_table()}"
    ok = record(9, f"betti_projective({mkey}, K{n}) = {tuple(want)}", ok, time.time() - t, 30, detail)
    assert ok


def test_criterion_10_zaslavsky():
    t = time.time()
    checks = [zaslavsky_f(coordinate_arrangement(3)) == [1, 6, 12, 8]]
    checks += [zaslavsky_f(lines_in_plane(n)) == [1, 2 * n, 2 * n] for n in (2, 3, 4)]
    arrs = [coordinate_arrangement(3), braid_arrangement(3), braid_arrangement(4)]
    arrs += [lines_in_plane(n) for n in (2, 3, 4)]
    arrs += [random_arrangement(k, d, seed=SEED + k) for k in range(1, 9) for d in (2, 3, 4)]
    for A in arrs:
        L = intersection_lattice(A)
        checks.append(zaslavsky_f(A, L)[-1] == chamber_count_mobius(L))
    ok = record(10, "zaslavsky_f examples and chambers = sum |mu| on all tested arrangements", all(checks),
                time.time() - t, detail=f"{len(arrs)} arrangements")
    assert ok


def test_criterion_11_complex_poincare():
    t = time.time()
    P = complex_poincare(braid_arrangement(3))
    ok = P == (1 + T) * (1 + 2 * T) == poincare_z2(euclidean(2), complete_graph(3))
    for n in range(2, 5):
        ok = ok and complex_poincare(braid_arrangement(n)).substitute(T ** 2) == poincare_z2(euclidean(3), complete_graph(n))
    ok = record(11, "complex_poincare(braid C^3) = (1+t)(1+2t) = poincare_z2(R2, K3); t -> t^2 matches R3",
                ok, time.time() - t, detail=P.to_str())
    assert ok


def test_criterion_12_euler_characteristic():
    t = time.time()
    bad = []
    compact_support_ok = []
    count = 0
    for m in (2, 3):
        for n in range(1, 6):
            G = complete_graph(n)
            count += 1
            P = poincare_z2(euclidean(m), G)
            if P(t=-1) != euler_char(euclidean(m), G):
                bad.append(("poincare_z2", m, n))
                # compactly supported form, chi_c(R^m) = (-1)^m and chi_c(F) = (-1)^(mn) chi(F)
                if (-1) ** (m * n) * P(t=-1) == chromatic_poly_dc(G)(t=(-1) ** m):
                    compact_support_ok.append((m, n))
    for G in small_graphs(4):
        for mkey, field in (("R2", "GF2"), ("S1xR", "GF2"), ("CP1", "Q"), ("S1", "GF2"), ("CP1", "GF2")):
            M, _, page = _page(mkey, field, G.key())
            count += 2
            if page.euler_char() != euler_char(M, G) or page.poincare()(t=-1) != euler_char(M, G):
                bad.append((mkey, field, G))
    for n in (2, 3):
        M, G, page = _page("E", "Q", complete_graph(n).key())
        count += 1
        if page.euler_char() != euler_char(M, G):
            bad.append(("E", n))
    for n in range(2, 5):
        count += 1
        if complex_poincare(braid_arrangement(n))(t=-1) != euler_char(euclidean(2), complete_graph(n)):
            bad.append(("braid", n))
    ok = record(12, "t = -1 evaluations and E2 alternating sums equal chi_G(chi(M))", not bad,
                time.time() - t, detail=f"{count} evaluations, {len(bad)} mismatches {bad}; "
                       f"{len(compact_support_ok)} of them satisfy chi_c(F) = chi_G(chi_c(M))")
    assert ok, bad[:3]


def test_criterion_13_degeneration_detection():
    t = time.time()
    results = []
    for G in small_graphs(4):
        for mkey in ("R2", "S1xR"):
            _, _, page = _page(mkey, "GF2", G.key())
            results.append(dg1_generation_check(page))
    control = page_from_json({
        "dims": [{"col": 0, "row": 0, "dim": 1}, {"col": -2, "row": 4, "dim": 1}],
        "product_table": [{"a": [0, 0, 0], "b": [0, 0, 0], "out": [[1, [0, 0, 0]]]}]})
    negative = dg1_generation_check(control)
    ok = record(13, "dg1_generation_check true on GF2 zero-diagonal pages, false on the isolated-class control",
                all(results) and not negative, time.time() - t,
                detail=f"{sum(results)}/{len(results)} pages generated in columns 0, -1; control -> {negative}")
    assert ok


if __name__ == "__main__":
    failures = 0
    tests = [(name, fn) for name, fn in sorted(globals().items()) if name.startswith("test_criterion_")]
    for name, fn in tests:
        if name == "test_criterion_09_projective_pipeline":
            for args in [("CP1", 2, [1, 0, 1]), ("CP1", 3, [1, 0, 0, 1]), ("E", 2, [1, 4, 5, 2])]:
                try:
                    fn(*args)
                except AssertionError:
                    failures += 1
            continue
        try:
            fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
