"""Pipelines for chromatic configuration spaces F(M, G)."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import networkx as nx

from .exactfield import GF2, QQ, rank
from .graph import SimpleGraph, bond_lattice, chromatic_poly_dc
from .laurent import LaurentPoly2, S, T
from .manifold import ManifoldData
from .oscomplex import E2Page, OSComplex, dg1_generation_check, e2_ring, homology
from .osalg import build_os
from .poset import Verdict
from .presheaf import diagonal_presheaf


class PipelineError(ValueError):
    pass


def e1_poly_closed(M: ManifoldData, G: SimpleGraph) -> LaurentPoly2:
    """(-1)^n s^-n t^(mn) chi_G(-P(M,t) s t^-m)."""
    n, m = G.n, M.real_dim
    x = -(M.poincare() * S * T ** (-m))
    return (-1) ** n * S ** (-n) * T ** (m * n) * chromatic_poly_dc(G).substitute(x)


def e1_poly_direct(M: ManifoldData, G: SimpleGraph, max_elements: Optional[int] = None) -> LaurentPoly2:
    """sum_p dim A_p t^(m r(p)) P(M,t)^|p| s^-r(p), with NBC counts for dim A_p."""
    L = bond_lattice(G, max_elements)
    os = build_os(L)
    P = M.poincare()
    out = LaurentPoly2()
    for p in range(L.n):
        r = L.rank[p]
        out = out + os.dim(p) * S ** (-r) * T ** (M.real_dim * r) * P ** len(L.labels[p])
    return out


def poincare_z2(M: ManifoldData, G: SimpleGraph) -> LaurentPoly2:
    """(-1)^n t^(n(m-1)) chi_G(-P(M) t^(1-m)), the GF(2) Poincare polynomial when the diagonal class vanishes."""
    if not M.zero_diagonal:
        raise PipelineError("poincare_z2 needs a manifold with zero diagonal class")
    n, m = G.n, M.real_dim
    x = -(M.poincare() * T ** (1 - m))
    return (-1) ** n * T ** (n * (m - 1)) * chromatic_poly_dc(G).substitute(x)


def euler_char(M: ManifoldData, G: SimpleGraph) -> int:
    return int(chromatic_poly_dc(G)(t=M.euler_char()))


# ---------------------------------------------------------------------------
# the presentation over H*(M)^{(x)n}


def _cycles(G: SimpleGraph) -> List[Tuple[Tuple[int, int], ...]]:
    """Edge sets of all simple cycles of G."""
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.sorted_edges)
    out = []
    for cyc in nx.simple_cycles(H):
        es = tuple(sorted((min(a, b), max(a, b)) for a, b in zip(cyc, cyc[1:] + cyc[:1])))
        out.append(es)
    return sorted(set(out))


@dataclass
class PresentationEMG:
    M: ManifoldData
    G: SimpleGraph
    edges: List[Tuple[int, int]]
    ring_basis: List[tuple]
    relations1: List[Tuple[Tuple[int, int], int]]
    relations2: List[Tuple[Tuple[int, int], ...]]
    dims: Dict[Tuple[int, int], int]
    is_ring: bool = False

    def e2_dims(self) -> Dict[Tuple[int, int], int]:
        """Dims re-indexed as OS-complex bidegrees: e-degree k, ring degree d -> (k, m k + d)."""
        m = self.M.real_dim
        return {(k, m * k + d): v for (k, d), v in self.dims.items() if v}

    def poincare(self) -> LaurentPoly2:
        m = self.M.real_dim
        out: Dict[tuple, int] = {}
        for (k, d), v in self.dims.items():
            if v:
                out[0, (m - 1) * k + d] = out.get((0, (m - 1) * k + d), 0) + v
        return LaurentPoly2(out)

    def to_text(self) -> str:
        kind = "cohomology ring" if self.is_ring else "associated graded"
        lines = [f"E(M,G)/I over H*({self.M.name})^(x){self.G.n}  [{kind}]",
                 f"generators: " + ", ".join(f"e{i}{j}" for i, j in self.edges),
                 f"type-(1) relations: {len(self.relations1)}, type-(2) relations: {len(self.relations2)} cycles"]
        for (k, d), v in sorted(self.dims.items()):
            if v:
                lines.append(f"  e-degree {k}, ring degree {d}: {v}")
        lines.append(f"Poincare: {self.poincare().to_str()}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "generators": [list(e) for e in self.edges],
            "relations1": len(self.relations1),
            "cycles": [[list(e) for e in c] for c in self.relations2],
            "dims": [{"e_degree": k, "ring_degree": d, "dim": v} for (k, d), v in sorted(self.dims.items()) if v],
            "poincare": self.poincare().to_str(),
            "cohomology_ring": self.is_ring,
        }


def presentation(M: ManifoldData, G: SimpleGraph) -> PresentationEMG:
    """Exterior algebra over H*(M)^{(x)n} on edge generators modulo relations (1) and (2), over GF(2).

    Graded dims come from exact ranks of the ideal's spanning set (ring basis
    times exterior monomial times relation) in each (e-degree, ring degree).
    """
    if M.field is not GF2:
        raise PipelineError("the presentation is computed over GF(2)")
    if not M.zero_diagonal:
        raise PipelineError("the presentation needs zero diagonal class")
    n = G.n
    edges = G.sorted_edges
    import itertools
    ring = list(itertools.product(range(M.dim), repeat=n))
    ring_deg = {r: M.tensor_degree(r) for r in ring}
    rel1 = [(e, x) for e in edges for x in range(M.dim) if x != M.unit]
    cycles = _cycles(G)
    subsets = {k: [frozenset(c) for c in combinations(edges, k)] for k in range(len(edges) + 1)}

    # columns of each (k, d) block: (ring basis element, edge subset)
    cols: Dict[Tuple[int, int], Dict[tuple, int]] = {}
    for k, subs in subsets.items():
        for r in ring:
            for E in subs:
                blk = cols.setdefault((k, ring_deg[r]), {})
                blk[r, E] = len(blk)
    rows: Dict[Tuple[int, int], List[Dict[int, int]]] = {key: [] for key in cols}

    def mult(r, x_tensor):
        return M.tensor_mul({r: 1}, x_tensor)

    def slot(x, i):
        t = [M.unit] * n
        t[i] = x
        return {tuple(t): 1}

    for k in range(1, len(edges) + 1):
        for r in ring:
            # relation (1): r e_T (x_i - x_j) e_ij
            for (i, j), x in rel1:
                diff = {}
                for side in (slot(x, i), slot(x, j)):
                    for t, c in mult(r, side).items():
                        diff[t] = (diff.get(t, 0) + c) & 1
                diff = {t: c for t, c in diff.items() if c}
                if not diff:
                    continue
                d = ring_deg[r] + M.degrees[x]
                for Tset in subsets[k - 1]:
                    if (i, j) in Tset:
                        continue
                    E = Tset | {(i, j)}
                    blk = cols[k, d]
                    rows[k, d].append({blk[t, E]: 1 for t in diff})
        # relation (2): r e_T d(e_C)
        for C in cycles:
            for r in ring:
                for Tset in subsets[k - len(C) + 1] if k - len(C) + 1 >= 0 else []:
                    vec = {}
                    for f in C:
                        rest = frozenset(C) - {f}
                        if rest & Tset:
                            continue
                        key = (r, rest | Tset)
                        idx = cols[k, ring_deg[r]][key]
                        vec[idx] = vec.get(idx, 0) ^ 1
                    vec = {a: b for a, b in vec.items() if b}
                    if vec:
                        rows[k, ring_deg[r]].append(vec)
    dims = {}
    for key, blk in cols.items():
        mat = [[v.get(c, 0) for c in range(len(blk))] for v in rows[key]]
        dims[key] = len(blk) - (rank(mat, GF2) if mat else 0)
    is_ring = bool(check_thm_alg(M))
    return PresentationEMG(M, G, edges, ring, rel1, cycles, {k: v for k, v in dims.items() if v}, is_ring)


def check_thm_alg(M: ManifoldData) -> Verdict:
    """GF(2) data, zero diagonal class, and H^i(M) = 0 for every i >= (m - 1)/2."""
    if M.field is not GF2:
        return Verdict(False, "field is not GF(2)")
    if not M.zero_diagonal:
        return Verdict(False, "diagonal class is not zero")
    bad = [i for i, b in enumerate(M.betti) if b and 2 * i >= M.real_dim - 1]
    if bad:
        return Verdict(False, "cohomology in a degree i >= (m-1)/2", {"degrees": bad})
    return Verdict(True)


# ---------------------------------------------------------------------------
# E2 pipelines


def betti(M: ManifoldData, G: SimpleGraph, ring: bool = True, max_elements: Optional[int] = None) -> E2Page:
    """E2 page of the OS complex with diagonal-presheaf coefficients, with a collapse label.

    "guaranteed": Q with projective data, or GF(2) with zero diagonal class;
    "detected": the page is generated by its columns 0 and -1;
    "unknown": E2 is only an upper model for the cohomology.
    """
    C = diagonal_presheaf(M, G, max_elements)
    K = OSComplex(C.poset, C)
    page = homology(K)
    projective = M.field is QQ and M.projective_complex and bool(M.diagonal_class)
    if ring or not (projective or (M.field is GF2 and M.zero_diagonal)):
        e2_ring(K, page)
    if projective or (M.field is GF2 and M.zero_diagonal):
        page.collapse = "guaranteed"
    elif dg1_generation_check(page):
        page.collapse = "detected"
    else:
        page.collapse = "unknown"
    page.weights = projective
    return page


def betti_projective(M: ManifoldData, G: SimpleGraph, ring: bool = True,
                     max_elements: Optional[int] = None) -> E2Page:
    if M.field is not QQ or not M.projective_complex or M.diagonal_class is None:
        raise PipelineError("betti_projective needs Q coefficients, projective_complex and a diagonal class")
    v = M.validate()
    if not v:
        raise PipelineError(f"invalid manifold data: {v.reason} {v.certificate}")
    return betti(M, G, ring, max_elements)
