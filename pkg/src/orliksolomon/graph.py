"""Simple graphs, bond lattices and chromatic polynomials."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .laurent import LaurentPoly2, T
from .poset import RankedPoset, check_size

Edge = Tuple[int, int]
Partition = Tuple[Tuple[int, ...], ...]


def canonical_partition(blocks: Iterable[Iterable[int]]) -> Partition:
    """Blocks sorted internally and ordered by their minimum element."""
    bl = [tuple(sorted(b)) for b in blocks if b]
    return tuple(sorted(bl, key=lambda b: b[0]))


def block_index(p: Partition) -> dict:
    return {v: i for i, b in enumerate(p) for v in b}


def refines(p: Partition, q: Partition) -> bool:
    """p <= q in the refinement order (every block of p inside a block of q)."""
    where = block_index(q)
    return all(len({where[v] for v in b}) == 1 for b in p)


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: FrozenSet[Edge]

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        es = set()
        for e in edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge {e} out of range for {n} vertices")
            es.add((min(i, j), max(i, j)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(es))

    @property
    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def key(self):
        return (self.n, tuple(self.sorted_edges))

    def components(self) -> Partition:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.edges:
            parent[find(i)] = find(j)
        groups = {}
        for v in range(self.n):
            groups.setdefault(find(v), []).append(v)
        return canonical_partition(groups.values())

    def to_json(self) -> dict:
        return {"vertices": self.n, "edges": [list(e) for e in self.sorted_edges]}

    def __repr__(self):
        return f"SimpleGraph({self.n}, {self.sorted_edges})"


def graph_from_json(data) -> SimpleGraph:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    for e in data.get("edges", []):
        if len(e) != 2:
            raise ValueError(f"edge {e} is not a pair")
    return SimpleGraph(data["vertices"], data.get("edges", []))


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)])


def edgeless_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n)


# ---------------------------------------------------------------------------
# bond lattice


def bond_lattice(G: SimpleGraph, max_elements: Optional[int] = None) -> RankedPoset:
    """Lattice of connected partitions of G ordered by refinement.

    Built by closure from the discrete partition, merging two blocks whenever
    an edge joins them.
    """
    if G.n < 1:
        raise ValueError("bond lattice needs at least one vertex")
    cap = max_elements
    zero = canonical_partition([v] for v in range(G.n))
    seen = {zero}
    frontier = [zero]
    covers = set()
    while frontier:
        nxt = []
        for p in frontier:
            where = block_index(p)
            for i, j in G.sorted_edges:
                bi, bj = where[i], where[j]
                if bi == bj:
                    continue
                merged = [b for k, b in enumerate(p) if k not in (bi, bj)] + [p[bi] + p[bj]]
                q = canonical_partition(merged)
                covers.add((p, q))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    check_size(len(seen), cap)
        frontier = nxt
    elems = sorted(seen, key=lambda p: (G.n - len(p), p))
    pos = {p: i for i, p in enumerate(elems)}
    ranks = [G.n - len(p) for p in elems]
    atoms = [i for i, p in enumerate(elems) if ranks[i] == 1]
    atom_order = sorted(atoms, key=lambda i: _atom_edge(elems[i]))
    return RankedPoset(len(elems), [(pos[a], pos[b]) for a, b in covers], ranks, elems,
                       atom_order=atom_order, name=f"L_G(n={G.n},|E|={len(G.edges)})")


def _atom_edge(p: Partition) -> Edge:
    (b,) = [b for b in p if len(b) == 2]
    return b


def atom_edge(L: RankedPoset, a: int) -> Edge:
    return _atom_edge(L.labels[a])


# ---------------------------------------------------------------------------
# deletion / contraction / restriction


def delete(G: SimpleGraph, e: Sequence[int]) -> SimpleGraph:
    e = (min(e), max(e))
    if e not in G.edges:
        raise ValueError(f"edge {e} not in graph")
    return SimpleGraph(G.n, G.edges - {e})


def contract(G: SimpleGraph, e: Sequence[int]) -> SimpleGraph:
    """Merge the endpoints of e; loops vanish, parallel edges collapse.

    Vertices are relabelled 0..n-2 in order of first appearance, the merged
    vertex taking the position of the smaller endpoint.
    """
    i, j = min(e), max(e)
    if (i, j) not in G.edges:
        raise ValueError(f"edge {(i, j)} not in graph")
    relabel = {}
    for v in range(G.n):
        w = i if v == j else v
        if w not in relabel:
            relabel[w] = len(relabel)
    new_edges = set()
    for a, b in G.edges:
        a2 = relabel[i if a == j else a]
        b2 = relabel[i if b == j else b]
        if a2 != b2:
            new_edges.add((min(a2, b2), max(a2, b2)))
    return SimpleGraph(G.n - 1, new_edges)


def restrict(G: SimpleGraph, p: Partition, L: Optional[RankedPoset] = None) -> SimpleGraph:
    """G|p: keep only the edges lying inside blocks of p."""
    p = canonical_partition(p)
    if sorted(v for b in p for v in b) != list(range(G.n)):
        raise ValueError("not a partition of the vertex set")
    # p must be a connected partition of G
    where = block_index(p)
    inner = [e for e in G.edges if where[e[0]] == where[e[1]]]
    H = SimpleGraph(G.n, inner)
    if H.components() != p:
        raise ValueError(f"partition {p} is not in the bond lattice of G")
    return H


# ---------------------------------------------------------------------------
# chromatic polynomials


def chromatic_poly_dc(G: SimpleGraph) -> LaurentPoly2:
    """Chromatic polynomial by memoised deletion-contraction."""
    return _chromatic_dc(G.key())


@lru_cache(maxsize=None)
def _chromatic_dc(key) -> LaurentPoly2:
    n, edges = key
    if not edges:
        return T ** n
    G = SimpleGraph(n, edges)
    e = edges[-1]
    return _chromatic_dc(delete(G, e).key()) - _chromatic_dc(contract(G, e).key())


def chromatic_poly_mobius(G: SimpleGraph, L: Optional[RankedPoset] = None,
                          max_elements: Optional[int] = None) -> LaurentPoly2:
    """sum over the bond lattice of mu(0, p) t^(n - r(p))."""
    if L is None:
        L = bond_lattice(G, max_elements)
    row = L.mobius_row(L.bottom)
    out = LaurentPoly2()
    for p, mu in row.items():
        out = out + LaurentPoly2.mono(0, G.n - L.rank[p], mu)
    return out


def chromatic_coeffs(G: SimpleGraph) -> List[int]:
    """Ascending integer coefficients of chi_G."""
    return chromatic_poly_dc(G).t_coeffs()


def count_colorings(G: SimpleGraph, k: int) -> int:
    """Brute-force count of proper k-colourings."""
    from itertools import product
    edges = G.sorted_edges
    return sum(1 for col in product(range(k), repeat=G.n) if all(col[i] != col[j] for i, j in edges))
