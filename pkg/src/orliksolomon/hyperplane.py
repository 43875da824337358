"""Central hyperplane arrangements over Q: intersection lattices and face counts."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .exactfield import QQ, Echelon, rank
from .laurent import LaurentPoly2
from .osalg import build_os
from .poset import RankedPoset, check_size, upper_set

MAX_HYPERPLANES = 20


class ArrangementError(ValueError):
    pass


@dataclass(frozen=True)
class CentralArrangement:
    d: int
    normals: Tuple[Tuple[Fraction, ...], ...]

    def __init__(self, d: int, normals: Sequence[Sequence]):
        rows = tuple(tuple(QQ.coerce(x) for x in v) for v in normals)
        for k, v in enumerate(rows):
            if len(v) != d:
                raise ArrangementError(f"normal {k} has length {len(v)}, expected {d}")
            if not any(v):
                raise ArrangementError(f"normal {k} is zero")
        for a in range(len(rows)):
            for b in range(a + 1, len(rows)):
                if rank([list(rows[a]), list(rows[b])]) < 2:
                    raise ArrangementError(f"hyperplanes {a} and {b} coincide")
        object.__setattr__(self, "d", int(d))
        object.__setattr__(self, "normals", rows)

    def __len__(self):
        return len(self.normals)

    def to_json(self) -> dict:
        return {"dim": self.d, "normals": [[str(x) for x in v] for v in self.normals]}


def arrangement_from_json(data) -> CentralArrangement:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    return CentralArrangement(int(data["dim"]), data["normals"])


def coordinate_arrangement(d: int) -> CentralArrangement:
    return CentralArrangement(d, [[1 if i == j else 0 for j in range(d)] for i in range(d)])


def braid_arrangement(n: int) -> CentralArrangement:
    """x_i = x_j in Q^n, hyperplanes in lexicographic order of (i, j)."""
    normals = []
    for i in range(n):
        for j in range(i + 1, n):
            v = [0] * n
            v[i], v[j] = 1, -1
            normals.append(v)
    return CentralArrangement(n, normals)


def lines_in_plane(n: int) -> CentralArrangement:
    """n distinct lines through the origin of R^2."""
    return CentralArrangement(2, [[1, k] for k in range(n)])


def random_arrangement(n: int, d: int, seed: int = 0, bound: int = 2) -> CentralArrangement:
    """n pairwise distinct hyperplanes with small integer normals (coincidences are likely)."""
    rng = random.Random(seed)
    normals: List[List[int]] = []
    while len(normals) < n:
        v = [rng.randint(-bound, bound) for _ in range(d)]
        if not any(v):
            continue
        if all(rank([v, w]) == 2 for w in normals):
            normals.append(v)
    return CentralArrangement(d, normals)


def intersection_lattice(A: CentralArrangement, max_rank: Optional[int] = None,
                         max_elements: Optional[int] = None) -> RankedPoset:
    """Flats ordered by reverse inclusion of subspaces, rank = codimension.

    A flat is stored as the set of hyperplanes containing it, i.e. all normals
    in the span of its defining normals, which canonicalises each subspace.
    ``max_rank`` builds only the truncation to ranks <= max_rank.
    """
    if len(A) > MAX_HYPERPLANES:
        raise ArrangementError(f"{len(A)} hyperplanes exceeds the cap of {MAX_HYPERPLANES}")
    normals = [list(v) for v in A.normals]
    m = len(normals)

    def closure(gens: Sequence[int]) -> Tuple[frozenset, int]:
        ech = Echelon(QQ)
        for g in gens:
            ech.add(normals[g])
        members = frozenset(h for h in range(m) if h in gens or ech.contains(normals[h]))
        return members, len(ech)

    bottom = frozenset()
    ranks = {bottom: 0}
    covers = set()
    frontier = [bottom]
    while frontier:
        nxt = []
        for F in frontier:
            if max_rank is not None and ranks[F] >= max_rank:
                continue
            done = set(F)
            for h in range(m):
                if h in done:
                    continue
                G, r = closure(sorted(F | {h}))
                done |= G
                covers.add((F, G))
                if G not in ranks:
                    ranks[G] = r
                    nxt.append(G)
                    check_size(len(ranks), max_elements)
        frontier = nxt
    elems = sorted(ranks, key=lambda F: (ranks[F], sorted(F)))
    pos = {F: i for i, F in enumerate(elems)}
    labels = [tuple(sorted(F)) for F in elems]
    atoms = [i for i, F in enumerate(elems) if ranks[F] == 1]
    atom_order = sorted(atoms, key=lambda i: labels[i])
    return RankedPoset(len(elems), [(pos[a], pos[b]) for a, b in covers], [ranks[F] for F in elems],
                       labels, atom_order=atom_order, name=f"L(A, {m} hyperplanes in Q^{A.d})")


def zaslavsky_f(A: CentralArrangement, L: Optional[RankedPoset] = None) -> List[int]:
    """(f_0, ..., f_d): f_k = sum over flats of rank d - k of dim A*([p, top])."""
    if L is None:
        L = intersection_lattice(A)
    f = [0] * (A.d + 1)
    for p in range(L.n):
        k = A.d - L.rank[p]
        f[k] += build_os(upper_set(L, p)).total_dim()
    return f


def chamber_count_mobius(L: RankedPoset) -> int:
    row = L.mobius_row(L.bottom)
    return sum(abs(v) for v in row.values())


def complex_poincare(A: CentralArrangement, L: Optional[RankedPoset] = None) -> LaurentPoly2:
    """sum_p dim A*(L)_p t^r(p): Poincare polynomial of the complexified complement."""
    if L is None:
        L = intersection_lattice(A)
    os = build_os(L)
    out = {}
    for p in range(L.n):
        out[0, L.rank[p]] = out.get((0, L.rank[p]), 0) + os.dim(p)
    return LaurentPoly2(out)
