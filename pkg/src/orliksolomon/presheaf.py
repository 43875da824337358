"""Presheaves of graded vector spaces on locally geometric posets.

A presheaf assigns a graded space C_p to every element and a degree-preserving
matrix f_{p,q}: C_p -> C_q to every cover q <: p.  Matrices have one row per
basis vector of the target and one column per basis vector of the source.

Products (when present) are structure constants: ``product(p, i, q, j)``
returns ``{(s, k): c}`` meaning e_i * e_j = sum c * (basis vector k of C_s).
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .exactfield import GF2, QQ, Field, get_field, identity, matmul, zeros
from .graph import SimpleGraph, block_index, bond_lattice
from .laurent import LaurentPoly2
from .manifold import ManifoldData, ManifoldError
from .poset import PosetError, RankedPoset, Verdict, canonical_lambda, poset_from_json

Vec = Dict[Tuple[int, int], object]


class PresheafError(ValueError):
    pass


@dataclass
class GradedSpace:
    degrees: List[int]
    labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        if any(d < 0 for d in self.degrees):
            raise PresheafError("graded spaces live in degrees >= 0")
        if not self.labels:
            self.labels = [f"v{i}" for i in range(len(self.degrees))]
        if len(self.labels) != len(self.degrees):
            raise PresheafError("one label per basis vector")

    @classmethod
    def from_dims(cls, dims: Dict[int, int], prefix: str = "v") -> "GradedSpace":
        degs = [int(d) for d in sorted(dims, key=int) for _ in range(int(dims[d]))]
        return cls(degs, [f"{prefix}{i}" for i in range(len(degs))])

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def dims(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def poincare(self) -> LaurentPoly2:
        return LaurentPoly2({(0, d): c for d, c in self.dims.items()})


class Presheaf:
    """Base class.  Subclasses provide ``space`` and ``cover_map``."""

    monoidal = False

    def __init__(self, poset: RankedPoset, field: Field):
        self.poset = poset
        self.field = get_field(field)
        self._maps: Dict[Tuple[int, int], list] = {}

    def space(self, p: int) -> GradedSpace:
        raise NotImplementedError

    def cover_map(self, p: int, q: int) -> list:
        raise NotImplementedError

    def dim(self, p: int) -> int:
        return self.space(p).dim

    def map(self, p: int, q: int) -> list:
        """f_{p,q} for q <= p, composed along the lexicographically first cover chain."""
        P = self.poset
        if not P.leq(q, p):
            raise PosetError(f"f_{{p,q}} needs q <= p (got p={p}, q={q})")
        if p == q:
            return identity(self.dim(p), self.field)
        key = (p, q)
        if key not in self._maps:
            mid = min(c for c in P.upper_covers[q] if P.leq(c, p))
            self._maps[key] = matmul(self.cover_map(mid, q), self.map(p, mid), self.field)
        return self._maps[key]

    def apply(self, p: int, q: int, vec: Dict[int, object]) -> Dict[int, object]:
        """Apply f_{p,q} to a sparse vector of C_p."""
        F = self.field
        M = self.map(p, q)
        out: Dict[int, object] = {}
        for j, c in vec.items():
            for i in range(len(M)):
                x = M[i][j]
                if x:
                    out[i] = F.norm(out.get(i, F.zero) + c * x)
        return {k: v for k, v in out.items() if v}

    def product(self, p: int, i: int, q: int, j: int) -> Vec:
        raise PresheafError("this presheaf carries no product")

    def unit(self) -> Optional[Tuple[int, int]]:
        """(element, basis index) of the unit of C_0, when there is one."""
        return None

    def mul_vec(self, a: Vec, b: Vec) -> Vec:
        """Bilinear extension of ``product`` to sparse vectors keyed by (element, index)."""
        F = self.field
        out: Vec = {}
        for (p, i), x in a.items():
            for (q, j), y in b.items():
                for key, z in self.product(p, i, q, j).items():
                    out[key] = F.norm(out.get(key, F.zero) + x * y * z)
        return {k: v for k, v in out.items() if v}

    def poincare(self, p: int) -> LaurentPoly2:
        return self.space(p).poincare()

    def to_json(self) -> dict:
        P = self.poset
        data = {
            "field": self.field.name,
            "poset": P.to_json(),
            "spaces": {str(p): {str(d): c for d, c in self.space(p).dims.items()} for p in range(P.n)},
            "maps": [{"from": p, "to": q, "matrix": [[_num(x) for x in row] for row in self.cover_map(p, q)]}
                     for q in range(P.n) for p in P.upper_covers[q]],
        }
        if self.monoidal:
            consts = []
            for p in range(P.n):
                for q in range(P.n):
                    for i in range(self.dim(p)):
                        for j in range(self.dim(q)):
                            for (s, k), c in sorted(self.product(p, i, q, j).items()):
                                consts.append([p, i, q, j, s, k, _num(c)])
            data["product"] = consts
        return data


def _num(c):
    from fractions import Fraction
    if isinstance(c, Fraction) and c.denominator != 1:
        return str(c)
    return int(c)


class ExplicitPresheaf(Presheaf):
    """Presheaf given by explicit spaces, cover matrices and (optional) structure constants."""

    def __init__(self, poset: RankedPoset, field, spaces: Dict[int, GradedSpace],
                 maps: Dict[Tuple[int, int], list], products: Optional[Dict[tuple, Vec]] = None,
                 unit: Optional[Tuple[int, int]] = None):
        super().__init__(poset, field)
        self.spaces = {p: spaces.get(p, GradedSpace([])) for p in range(poset.n)}
        self.maps = {}
        F = self.field
        for q in range(poset.n):
            for p in poset.upper_covers[q]:
                m = maps.get((p, q))
                if m is None:
                    m = zeros(self.spaces[q].dim, self.spaces[p].dim, F)
                m = [[F.norm(F.coerce(x)) for x in row] for row in m]
                if len(m) != self.spaces[q].dim or any(len(r) != self.spaces[p].dim for r in m):
                    raise PresheafError(f"cover map {p}->{q} has the wrong shape")
                self.maps[p, q] = m
        for key in maps:
            if key not in self.maps:
                raise PresheafError(f"{key} is not a cover pair")
        self.products = products
        self.monoidal = products is not None
        self._unit = unit

    def space(self, p: int) -> GradedSpace:
        return self.spaces[p]

    def cover_map(self, p: int, q: int) -> list:
        return self.maps[p, q]

    def product(self, p, i, q, j) -> Vec:
        if self.products is None:
            raise PresheafError("this presheaf carries no product")
        return self.products.get((p, i, q, j), {})

    def unit(self):
        return self._unit


def skyscraper(P: RankedPoset, alpha: int, A: GradedSpace, field=QQ,
               algebra: Optional[Dict[Tuple[int, int], Dict[int, object]]] = None) -> ExplicitPresheaf:
    """j_{alpha*}A: A at every p <= alpha with identity maps, zero elsewhere.

    With ``algebra`` (structure constants of A, {(i, j): {k: c}}) a product is
    installed: for p, q <= alpha, e_i * e_j lands in every s in p v q below
    alpha.  This is only monoidal when alpha is the top of P.
    """
    F = get_field(field)
    if not 0 <= alpha < P.n:
        raise PresheafError(f"alpha={alpha} is not an element")
    below = set(P.lower(alpha))
    spaces = {p: (A if p in below else GradedSpace([])) for p in range(P.n)}
    maps = {}
    for q in range(P.n):
        for p in P.upper_covers[q]:
            if p in below:
                maps[p, q] = identity(A.dim, F)
    products = None
    unit = None
    if algebra is not None:
        products = {}
        for p in below:
            for q in below:
                targets = [s for s in P.min_upper_bounds(p, q) if s in below]
                for (i, j), out in algebra.items():
                    vec = {}
                    for s in targets:
                        for k, c in out.items():
                            c = F.norm(F.coerce(c))
                            if c:
                                vec[s, k] = c
                    products[p, i, q, j] = vec
        zero_deg = [i for i, d in enumerate(A.degrees) if d == 0]
        if zero_deg:
            unit = (P.bottom, zero_deg[0])
    return ExplicitPresheaf(P, F, spaces, maps, products, unit)


def constant_presheaf(P: RankedPoset, field=QQ) -> ExplicitPresheaf:
    """The field in degree 0 at every element, identity maps, product 1*1 = 1 on p v q."""
    F = get_field(field)
    A = GradedSpace([0], ["1"])
    spaces = {p: A for p in range(P.n)}
    maps = {(p, q): [[F.one]] for q in range(P.n) for p in P.upper_covers[q]}
    products = {(p, 0, q, 0): {(s, 0): F.one for s in P.min_upper_bounds(p, q)}
                for p in range(P.n) for q in range(P.n)}
    return ExplicitPresheaf(P, F, spaces, maps, products, (P.bottom, 0))


def presheaf_from_json(data, field: Optional[str] = None, max_elements: Optional[int] = None,
                       poset: Optional[RankedPoset] = None) -> ExplicitPresheaf:
    """Generic presheaf JSON: per-element degree dims, cover matrices, optional products.

    The poset is either embedded under "poset" or passed separately.

    {"field": "Q", "poset": {...}, "spaces": {"0": {"0": 1}, ...},
     "maps": [{"from": p, "to": q, "matrix": [[...]]}],
     "product": [[p, i, q, j, s, k, coef], ...]}
    """
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    F = get_field(field or data.get("field", "Q"))
    if poset is not None:
        P = poset
    elif "poset" in data:
        P = poset_from_json(data["poset"], max_elements)
    else:
        raise PresheafError("presheaf JSON has no poset and none was supplied")
    spaces = {}
    for key, dims in data.get("spaces", {}).items():
        p = _elem(P, key)
        spaces[p] = GradedSpace.from_dims({int(d): int(c) for d, c in dims.items()})
    maps = {}
    for entry in data.get("maps", []):
        maps[_elem(P, entry["from"]), _elem(P, entry["to"])] = entry["matrix"]
    products = None
    if "product" in data:
        products = {}
        for p, i, q, j, s, k, c in data["product"]:
            key = (_elem(P, p), int(i), _elem(P, q), int(j))
            products.setdefault(key, {})[_elem(P, s), int(k)] = F.norm(F.coerce(c))
    return ExplicitPresheaf(P, F, spaces, maps, products)


def _elem(P: RankedPoset, key) -> int:
    if isinstance(key, int):
        return key
    if isinstance(key, str) and key.lstrip("-").isdigit():
        return int(key)
    return P.index_of(key)


# ---------------------------------------------------------------------------
# the diagonal presheaf of a manifold along a graph


class DiagonalPresheaf(Presheaf):
    """p -> H*(M)^{(x)|p|} shifted up by m*r(p), on the bond lattice of G.

    A class u_p (x) x is handled through a lift of x to H*(M)^{(x)n}: the factor
    of block B is placed at the vertex min(B).  Restricting to the diagonal of
    a partition multiplies together the factors of each block.

    Products of dependent grades carry the excess Euler class: on a block C
    of s = p v q the factor picks up e(TM)^k with
    k = (|C| - #p-blocks in C) + (|C| - #q-blocks in C) - (|C| - 1),
    where e(TM) is the multiplication image of the diagonal class.  For
    independent p, q every k is 0 and for zero diagonal class any positive k
    kills the product.
    """

    monoidal = True

    def __init__(self, M: ManifoldData, G: SimpleGraph, lattice: Optional[RankedPoset] = None,
                 max_elements: Optional[int] = None):
        reason = M.supports_presheaf()
        if reason:
            raise PresheafError(reason)
        super().__init__(lattice if lattice is not None else bond_lattice(G, max_elements), M.field)
        self.M = M
        self.G = G
        self.parts = list(self.poset.labels)
        self._spaces: Dict[int, GradedSpace] = {}
        self._index: Dict[int, Dict[tuple, int]] = {}
        self._basis: Dict[int, List[tuple]] = {}
        self._covers: Dict[Tuple[int, int], list] = {}
        self._prod: Dict[tuple, Vec] = {}
        self._euler = M.euler_class()
        self._targets = {p: self._target_list(p) for p in range(self.poset.n)}

    def _target_list(self, p: int) -> List[int]:
        where = block_index(self.parts[p])
        return [where[v] for v in range(self.G.n)]

    def basis(self, p: int) -> List[tuple]:
        if p not in self._basis:
            k = len(self.parts[p])
            self._basis[p] = list(itertools.product(range(self.M.dim), repeat=k))
            self._index[p] = {t: i for i, t in enumerate(self._basis[p])}
        return self._basis[p]

    def index(self, p: int, t: tuple) -> int:
        self.basis(p)
        return self._index[p][t]

    def space(self, p: int) -> GradedSpace:
        if p not in self._spaces:
            M = self.M
            shift = M.real_dim * self.poset.rank[p]
            degs, labels = [], []
            for t in self.basis(p):
                degs.append(shift + M.tensor_degree(t))
                labels.append("u" + "".join(f"[{M.names[b]}]" for b in t))
            self._spaces[p] = GradedSpace(degs, labels)
        return self._spaces[p]

    def lift(self, p: int, t: tuple) -> dict:
        mins = [b[0] for b in self.parts[p]]
        return self.M.spread({t: self.field.one}, mins, self.G.n)

    def restrict(self, p: int, x: dict) -> Dict[int, object]:
        """Restrict an n-fold tensor to the diagonal of p, as a sparse vector of C_p."""
        out = self.M.regroup(x, self._targets[p], len(self.parts[p]))
        self.basis(p)
        idx = self._index[p]
        return {idx[t]: c for t, c in out.items()}

    def cover_map(self, p: int, q: int) -> list:
        key = (p, q)
        if key in self._covers:
            return self._covers[key]
        P = self.poset
        if q not in P.lower_covers[p]:
            raise PosetError(f"{q} is not covered by {p}")
        F = self.field
        mat = zeros(self.dim(q), self.dim(p), F)
        if self.M.diagonal_class:
            bp = block_index(self.parts[p])
            merged = list(self.parts[q])
            # the two q-blocks that sit in the same p-block
            pair = None
            for a in range(len(merged)):
                for b in range(a + 1, len(merged)):
                    if bp[merged[a][0]] == bp[merged[b][0]]:
                        pair = (merged[a][0], merged[b][0])
            i, j = pair
            diag = self.M.diagonal_tensor(i, j, self.G.n)
            for col, t in enumerate(self.basis(p)):
                image = self.restrict(q, self.M.tensor_mul(diag, self.lift(p, t)))
                for row, c in image.items():
                    mat[row][col] = c
        self._covers[key] = mat
        return mat

    def excess(self, p: int, q: int, s: int) -> List[int]:
        """Exponent of the Euler class on each block of s = p v q."""
        ws = block_index(self.parts[s])
        k = [1 - len(C) for C in self.parts[s]]
        for part in (self.parts[p], self.parts[q]):
            for B in part:
                k[ws[B[0]]] += len(B) - 1
        return k

    def product(self, p: int, i: int, q: int, j: int) -> Vec:
        key = (p, i, q, j)
        if key in self._prod:
            return self._prod[key]
        M, F, P = self.M, self.field, self.poset
        s = P.join(p, q)
        x = self.basis(p)[i]
        y = self.basis(q)[j]
        z = M.tensor_mul(self.lift(p, x), self.lift(q, y))
        vec = self.restrict(s, z)
        exps = self.excess(p, q, s)
        if any(exps) and vec:
            factor = {(): F.one}
            for e in exps:
                piece = {(M.unit,): F.one}
                for _ in range(e):
                    piece = M.tensor_mul(piece, {(k,): c for k, c in self._euler.items()})
                factor = {a + b: F.norm(c1 * c2) for a, c1 in factor.items() for b, c2 in piece.items()}
            basis = self.basis(s)
            out: Dict[int, object] = {}
            for k, c in vec.items():
                for t, c2 in M.tensor_mul(factor, {basis[k]: c}).items():
                    idx = self._index[s][t]
                    out[idx] = F.norm(out.get(idx, F.zero) + c2)
            vec = out
        sign = -1 if (M.tensor_degree(x) * M.real_dim * P.rank[q]) % 2 else 1
        res = {(s, k): F.norm(sign * c) for k, c in vec.items()}
        res = {k: v for k, v in res.items() if v}
        self._prod[key] = res
        return res

    def unit(self):
        return (self.poset.bottom, self.index(self.poset.bottom, (self.M.unit,) * self.G.n))


def diagonal_presheaf(M: ManifoldData, G: SimpleGraph, max_elements: Optional[int] = None) -> DiagonalPresheaf:
    if M.field is QQ and not M.has_diagonal and not M.zero_diagonal:
        raise ManifoldError("over Q a diagonal class (or zero_diagonal) must be supplied")
    return DiagonalPresheaf(M, G, max_elements=max_elements)


# ---------------------------------------------------------------------------
# validation


def validate(C: Presheaf, exhaustive: bool = True, samples: int = 2000, seed: int = 0) -> Verdict:
    """Check the presheaf axioms, and the monoidal axioms when a product is present.

    With ``exhaustive=False`` the monoidal identities are checked on
    ``samples`` random basis triples drawn with ``seed``.
    """
    P, F = C.poset, C.field
    for q in range(P.n):
        for p in P.upper_covers[q]:
            m = C.cover_map(p, q)
            dq, dp = C.space(q), C.space(p)
            if len(m) != dq.dim or any(len(r) != dp.dim for r in m):
                return Verdict(False, "cover map has the wrong shape", {"cover": (p, q)})
            for r, row in enumerate(m):
                for c, x in enumerate(row):
                    if x and dq.degrees[r] != dp.degrees[c]:
                        return Verdict(False, "cover map does not preserve degree",
                                       {"cover": (p, q), "entry": (r, c)})
    # path independence: every cover q' of q inside [q, p] must give the same composite
    for p in range(P.n):
        for q in P.lower(p):
            if q == p:
                continue
            mids = [c for c in P.upper_covers[q] if P.leq(c, p)]
            ref = None
            for mid in mids:
                comp = matmul(C.cover_map(mid, q), C.map(p, mid), F) if C.dim(q) else []
                if ref is None:
                    ref = (mid, comp)
                elif comp != ref[1]:
                    return Verdict(False, "composite maps depend on the cover path",
                                   {"from": p, "to": q, "via": (ref[0], mid)})
    if not C.monoidal:
        return Verdict(True)

    basis = [(p, i) for p in range(P.n) for i in range(C.dim(p))]
    rng = random.Random(seed)

    def pairs():
        if exhaustive:
            return ((a, b) for a in basis for b in basis)
        return ((rng.choice(basis), rng.choice(basis)) for _ in range(samples))

    for (p, i), (q, j) in pairs():
        allowed = set(P.min_upper_bounds(p, q))
        for (s, k) in C.product(p, i, q, j):
            if s not in allowed:
                return Verdict(False, "product leaves the minimal upper bounds",
                               {"triple": ((p, i), (q, j)), "landed": s})

    def push(vec: Vec, lam: Dict[int, int]) -> Vec:
        out: Vec = {}
        for (t, k), c in vec.items():
            for r, x in C.apply(t, lam[t], {k: c}).items():
                out[lam[t], r] = F.norm(out.get((lam[t], r), F.zero) + x)
        return {k: v for k, v in out.items() if v}

    covers = [(p, q) for q in range(P.n) for p in P.upper_covers[q]]
    if exhaustive:
        checks = ((p, q, a, s, b) for p, q in covers for a in range(C.dim(p))
                  for s in range(P.n) for b in range(C.dim(s)))
    else:
        def sampled():
            for _ in range(samples):
                p, q = rng.choice(covers)
                if not C.dim(p):
                    continue
                s, b = rng.choice(basis)
                yield p, q, rng.randrange(C.dim(p)), s, b
        checks = sampled()
    for p, q, a, s, b in checks:
        fa = {(q, r): x for r, x in C.apply(p, q, {a: F.one}).items()}
        lam = canonical_lambda(P, p, s, q, s)
        left = C.mul_vec({(s, b): F.one}, fa)
        right = push(C.mul_vec({(s, b): F.one}, {(p, a): F.one}), lam)
        if left != right:
            return Verdict(False, "b*f(a) != f(b*a)", {"cover": (p, q), "a": (p, a), "b": (s, b)})
        left = C.mul_vec(fa, {(s, b): F.one})
        right = push(C.mul_vec({(p, a): F.one}, {(s, b): F.one}), lam)
        if left != right:
            return Verdict(False, "f(a)*b != f(a*b)", {"cover": (p, q), "a": (p, a), "b": (s, b)})

    if exhaustive:
        triples = ((a, b, c) for a in basis for b in basis for c in basis)
    else:
        triples = ((rng.choice(basis), rng.choice(basis), rng.choice(basis)) for _ in range(samples))
    for a, b, c in triples:
        ab = C.product(*a, *b)
        if ab:
            left = C.mul_vec(ab, {c: F.one})
        else:
            left = {}
        bc = C.product(*b, *c)
        right = C.mul_vec({a: F.one}, bc) if bc else {}
        if left != right:
            return Verdict(False, "product is not associative", {"triple": (a, b, c)})
    u = C.unit()
    if u is not None:
        for e in basis:
            if C.product(*u, *e) != {e: F.one} or C.product(*e, *u) != {e: F.one}:
                return Verdict(False, "unit does not act as identity", {"element": e})
    return Verdict(True)
