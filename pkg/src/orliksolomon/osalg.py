"""Orlik-Solomon algebra of a geometric lattice, in the no-broken-circuit basis.

Monomials are strictly increasing tuples of *atom positions* (indices into the
lattice's atom order).  ``OSAlgebra(P, top=s)`` works inside the interval
[0, s] of a locally geometric poset, which is how the generalized complexes
get at A*([0, s]) without copying the poset.

Structure constants are plain integers; an ``OSElement`` carries field scalars.
"""
from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .exactfield import QQ, Field, rank, kernel_basis
from .poset import PosetError, RankedPoset, Verdict, check_geometric, check_size

Mono = Tuple[int, ...]


def merge_sign(S: Mono, T: Mono) -> Tuple[int, Optional[Mono]]:
    """e_S * e_T = sign * e_U in the exterior algebra (sign 0 if S, T overlap)."""
    if not S:
        return 1, T
    if not T:
        return 1, S
    if set(S) & set(T):
        return 0, None
    inv = 0
    j = 0
    for s in S:
        # count t in T smaller than s; both are sorted
        while j < len(T) and T[j] < s:
            j += 1
        inv += j
    return (-1 if inv & 1 else 1), tuple(sorted(S + T))


class OSAlgebra:
    """A*(L) for L = [0, top] inside ``P`` with the NBC basis for P's atom order."""

    def __init__(self, P: RankedPoset, top: Optional[int] = None, field: Field = QQ,
                 check: bool = False):
        if top is None:
            top = P.top
            if top is None:
                raise PosetError("poset has no maximum; pass top= to work in an interval")
        self.P = P
        self.top = top
        self.field = field
        if check:
            from .poset import interval
            v = check_geometric(interval(P, P.bottom, top))
            if not v:
                raise PosetError(f"not a geometric lattice: {v.reason} {v.certificate}")
        self.atom_elems: List[int] = [a for a in P.atom_order if P.leq(a, top)]
        self.natoms = len(self.atom_elems)
        below = P.down[top]
        self.elements = [x for x in P.order if below >> x & 1]
        # smallest atom position below each element
        self._min_atom: Dict[int, int] = {}
        for x in self.elements:
            m = None
            for k, a in enumerate(self.atom_elems):
                if P.leq(a, x):
                    m = k
                    break
            self._min_atom[x] = m
        self._grade_cache: Dict[Mono, int] = {(): P.bottom}
        self._expand_cache: Dict[Mono, Dict[Mono, int]] = {}
        self._mul_cache: Dict[Tuple[Mono, Mono], Dict[Mono, int]] = {}
        self._basis: Optional[Dict[int, List[Mono]]] = None

    # -- combinatorics ---------------------------------------------------------

    def grade(self, S: Mono) -> int:
        g = self._grade_cache.get(S)
        if g is None:
            g = self.P.join_below(self.grade(S[1:]), self.atom_elems[S[0]], self.top)
            self._grade_cache[S] = g
        return g

    def is_independent(self, S: Mono) -> bool:
        return self.P.rank[self.grade(S)] == len(S)

    def is_nbc(self, S: Mono) -> bool:
        if not self.is_independent(S):
            return False
        return all(self._min_atom[self.grade(S[i:])] == S[i] for i in range(len(S)))

    def _enumerate(self) -> Dict[int, List[Mono]]:
        by_grade: Dict[int, List[Mono]] = {x: [] for x in self.elements}
        by_grade[self.P.bottom].append(())
        # grow by prepending a smaller atom; a set is NBC iff each suffix's
        # smallest element is the smallest atom in its closure
        frontier: List[Mono] = [()]
        while frontier:
            nxt = []
            for S in frontier:
                lim = S[0] if S else self.natoms
                g0 = self.grade(S)
                for c in range(lim):
                    g = self.P.join_below(g0, self.atom_elems[c], self.top)
                    if self.P.rank[g] != len(S) + 1 or self._min_atom[g] != c:
                        continue
                    T = (c,) + S
                    self._grade_cache[T] = g
                    by_grade[g].append(T)
                    nxt.append(T)
            frontier = nxt
        for g in by_grade:
            by_grade[g].sort()
        return by_grade

    def basis(self, p: Optional[int] = None):
        if self._basis is None:
            self._basis = self._enumerate()
        if p is None:
            return self._basis
        return self._basis.get(p, [])

    def dim(self, p: int) -> int:
        return len(self.basis(p))

    def degree_basis(self, k: int) -> List[Mono]:
        return sorted(S for g, mons in self.basis().items() for S in mons if len(S) == k)

    def total_dim(self) -> int:
        return sum(len(v) for v in self.basis().values())

    # -- normal form -------------------------------------------------------------

    def nbc_expand(self, U: Mono) -> Dict[Mono, int]:
        """Write the independent monomial e_U in the NBC basis (integer coefficients)."""
        hit = self._expand_cache.get(U)
        if hit is not None:
            return hit
        if not self.is_independent(U):
            out: Dict[Mono, int] = {}
        else:
            bad = None
            for i in range(len(U) - 1, -1, -1):
                m = self._min_atom[self.grade(U[i:])]
                if m != U[i]:
                    bad = (i, m)
                    break
            if bad is None:
                out = {U: 1}
            else:
                out = self._rewrite(U, *bad)
        self._expand_cache[U] = out
        return out

    def _rewrite(self, U: Mono, i: int, c: int) -> Dict[Mono, int]:
        # c < U[i] lies in the closure of the suffix; B is the part of the
        # suffix in the unique circuit through c, and e_B = e_c * d(e_B)
        suffix = U[i:]
        ce = self.atom_elems[c]
        B = tuple(b for b in suffix
                  if not self.P.leq(ce, self.grade(tuple(x for x in suffix if x != b))))
        rest = tuple(x for x in U if x not in B)
        eps, _ = merge_sign(B, rest)
        out: Dict[Mono, int] = {}
        for j, b in enumerate(B):
            sgn = eps * (-1 if j & 1 else 1)
            Bj = B[:j] + B[j + 1:]
            s1, V = merge_sign((c,), Bj)
            s2, W = merge_sign(V, rest)
            if not s1 or not s2:
                continue
            for mono, coef in self.nbc_expand(W).items():
                out[mono] = out.get(mono, 0) + sgn * s1 * s2 * coef
        return {k: v for k, v in out.items() if v}

    def mul_monomials(self, S: Mono, T: Mono) -> Dict[Mono, int]:
        key = (S, T)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        sgn, U = merge_sign(S, T)
        if not sgn or not self.is_independent(U):
            out: Dict[Mono, int] = {}
        else:
            out = {m: sgn * c for m, c in self.nbc_expand(U).items()}
        self._mul_cache[key] = out
        return out

    def boundary_monomial(self, S: Mono) -> Dict[Mono, int]:
        out: Dict[Mono, int] = {}
        for j in range(len(S)):
            sgn = -1 if j & 1 else 1
            for m, c in self.nbc_expand(S[:j] + S[j + 1:]).items():
                out[m] = out.get(m, 0) + sgn * c
        return {k: v for k, v in out.items() if v}

    # -- elements ----------------------------------------------------------------

    def element(self, terms=None) -> "OSElement":
        return OSElement(self, terms or {})

    def one(self) -> "OSElement":
        return OSElement(self, {(): self.field.one})

    def gen(self, k: int) -> "OSElement":
        """e_a for the atom at position k."""
        return OSElement(self, {(k,): self.field.one})

    def monomial(self, atoms) -> "OSElement":
        """Product of generators in the given order, reduced to NBC form."""
        x = self.one()
        for k in atoms:
            x = x * self.gen(k)
        return x

    def boundary_matrix(self, k: int) -> Tuple[List[Mono], List[Mono], list]:
        """Matrix of d: A^k -> A^(k-1) restricted to the degree bases (rows = targets)."""
        src = self.degree_basis(k)
        tgt = self.degree_basis(k - 1)
        pos = {m: i for i, m in enumerate(tgt)}
        F = self.field
        mat = [[F.zero] * len(src) for _ in tgt]
        for j, S in enumerate(src):
            for m, c in self.boundary_monomial(S).items():
                mat[pos[m]][j] = F.norm(c)
        return src, tgt, mat


class OSElement:
    """Element of A*(L): a dict from NBC monomials to nonzero field scalars."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: OSAlgebra, terms: Dict[Mono, object]):
        F = alg.field
        self.alg = alg
        self.terms = {}
        for m, c in terms.items():
            c = F.norm(c)
            if c:
                self.terms[tuple(m)] = c

    def _same(self, other):
        if not isinstance(other, OSElement) or other.alg is not self.alg:
            raise ValueError("elements of different algebras")

    def __add__(self, other):
        self._same(other)
        F = self.alg.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = F.norm(out.get(m, F.zero) + c)
        return OSElement(self.alg, out)

    def __neg__(self):
        return OSElement(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return OSElement(self.alg, {m: x * c for m, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, OSElement):
            return self.scale(self.alg.field.coerce(other))
        self._same(other)
        out: Dict[Mono, object] = {}
        for S, a in self.terms.items():
            for T, b in other.terms.items():
                for U, c in self.alg.mul_monomials(S, T).items():
                    out[U] = out.get(U, 0) + a * b * c
        return OSElement(self.alg, out)

    def boundary(self) -> "OSElement":
        out: Dict[Mono, object] = {}
        for S, a in self.terms.items():
            for U, c in self.alg.boundary_monomial(S).items():
                out[U] = out.get(U, 0) + a * c
        return OSElement(self.alg, out)

    def __eq__(self, other):
        return isinstance(other, OSElement) and other.alg is self.alg and other.terms == self.terms

    def __bool__(self):
        return bool(self.terms)

    def homogeneous_grade(self) -> Optional[int]:
        grades = {self.alg.grade(m) for m in self.terms}
        return grades.pop() if len(grades) == 1 else None

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*e{list(m)}" for m, c in sorted(self.terms.items()))


def build_os(L: RankedPoset, field: Field = QQ) -> OSAlgebra:
    """A*(L) for a geometric lattice L; raises if L fails the geometric check."""
    v = check_geometric(L)
    if not v:
        raise PosetError(f"not a geometric lattice: {v.reason} {v.certificate}")
    A = OSAlgebra(L, field=field)
    A.basis()
    return A


def os_dim_oracle(L: RankedPoset, p: int, field: Field = QQ, max_atoms: int = 24) -> int:
    """dim A*(L)_p from the defining presentation, by brute-force linear algebra.

    Ambient: e_S with |S| = r(p) and join S = p.  Relations: grade-p parts of
    d(e_T) for dependent T of size r(p) + 1 (dependent monomials are already in
    the ideal, so only independent terms survive).
    """
    atoms = [a for a in L.atom_order if L.leq(a, p)]
    if len(atoms) > max_atoms:
        raise ValueError(f"too many atoms ({len(atoms)}) for the brute-force oracle")
    k = L.rank[p]
    top = p

    def join(sub):
        return L.join_set_below([atoms[i] for i in sub], top)

    ambient = [S for S in combinations(range(len(atoms)), k) if join(S) == p]
    if not ambient:
        return 0
    pos = {S: i for i, S in enumerate(ambient)}
    rows = []
    for T in combinations(range(len(atoms)), k + 1):
        if join(T) != p:
            continue  # T independent would need rank k+1, so join(T) = p forces dependence
        row = [field.zero] * len(ambient)
        nz = False
        for j in range(len(T)):
            S = T[:j] + T[j + 1:]
            i = pos.get(S)
            if i is not None:
                row[i] = field.norm(-1 if j & 1 else 1)
                nz = True
        if nz:
            rows.append(row)
    return len(ambient) - rank(rows, field)


def exactness_check(A: OSAlgebra, p: Optional[int] = None) -> Verdict:
    """Homology of (A*([0,p]), d) by rank bookkeeping; exact iff it all vanishes."""
    if p is None:
        p = A.top
    sub = A if p == A.top else OSAlgebra(A.P, top=p, field=A.field)
    F = A.field
    r = A.P.rank[p]
    dims = [len(sub.degree_basis(k)) for k in range(r + 1)]
    ranks = [0] * (r + 2)  # ranks[k] = rank of d: A^k -> A^(k-1)
    for k in range(1, r + 1):
        _, _, mat = sub.boundary_matrix(k)
        ranks[k] = rank(mat, F)
    homology = {k: dims[k] - ranks[k] - ranks[k + 1] for k in range(r + 1)}
    nonzero = {k: h for k, h in homology.items() if h}
    if nonzero:
        return Verdict(False, "homology does not vanish", {"homology": nonzero, "dims": dims})
    return Verdict(True, certificate={"dims": dims})
