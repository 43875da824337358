"""The generalized Orlik-Solomon complex A*(L, C) and its homology.

A cell is ``(p, S, k)``: an NBC monomial S of grade p (atom positions in the
poset's global atom order) tensored with basis vector k of C_p.  Cells with
r(p) = i and coefficient degree j sit in bidegree (-i, j); internally the
column is stored as the non-negative integer i.  The differential maps column
i to column i - 1 and keeps j.
"""
from __future__ import annotations

import json
import dataclasses
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .exactfield import Echelon, Field, kernel_basis
from .laurent import LaurentPoly2
from .osalg import OSAlgebra
from .poset import PosetError, RankedPoset, Verdict, check_locally_geometric
from .presheaf import Presheaf, PresheafError, validate

Cell = Tuple[int, tuple, int]
Bideg = Tuple[int, int]
SVec = Dict[int, object]


class ComplexError(ValueError):
    pass


class _Intervals:
    """OS algebras of the intervals [0, s], translated to global atom positions."""

    def __init__(self, P: RankedPoset, field: Field):
        self.P = P
        self.field = field
        self._alg: Dict[int, OSAlgebra] = {}
        self._to_global: Dict[int, List[int]] = {}
        self._to_local: Dict[int, Dict[int, int]] = {}

    def alg(self, s: int) -> OSAlgebra:
        if s not in self._alg:
            A = OSAlgebra(self.P, top=s, field=self.field)
            glob = [self.P.atom_position(a) for a in A.atom_elems]
            self._alg[s] = A
            self._to_global[s] = glob
            self._to_local[s] = {g: i for i, g in enumerate(glob)}
        return self._alg[s]

    def basis(self, p: int) -> List[tuple]:
        A = self.alg(p)
        g = self._to_global[p]
        return [tuple(g[k] for k in S) for S in A.basis(p)]

    def grade(self, S: tuple, s: int) -> int:
        A = self.alg(s)
        loc = self._to_local[s]
        return A.grade(tuple(loc[k] for k in S))

    def mul(self, S: tuple, T: tuple, s: int) -> Dict[tuple, int]:
        """e_S * e_T in A*([0, s]) (NBC normal form, global positions)."""
        A = self.alg(s)
        loc = self._to_local[s]
        g = self._to_global[s]
        out = A.mul_monomials(tuple(loc[k] for k in S), tuple(loc[k] for k in T))
        return {tuple(g[k] for k in U): c for U, c in out.items()}


class OSComplex:
    def __init__(self, P: RankedPoset, C: Presheaf, check: bool = True):
        if C.poset is not P and C.poset.n != P.n:
            raise ComplexError("presheaf lives on a different poset")
        self.P = P
        self.C = C
        self.field = C.field
        self.osa = _Intervals(P, self.field)
        self.cells: Dict[Bideg, List[Cell]] = {}
        self.pos: Dict[Cell, Tuple[Bideg, int]] = {}
        for p in P.order:
            sp = C.space(p)
            if not sp.dim:
                continue
            i = P.rank[p]
            for S in self.osa.basis(p):
                for k, j in enumerate(sp.degrees):
                    self.cells.setdefault((i, j), []).append((p, S, k))
        for bd in self.cells:
            self.cells[bd].sort(key=lambda c: (c[0], c[1], c[2]))
            for n, c in enumerate(self.cells[bd]):
                self.pos[c] = (bd, n)
        self.diff: Dict[Bideg, List[SVec]] = {}
        for bd, cl in self.cells.items():
            self.diff[bd] = [self._boundary_cell(c) for c in cl]
        if check:
            v = self.d_squared_check()
            if not v:
                raise ComplexError(f"d^2 != 0: {v.certificate}")

    # -- differential --------------------------------------------------------------

    def _boundary_cell(self, cell: Cell) -> SVec:
        """d(e_S (x) c_k) as a sparse vector over the cells one column to the left."""
        p, S, k = cell
        F = self.field
        out: SVec = {}
        for t in range(len(S)):
            T = S[:t] + S[t + 1:]
            q = self.osa.grade(T, p)
            sign = -1 if t & 1 else 1
            for r, x in self.C.apply(p, q, {k: F.one}).items():
                n = self.pos[(q, T, r)][1]
                out[n] = F.norm(out.get(n, F.zero) + sign * x)
        return {a: b for a, b in out.items() if b}

    def boundary(self, vec: Dict[Cell, object]) -> Dict[Cell, object]:
        F = self.field
        out: Dict[Cell, object] = {}
        for cell, c in vec.items():
            (i, j), n = self.pos[cell]
            tgt = self.cells.get((i - 1, j), [])
            for m, x in self.diff[i, j][n].items():
                key = tgt[m]
                out[key] = F.norm(out.get(key, F.zero) + c * x)
        return {a: b for a, b in out.items() if b}

    def matrix(self, bd: Bideg) -> list:
        """Dense matrix of d out of bidegree ``bd`` (rows: cells of the next column)."""
        i, j = bd
        src = self.cells.get(bd, [])
        tgt = self.cells.get((i - 1, j), [])
        F = self.field
        mat = [[F.zero] * len(src) for _ in tgt]
        for n, col in enumerate(self.diff.get(bd, [])):
            for m, x in col.items():
                mat[m][n] = x
        return mat

    def d_squared_check(self) -> Verdict:
        for (i, j), cl in self.cells.items():
            for n, cell in enumerate(cl):
                first = {self.cells[(i - 1, j)][m]: x for m, x in self.diff[i, j][n].items()}
                if self.boundary(first):
                    return Verdict(False, "d(d(x)) != 0", {"cell": cell})
        return Verdict(True)

    # -- products --------------------------------------------------------------------

    def cell_degree(self, cell: Cell) -> int:
        return self.C.space(cell[0]).degrees[cell[2]]

    def multiply_cells(self, a: Cell, b: Cell) -> Dict[Cell, object]:
        if not self.C.monoidal:
            raise PresheafError("coefficient presheaf carries no product")
        F = self.field
        p, S, k1 = a
        q, T, k2 = b
        sign = -1 if (self.cell_degree(a) * self.P.rank[q]) % 2 else 1
        coeff = self.C.product(p, k1, q, k2)
        out: Dict[Cell, object] = {}
        for s in self.P.min_upper_bounds(p, q):
            c_s = {k: c for (t, k), c in coeff.items() if t == s}
            if not c_s:
                continue
            for U, c in self.osa.mul(S, T, s).items():
                for k, x in c_s.items():
                    key = (s, U, k)
                    out[key] = F.norm(out.get(key, F.zero) + sign * c * x)
        return {a: b for a, b in out.items() if b}

    def multiply(self, x: Dict[Cell, object], y: Dict[Cell, object]) -> Dict[Cell, object]:
        F = self.field
        out: Dict[Cell, object] = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for key, c in self.multiply_cells(a, b).items():
                    out[key] = F.norm(out.get(key, F.zero) + ca * cb * c)
        return {a: b for a, b in out.items() if b}

    def unit(self) -> Optional[Cell]:
        u = self.C.unit()
        if u is None:
            return None
        return (u[0], (), u[1])

    def euler_rows(self) -> Dict[int, int]:
        """Row-wise alternating cell counts sum_i (-1)^i #cells(i, j)."""
        out: Dict[int, int] = {}
        for (i, j), cl in self.cells.items():
            out[j] = out.get(j, 0) + (-1) ** i * len(cl)
        return out

    def e1_poly(self) -> LaurentPoly2:
        return LaurentPoly2({(-i, j): len(cl) for (i, j), cl in self.cells.items()})


def build_complex(P: RankedPoset, C: Presheaf, check_presheaf: bool = False,
                  check_poset: bool = False) -> OSComplex:
    if check_poset:
        v = check_locally_geometric(P)
        if not v:
            raise PosetError(f"not locally geometric: {v.reason} {v.certificate}")
    if check_presheaf:
        v = validate(C)
        if not v:
            raise PresheafError(f"invalid presheaf: {v.reason} {v.certificate}")
    return OSComplex(P, C)


# ---------------------------------------------------------------------------
# E2 page


@dataclass
class E2Page:
    dims: Dict[Bideg, int]
    field: Optional[Field] = None
    reps: Dict[Bideg, List[Dict[Cell, object]]] = dataclasses.field(default_factory=dict)
    product_table: Optional[Dict[tuple, Dict[tuple, object]]] = None
    weights: bool = False
    collapse: str = "unknown"
    complex: Optional[OSComplex] = dataclasses.field(default=None, repr=False)
    _reducers: Dict[Bideg, Echelon] = dataclasses.field(default_factory=dict, repr=False)

    def generators(self) -> List[tuple]:
        """Class labels (i, j, k) in deterministic order."""
        return [(i, j, k) for (i, j) in sorted(self.dims) for k in range(self.dims[i, j])]

    def poincare(self) -> LaurentPoly2:
        """Total-degree Poincare polynomial sum dim * t^(j - i)."""
        out: Dict[tuple, int] = {}
        for (i, j), d in self.dims.items():
            if d:
                out[0, j - i] = out.get((0, j - i), 0) + d
        return LaurentPoly2(out)

    def two_variable(self) -> LaurentPoly2:
        return LaurentPoly2({(-i, j): d for (i, j), d in self.dims.items() if d})

    def betti(self) -> List[int]:
        p = self.poincare()
        return p.t_coeffs() if p else [0]

    def euler_rows(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for (i, j), d in self.dims.items():
            out[j] = out.get(j, 0) + (-1) ** i * d
        return {j: v for j, v in out.items()}

    def euler_char(self) -> int:
        return sum((-1) ** (j - i) * d for (i, j), d in self.dims.items())

    def weight_table(self) -> Dict[int, Dict[int, int]]:
        """{total degree k: {weight j: dim}} with weight = coefficient degree."""
        out: Dict[int, Dict[int, int]] = {}
        for (i, j), d in sorted(self.dims.items()):
            if d:
                row = out.setdefault(j - i, {})
                row[j] = row.get(j, 0) + d
        return out

    def label(self) -> str:
        return "E2 (upper model)" if self.collapse == "unknown" else "E2 = Einf"

    # -- reduction of cycles to class coordinates --

    def coordinates(self, bd: Bideg, cycle: Dict[Cell, object]) -> Dict[int, object]:
        """Coordinates of a cycle in the representative basis, modulo boundaries."""
        ech = self._reducers.get(bd)
        if ech is None:
            return {}
        K = self.complex
        vec = {}
        for cell, c in cycle.items():
            b, n = K.pos[cell]
            if b != bd:
                raise ComplexError(f"cycle component outside bidegree {bd}")
            vec[n] = c
        combo = ech.express(vec)
        return {t[1]: c for t, c in combo.items() if t[0] == "r" and c}

    def to_json(self) -> dict:
        data = {
            "dims": [{"col": -i, "row": j, "dim": d} for (i, j), d in sorted(self.dims.items()) if d],
            "poincare": self.poincare().to_str(),
            "collapse": self.collapse,
        }
        if self.weights:
            data["weights"] = [{"degree": k, "weight": w, "dim": d}
                               for k, row in sorted(self.weight_table().items()) for w, d in sorted(row.items())]
        if self.product_table is not None:
            from .presheaf import _num
            data["product_table"] = [
                {"a": list(a), "b": list(b), "out": [[_num(c), list(g)] for g, c in sorted(out.items())]}
                for (a, b), out in sorted(self.product_table.items()) if out]
        return data

    def to_text(self) -> str:
        lines = [f"{self.label()}  collapse: {self.collapse}"]
        for (i, j), d in sorted(self.dims.items()):
            if d:
                lines.append(f"  E2[{-i},{j}] = {d}")
        lines.append(f"Poincare: {self.poincare().to_str()}")
        lines.append("Betti: (" + ", ".join(str(b) for b in self.betti()) + ")")
        if self.weights:
            for k, row in sorted(self.weight_table().items()):
                parts = ", ".join(f"weight {w}: {d}" for w, d in sorted(row.items()))
                lines.append(f"  H^{k}: {parts}")
        return "\n".join(lines)


def homology(K: OSComplex) -> E2Page:
    F = K.field
    dims: Dict[Bideg, int] = {}
    reps: Dict[Bideg, List[Dict[Cell, object]]] = {}
    reducers: Dict[Bideg, Echelon] = {}
    for bd in sorted(K.cells):
        i, j = bd
        cl = K.cells[bd]
        n = len(cl)
        ech = Echelon(F, n)
        # boundaries coming in from column i + 1
        for t, col in enumerate(K.diff.get((i + 1, j), [])):
            if col:
                ech.add(dict(col), ("b", t))
        if (i - 1, j) in K.cells:
            ker = kernel_basis(K.matrix(bd), F, ncols=n)
        else:
            ker = [[F.one if a == b else F.zero for a in range(n)] for b in range(n)]
        chosen = []
        for v in ker:
            sv = {a: x for a, x in enumerate(v) if x}
            if ech.add(sv, ("r", len(chosen))):
                chosen.append({cl[a]: x for a, x in sv.items()})
        dims[bd] = len(chosen)
        reps[bd] = chosen
        reducers[bd] = ech
    page = E2Page(dims, F, reps, complex=K, _reducers=reducers)
    return page


def leibniz_check(K: OSComplex, exhaustive: bool = True, samples: int = 2000, seed: int = 0) -> Verdict:
    """d(ab) = d(a) b + (-1)^(deg(c_a) - r(p_a)) a d(b) on basis cells."""
    import random
    F = K.field
    cells = [c for bd in sorted(K.cells) for c in K.cells[bd]]
    if exhaustive:
        pairs = ((a, b) for a in cells for b in cells)
    else:
        rng = random.Random(seed)
        pairs = ((rng.choice(cells), rng.choice(cells)) for _ in range(samples))
    for a, b in pairs:
        ab = K.multiply_cells(a, b)
        left = K.boundary(ab)
        da = K.boundary({a: F.one})
        db = K.boundary({b: F.one})
        sign = -1 if (K.cell_degree(a) - K.P.rank[a[0]]) % 2 else 1
        right = K.multiply(da, {b: F.one})
        for key, c in K.multiply({a: F.one}, db).items():
            right[key] = F.norm(right.get(key, F.zero) + sign * c)
        right = {k: v for k, v in right.items() if v}
        if left != right:
            return Verdict(False, "Leibniz rule fails", {"a": a, "b": b})
    return Verdict(True)


def e2_ring(K: OSComplex, page: Optional[E2Page] = None) -> E2Page:
    """Attach the product table of homology classes to the page."""
    if page is None:
        page = homology(K)
    table: Dict[tuple, Dict[tuple, object]] = {}
    gens = page.generators()
    rep = {g: page.reps[g[0], g[1]][g[2]] for g in gens}
    for a in gens:
        for b in gens:
            prod = K.multiply(rep[a], rep[b])
            bd = (a[0] + b[0], a[1] + b[1])
            if not prod:
                table[a, b] = {}
                continue
            if bd not in page.dims:
                raise ComplexError(f"product landed in an empty bidegree {bd}")
            coords = page.coordinates(bd, prod)
            table[a, b] = {(bd[0], bd[1], k): c for k, c in coords.items()}
    page.product_table = table
    return page


def dg1_generation_check(page: E2Page) -> bool:
    """True iff the classes in columns 0 and -1 generate every bidegree under the product."""
    if page.product_table is None:
        raise ComplexError("page has no product table")
    F = page.field
    table = page.product_table
    gens = [g for g in page.generators() if g[0] <= 1]

    def mul(x: Dict[tuple, object], y: Dict[tuple, object]) -> Dict[tuple, object]:
        out: Dict[tuple, object] = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for g, c in table.get((a, b), {}).items():
                    out[g] = F.norm(out.get(g, F.zero) + ca * cb * c)
        return {k: v for k, v in out.items() if v}

    label = {g: n for n, g in enumerate(page.generators())}
    span = Echelon(F)
    basis: List[Dict[tuple, object]] = []

    def add(v):
        if span.add({label[g]: c for g, c in v.items()}):
            basis.append(v)
            return True
        return False

    frontier = []
    for g in gens:
        v = {g: F.one}
        if add(v):
            frontier.append(v)
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = mul(v, {g: F.one})
                if w and add(w):
                    nxt.append(w)
        frontier = nxt
    return len(basis) == sum(page.dims.values())


def subinclusion_e2(P: RankedPoset, C: Presheaf, p: int,
                    K: Optional[OSComplex] = None, page: Optional[E2Page] = None):
    """Map on E2 induced by A*([0, p], C) -> A*(P, C), as matrices per bidegree.

    Returns (small_page, page, maps) with maps[(i, j)] having one column per
    class of the small page and one row per class of the big page.
    """
    from .poset import induced
    from .presheaf import ExplicitPresheaf
    sub, old = induced(P, [x for x in range(P.n) if P.leq(x, p)], P.bottom)
    old_pos = {o: n for n, o in enumerate(old)}
    spaces = {n: C.space(o) for n, o in enumerate(old)}
    maps = {}
    for q in range(sub.n):
        for r in sub.upper_covers[q]:
            maps[r, q] = C.cover_map(old[r], old[q])
    products = None
    unit = None
    if C.monoidal:
        products = {}
        for a in range(sub.n):
            for b in range(sub.n):
                for i in range(C.dim(old[a])):
                    for j in range(C.dim(old[b])):
                        out = {}
                        for (s, k), c in C.product(old[a], i, old[b], j).items():
                            if s in old_pos:
                                out[old_pos[s], k] = c
                        products[a, i, b, j] = out
        u = C.unit()
        if u is not None:
            unit = (old_pos[u[0]], u[1])
    Csub = ExplicitPresheaf(sub, C.field, spaces, maps, products, unit)
    Ksub = OSComplex(sub, Csub)
    small = homology(Ksub)
    if K is None:
        K = OSComplex(P, C)
    if page is None:
        page = homology(K)
    # translate atom positions of the subposet into those of P
    atom_map = {sub.atom_position(a): P.atom_position(old[a]) for a in sub.atom_order}
    out: Dict[Bideg, list] = {}
    F = K.field
    for bd, reps in small.reps.items():
        rows = page.dims.get(bd, 0)
        mat = [[F.zero] * len(reps) for _ in range(rows)]
        for col, z in enumerate(reps):
            big = {(old[q], tuple(atom_map[x] for x in S), k): c for (q, S, k), c in z.items()}
            for r, c in page.coordinates(bd, big).items():
                mat[r][col] = c
        out[bd] = mat
    return small, page, out


def page_from_json(data) -> E2Page:
    """E2 page with explicit dims and (optional) product table, e.g. for hand-built controls."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    from .exactfield import get_field
    F = get_field(data.get("field", "Q"))
    dims = {(-int(e["col"]), int(e["row"])): int(e["dim"]) for e in data["dims"]}
    table = None
    if "product_table" in data:
        table = {}
        for e in data["product_table"]:
            table[tuple(e["a"]), tuple(e["b"])] = {tuple(g): F.coerce(c) for c, g in e["out"]}
    return E2Page(dims, F, product_table=table, collapse=data.get("collapse", "unknown"))
