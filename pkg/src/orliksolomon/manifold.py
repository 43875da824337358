"""Cohomology data of a manifold M and arithmetic in H*(M)^{(x)k}.

Tensor elements are dicts ``{(b_1, ..., b_k): scalar}`` over basis indices of
H*(M).  All sign rules come from one Koszul convention: moving a homogeneous
factor of degree d1 past one of degree d2 costs (-1)^(d1*d2).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactfield import GF2, QQ, Field, get_field
from .laurent import LaurentPoly2
from .poset import Verdict

Tensor = Dict[Tuple[int, ...], object]


class ManifoldError(ValueError):
    pass


@dataclass
class ManifoldData:
    real_dim: int
    field: Field
    names: List[str]
    degrees: List[int]
    cup: Dict[Tuple[int, int], Dict[int, object]]
    diagonal_class: Optional[Dict[Tuple[int, int], object]] = None
    zero_diagonal: bool = False
    projective_complex: bool = False
    name: str = "M"
    unit: int = field(init=False, default=0)

    def __post_init__(self):
        self.field = get_field(self.field)
        F = self.field
        if len(self.names) != len(self.degrees):
            raise ManifoldError("names and degrees differ in length")
        zero_deg = [i for i, d in enumerate(self.degrees) if d == 0]
        if not zero_deg:
            raise ManifoldError("no degree-0 class (unit)")
        self.unit = zero_deg[0]
        for d in self.degrees:
            if d < 0 or d > self.real_dim:
                raise ManifoldError(f"degree {d} outside [0, {self.real_dim}]")
        table: Dict[Tuple[int, int], Dict[int, object]] = {}
        for (i, j), out in self.cup.items():
            row = {k: F.norm(F.coerce(c)) for k, c in out.items()}
            table[i, j] = {k: c for k, c in row.items() if c}
        u = self.unit
        for i in range(len(self.names)):
            table.setdefault((u, i), {i: F.one})
            table.setdefault((i, u), {i: F.one})
        self.cup = table
        if self.diagonal_class is not None:
            dc = {(i, j): F.norm(F.coerce(c)) for (i, j), c in self.diagonal_class.items()}
            self.diagonal_class = {k: c for k, c in dc.items() if c}
            if not self.diagonal_class:
                self.zero_diagonal = True
        if self.zero_diagonal:
            self.diagonal_class = {}

    # -- basic invariants --------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def betti(self) -> List[int]:
        out = [0] * (self.real_dim + 1)
        for d in self.degrees:
            out[d] += 1
        return out

    def poincare(self) -> LaurentPoly2:
        return LaurentPoly2.from_t_coeffs(self.betti)

    def euler_char(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.betti))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ManifoldError(f"unknown basis element {name!r}") from None

    @property
    def has_diagonal(self) -> bool:
        return self.diagonal_class is not None

    def mul(self, i: int, j: int) -> Dict[int, object]:
        return self.cup.get((i, j), {})

    def euler_class(self) -> Dict[int, object]:
        """Image of the diagonal class under multiplication H*(M)(x)H*(M) -> H*(M)."""
        F = self.field
        out: Dict[int, object] = {}
        for (i, j), c in (self.diagonal_class or {}).items():
            for k, x in self.mul(i, j).items():
                out[k] = F.norm(out.get(k, F.zero) + c * x)
        return {k: v for k, v in out.items() if v}

    def supports_presheaf(self) -> Optional[str]:
        """None if the diagonal presheaf can be built, else the reason it cannot."""
        if self.field is QQ and self.real_dim % 2:
            return "odd-dimensional manifolds over Q need Thom-class orientation data (unsupported)"
        if self.diagonal_class is None:
            return "no diagonal class supplied and zero_diagonal not asserted"
        return None

    # -- tensor arithmetic ---------------------------------------------------------

    def tensor_mul(self, x: Tensor, y: Tensor) -> Tensor:
        """Product in H*(M)^{(x)k} with the Koszul sign."""
        F = self.field
        deg = self.degrees
        out: Dict[Tuple[int, ...], object] = {}
        for a, ca in x.items():
            for b, cb in y.items():
                sign = 0
                if F is not GF2:
                    # b_j moves left past a_i for every i > j
                    acc = 0
                    for j in range(len(b) - 1, -1, -1):
                        if j + 1 < len(a):
                            acc += deg[a[j + 1]]
                        sign += acc * deg[b[j]]
                terms = [((), ca * cb * (-1 if sign & 1 else 1))]
                for ai, bi in zip(a, b):
                    prod = self.mul(ai, bi)
                    if not prod:
                        terms = []
                        break
                    terms = [(t + (k,), c * v) for t, c in terms for k, v in prod.items()]
                for t, c in terms:
                    out[t] = F.norm(out.get(t, F.zero) + c)
        return {k: v for k, v in out.items() if v}

    def regroup(self, x: Tensor, targets: Sequence[int], k_out: int) -> Tensor:
        """Pull back along a diagonal: slot i of x is multiplied into slot targets[i].

        Slots landing in the same target are multiplied in their original
        order after a Koszul-signed stable sort by target.
        """
        F = self.field
        deg = self.degrees
        order = sorted(range(len(targets)), key=lambda i: (targets[i], i))
        out: Dict[Tuple[int, ...], object] = {}
        for t, c in x.items():
            sign = 0
            if F is not GF2:
                for a in range(len(t)):
                    for b in range(a + 1, len(t)):
                        if targets[a] > targets[b]:
                            sign += deg[t[a]] * deg[t[b]]
            slots: List[Dict[int, object]] = [{self.unit: F.one} for _ in range(k_out)]
            for i in order:
                cur = slots[targets[i]]
                nxt: Dict[int, object] = {}
                for k, v in cur.items():
                    for k2, v2 in self.mul(k, t[i]).items():
                        nxt[k2] = F.norm(nxt.get(k2, F.zero) + v * v2)
                slots[targets[i]] = {k: v for k, v in nxt.items() if v}
            terms = [((), c * (-1 if sign & 1 else 1))]
            for s in slots:
                terms = [(tt + (k,), cc * v) for tt, cc in terms for k, v in s.items()]
            for tt, cc in terms:
                out[tt] = F.norm(out.get(tt, F.zero) + cc)
        return {k: v for k, v in out.items() if v}

    def spread(self, x: Tensor, positions: Sequence[int], n: int) -> Tensor:
        """Place the slots of x at increasing ``positions`` of an n-fold tensor, unit elsewhere."""
        out = {}
        for t, c in x.items():
            full = [self.unit] * n
            for p, b in zip(positions, t):
                full[p] = b
            out[tuple(full)] = c
        return out

    def diagonal_tensor(self, i: int, j: int, n: int) -> Tensor:
        """The diagonal class of the (i, j) factor pair of M^n, as an n-fold tensor (i < j)."""
        out = {}
        for (a, b), c in (self.diagonal_class or {}).items():
            full = [self.unit] * n
            full[i] = a
            full[j] = b
            out[tuple(full)] = c
        return out

    def tensor_degree(self, t: Sequence[int]) -> int:
        return sum(self.degrees[b] for b in t)

    # -- validation ------------------------------------------------------------------

    def validate(self) -> Verdict:
        F = self.field
        n = self.dim
        deg = self.degrees
        if self.betti[0] != 1:
            return Verdict(False, "M must be connected (b0 = 1)", {"betti": self.betti})
        for (i, j), out in self.cup.items():
            for k in out:
                if deg[k] != deg[i] + deg[j]:
                    return Verdict(False, "cup product does not add degrees", {"pair": (self.names[i], self.names[j])})
        for i in range(n):
            for j in range(n):
                ij = self.mul(i, j)
                ji = self.mul(j, i)
                s = -1 if (deg[i] * deg[j]) % 2 else 1
                if any(F.norm(ij.get(k, 0) - s * ji.get(k, 0)) for k in set(ij) | set(ji)):
                    return Verdict(False, "cup product is not graded-commutative",
                                   {"pair": (self.names[i], self.names[j])})
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    left = self.tensor_mul(self.tensor_mul({(i,): F.one}, {(j,): F.one}), {(k,): F.one})
                    right = self.tensor_mul({(i,): F.one}, self.tensor_mul({(j,): F.one}, {(k,): F.one}))
                    if left != right:
                        return Verdict(False, "cup product is not associative",
                                       {"triple": (self.names[i], self.names[j], self.names[k])})
        if self.diagonal_class:
            for (a, b) in self.diagonal_class:
                if deg[a] + deg[b] != self.real_dim:
                    return Verdict(False, "diagonal class is not of degree m",
                                   {"term": (self.names[a], self.names[b])})
            if not (F is QQ and self.real_dim % 2):
                for x in range(n):
                    left = self.tensor_mul({(x, self.unit): F.one}, self.diagonal_class)
                    right = self.tensor_mul({(self.unit, x): F.one}, self.diagonal_class)
                    if left != right:
                        return Verdict(False, "diagonal class is not symmetric: (x(x)1)D != (1(x)x)D",
                                       {"x": self.names[x]})
            if self.projective_complex:
                top = [i for i in range(n) if deg[i] == self.real_dim]
                e = self.euler_class()
                want = {top[0]: F.norm(self.euler_char())} if top else {}
                want = {k: v for k, v in want.items() if v}
                if e != want:
                    return Verdict(False, "multiplication image of the diagonal class is not chi(M) times the top class",
                                   {"euler_class": {self.names[k]: str(v) for k, v in e.items()},
                                    "euler_char": self.euler_char()})
        return Verdict(True)

    # -- serialisation ------------------------------------------------------------------

    def to_json(self) -> dict:
        def num(c):
            return str(c) if isinstance(c, Fraction) and c.denominator != 1 else int(c)

        data = {
            "name": self.name,
            "real_dim": self.real_dim,
            "field": self.field.name,
            "betti": self.betti,
            "basis": [{"name": nm, "deg": d} for nm, d in zip(self.names, self.degrees)],
            "cup": [{"i": self.names[i], "j": self.names[j],
                     "out": [[num(c), self.names[k]] for k, c in out.items()]}
                    for (i, j), out in sorted(self.cup.items()) if i != self.unit and j != self.unit],
            "zero_diagonal": bool(self.zero_diagonal),
            "projective_complex": bool(self.projective_complex),
        }
        if self.diagonal_class:
            data["diagonal_class"] = [[num(c), self.names[i], self.names[j]]
                                      for (i, j), c in sorted(self.diagonal_class.items())]
        return data


def manifold_from_json(data, field: Optional[str] = None) -> ManifoldData:
    """Read the manifold JSON format; ``field`` overrides the file's field tag."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    F = get_field(field or data.get("field", "Q"))
    m = int(data["real_dim"])
    if "basis" in data:
        names = [str(b["name"]) for b in data["basis"]]
        degrees = [int(b["deg"]) for b in data["basis"]]
    else:
        names, degrees = [], []
        for d, b in enumerate(data["betti"]):
            for k in range(b):
                names.append("1" if d == 0 and k == 0 else f"x{d}_{k}")
                degrees.append(d)
    if "betti" in data:
        betti = [0] * (m + 1)
        for d in degrees:
            betti[d] += 1
        given = list(data["betti"]) + [0] * (m + 1 - len(data["betti"]))
        if given[:m + 1] != betti:
            raise ManifoldError(f"betti {data['betti']} disagrees with the basis degrees {betti}")
    pos = {nm: i for i, nm in enumerate(names)}

    def ix(name):
        if str(name) not in pos:
            raise ManifoldError(f"unknown basis element {name!r}")
        return pos[str(name)]

    cup: Dict[Tuple[int, int], Dict[int, object]] = {}
    for entry in data.get("cup", []):
        out = {}
        for coef, k in entry["out"]:
            out[ix(k)] = F.coerce(coef)
        cup[ix(entry["i"]), ix(entry["j"])] = out
    diag = None
    if data.get("diagonal_class") is not None:
        diag = {}
        for coef, i, j in data["diagonal_class"]:
            diag[ix(i), ix(j)] = F.norm(diag.get((ix(i), ix(j)), 0) + F.coerce(coef))
    return ManifoldData(m, F, names, degrees, cup, diag, bool(data.get("zero_diagonal", False)),
                        bool(data.get("projective_complex", False)), name=data.get("name", "M"))


# ---------------------------------------------------------------------------
# standard manifolds


def euclidean(m: int, field="GF2") -> ManifoldData:
    """R^m: only H^0, zero diagonal class (non-compact)."""
    return ManifoldData(m, field, ["1"], [0], {}, None, zero_diagonal=True, name=f"R^{m}")


def sphere(m: int, field="Q", projective: bool = False) -> ManifoldData:
    """S^m with its diagonal class w(x)1 + (-1)^m 1(x)w."""
    F = get_field(field)
    diag = {(1, 0): 1, (0, 1): (-1) ** m}
    return ManifoldData(m, F, ["1", "w"], [0, m], {}, diag, projective_complex=projective,
                        name=f"S^{m}")


def cp1(field="Q") -> ManifoldData:
    M = sphere(2, field, projective=True)
    M.name = "CP^1"
    return M


def cpn(k: int, field="Q") -> ManifoldData:
    """CP^k: truncated polynomial ring on a degree-2 class h."""
    names = ["1"] + [f"h{i}" if i > 1 else "h" for i in range(1, k + 1)]
    degrees = [2 * i for i in range(k + 1)]
    cup = {(i, j): {i + j: 1} for i in range(1, k + 1) for j in range(1, k + 1) if i + j <= k}
    # Poincare dual of the diagonal: sum_i h^i (x) h^(k-i)
    diag = {(i, k - i): 1 for i in range(k + 1)}
    return ManifoldData(2 * k, field, names, degrees, cup, diag, projective_complex=True, name=f"CP^{k}")


def circle(field="GF2") -> ManifoldData:
    return sphere(1, field)


def s1_times_r(field="GF2") -> ManifoldData:
    """S^1 x R: dimension 2, H = <1, a>, diagonal class zero."""
    return ManifoldData(2, field, ["1", "a"], [0, 1], {}, None, zero_diagonal=True, name="S^1xR")


def surface(genus: int, field="Q", projective: bool = True) -> ManifoldData:
    """Closed orientable surface of the given genus (a smooth projective curve)."""
    names = ["1"]
    degrees = [0]
    for i in range(genus):
        names += [f"a{i + 1}", f"b{i + 1}"]
        degrees += [1, 1]
    names.append("w")
    degrees.append(2)
    w = len(names) - 1
    cup = {}
    for i in range(genus):
        a, b = 1 + 2 * i, 2 + 2 * i
        cup[a, b] = {w: 1}
        cup[b, a] = {w: -1}
    diag = {(w, 0): 1, (0, w): 1}
    for i in range(genus):
        a, b = 1 + 2 * i, 2 + 2 * i
        diag[a, b] = -1
        diag[b, a] = 1
    return ManifoldData(2, field, names, degrees, cup, diag, projective_complex=projective,
                        name=f"Sigma_{genus}")


def elliptic_curve(field="Q") -> ManifoldData:
    M = surface(1, field)
    M.name = "E"
    return M


BUILTIN = {
    "R2": lambda f="GF2": euclidean(2, f),
    "R3": lambda f="GF2": euclidean(3, f),
    "S1": circle,
    "S1xR": s1_times_r,
    "CP1": cp1,
    "E": elliptic_curve,
}


def from_betti(betti: Sequence[int], field="Q", zero_diagonal: bool = True, name: str = "M") -> ManifoldData:
    """A manifold model carrying only Betti numbers (all products of positive-degree classes zero)."""
    betti = list(betti)
    if not betti or betti[0] != 1:
        raise ManifoldError("b0 must be 1")
    names, degrees = [], []
    for d, b in enumerate(betti):
        for k in range(b):
            names.append("1" if d == 0 else f"x{d}_{k}")
            degrees.append(d)
    return ManifoldData(len(betti) - 1, field, names, degrees, {}, None, zero_diagonal=zero_diagonal, name=name)
