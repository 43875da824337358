"""Exact scalars and dense/sparse linear algebra over Q and GF(2).

Scalars over Q are ``fractions.Fraction`` (always reduced, positive
denominator).  Scalars over GF(2) are the Python ints 0 and 1.  Generic code
does arithmetic with the ordinary operators and then calls ``field.norm`` so
that GF(2) results wrap back into {0, 1}.

Pivoting is deterministic everywhere: the first nonzero entry in column order.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Hashable, Iterable, List, Sequence, Tuple


class Field:
    name = "?"
    zero = 0
    one = 1

    def norm(self, x):
        raise NotImplementedError

    def coerce(self, x):
        return self.norm(x)

    def inv(self, x):
        raise NotImplementedError

    def __repr__(self):
        return f"<field {self.name}>"


class _Rationals(Field):
    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def norm(self, x):
        return x if isinstance(x, Fraction) else Fraction(x)

    def coerce(self, x):
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)


class _GF2(Field):
    name = "GF2"
    zero = 0
    one = 1

    def norm(self, x):
        return int(x) & 1

    def coerce(self, x):
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            if x.denominator % 2 == 0:
                raise ValueError(f"{x} has no image in GF(2)")
            x = x.numerator
        return int(x) & 1

    def inv(self, x):
        if not x & 1:
            raise ZeroDivisionError("inverse of zero")
        return 1


QQ = _Rationals()
GF2 = _GF2()


def get_field(name) -> Field:
    if isinstance(name, Field):
        return name
    key = str(name).strip().upper().replace("(", "").replace(")", "")
    if key in ("Q", "QQ", "RATIONAL", "RATIONALS"):
        return QQ
    if key in ("GF2", "Z2", "F2", "GF_2"):
        return GF2
    raise ValueError(f"unknown field {name!r}; expected Q or GF2")


Matrix = List[List]


def zeros(rows: int, cols: int, field: Field = QQ) -> Matrix:
    return [[field.zero] * cols for _ in range(rows)]


def identity(n: int, field: Field = QQ) -> Matrix:
    m = zeros(n, n, field)
    for i in range(n):
        m[i][i] = field.one
    return m


def matmul(a: Matrix, b: Matrix, field: Field = QQ) -> Matrix:
    """Product of an (r x k) and a (k x c) matrix.  Empty shapes are allowed."""
    if not a:
        return []
    k = len(a[0])
    if k != len(b):
        raise ValueError(f"shape mismatch: {len(a)}x{k} times {len(b)}x?")
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols, field)
    for i, row in enumerate(a):
        o = out[i]
        for t, x in enumerate(row):
            if x:
                bt = b[t]
                for j in range(cols):
                    if bt[j]:
                        o[j] = o[j] + x * bt[j]
        out[i] = [field.norm(v) for v in o]
    return out


def matvec(a: Matrix, v: Sequence, field: Field = QQ) -> list:
    return [field.norm(sum((x * y for x, y in zip(row, v) if x and y), field.zero)) for row in a]


def is_zero_matrix(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


# ---------------------------------------------------------------------------
# row echelon machinery


def _rank_gf2(rows: Iterable[Sequence]) -> int:
    # bit-packed elimination; each row is an int
    basis: Dict[int, int] = {}
    r = 0
    for row in rows:
        v = 0
        for j, x in enumerate(row):
            if x & 1:
                v |= 1 << j
        while v:
            low = v & -v
            if low in basis:
                v ^= basis[low]
            else:
                basis[low] = v
                r += 1
                break
    return r


def _rank_qq(rows: Iterable[Sequence]) -> int:
    # fraction-free elimination on primitive integer rows, stored sparsely
    pivots: Dict[int, Dict[int, int]] = {}
    r = 0
    for row in rows:
        den = 1
        for x in row:
            if x:
                d = Fraction(x).denominator
                den = den * d // gcd(den, d)
        v = {j: int(Fraction(x) * den) for j, x in enumerate(row) if x}
        while v:
            c = min(v)
            piv = pivots.get(c)
            if piv is None:
                g = 0
                for x in v.values():
                    g = gcd(g, x)
                pivots[c] = {j: x // g for j, x in v.items()}
                r += 1
                break
            a, b = piv[c], v[c]
            # v <- a*v - b*piv  kills column c
            new = {j: a * x for j, x in v.items()}
            for j, x in piv.items():
                y = new.get(j, 0) - b * x
                if y:
                    new[j] = y
                else:
                    new.pop(j, None)
            g = 0
            for x in new.values():
                g = gcd(g, x)
            v = {j: x // g for j, x in new.items()} if g > 1 else new
    return r


def rank(m: Matrix, field: Field = QQ) -> int:
    """Row rank by exact Gaussian elimination (0 for an empty matrix)."""
    if not m or not m[0]:
        return 0
    if field is GF2:
        return _rank_gf2(m)
    return _rank_qq(m)


def rref(m: Matrix, field: Field = QQ) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns (nonzero rows only)."""
    rows = [[field.norm(x) for x in row] for row in m]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.norm(x * inv) for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [field.norm(x - f * y) for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def kernel_basis(m: Matrix, field: Field = QQ, ncols: int | None = None) -> List[list]:
    """Basis of {v : m v = 0}.  ``ncols`` is needed when ``m`` has no rows."""
    if ncols is None:
        if not m:
            raise ValueError("ncols required for a matrix without rows")
        ncols = len(m[0])
    if not m:
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(m, field)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for row, pc in zip(red, pivots):
            if row[f]:
                v[pc] = field.norm(-row[f])
        basis.append(v)
    return basis


class Echelon:
    """Incrementally built echelon basis of a subspace of field^ncols.

    Vectors are sparse dicts ``{col: scalar}``.  Every accepted vector carries
    a tag; ``express`` writes a vector of the span as a combination of the
    tagged originals.
    """

    def __init__(self, field: Field, ncols: int | None = None):
        self.field = field
        self.ncols = ncols
        self.rows: List[Tuple[int, Dict[int, object], Dict[Hashable, object]]] = []
        self._pivot_index: Dict[int, int] = {}
        self.tags: List[Hashable] = []

    def __len__(self):
        return len(self.rows)

    def _reduce(self, v: Dict[int, object]):
        F = self.field
        v = {j: x for j, x in v.items() if x}
        combo: Dict[Hashable, object] = {}
        for pivot, row, rcombo in self.rows:
            c = v.get(pivot)
            if not c:
                continue
            for j, x in row.items():
                y = F.norm(v.get(j, F.zero) - c * x)
                if y:
                    v[j] = y
                else:
                    v.pop(j, None)
            for t, x in rcombo.items():
                y = F.norm(combo.get(t, F.zero) + c * x)
                if y:
                    combo[t] = y
                else:
                    combo.pop(t, None)
        return v, combo

    def add(self, v, tag: Hashable = None) -> bool:
        """Add ``v``; return False (and store nothing) if it is already in the span."""
        F = self.field
        if not isinstance(v, dict):
            v = {j: x for j, x in enumerate(v) if x}
        res, combo = self._reduce(v)
        if not res:
            return False
        pivot = min(res)
        inv = F.inv(res[pivot])
        row = {j: F.norm(x * inv) for j, x in res.items()}
        # row = inv * (v - combo)  in terms of originals
        rc = {t: F.norm(-x * inv) for t, x in combo.items()}
        rc[tag] = F.norm(rc.get(tag, F.zero) + inv)
        rc = {t: x for t, x in rc.items() if x}
        self._pivot_index[pivot] = len(self.rows)
        self.rows.append((pivot, row, rc))
        self.tags.append(tag)
        return True

    def contains(self, v) -> bool:
        if not isinstance(v, dict):
            v = {j: x for j, x in enumerate(v) if x}
        res, _ = self._reduce(v)
        return not res

    def express(self, v) -> Dict[Hashable, object]:
        """Coefficients c_t with v = sum_t c_t * original_t; ValueError if v is not in the span."""
        if not isinstance(v, dict):
            v = {j: x for j, x in enumerate(v) if x}
        res, combo = self._reduce(v)
        if res:
            raise ValueError("vector is not in the span")
        return combo

    def residual(self, v) -> Dict[int, object]:
        if not isinstance(v, dict):
            v = {j: x for j, x in enumerate(v) if x}
        return self._reduce(v)[0]


def extend_basis(base: Sequence, candidates: Sequence, field: Field = QQ) -> List[int]:
    """Indices of ``candidates`` (greedy, in order) completing span(base)."""
    ech = Echelon(field)
    for v in base:
        ech.add(v)
    chosen = []
    for i, v in enumerate(candidates):
        if ech.add(v, i):
            chosen.append(i)
    return chosen


def quotient_basis(space_dim: int, image_vectors: Sequence, field: Field = QQ) -> List[list]:
    """Coordinate vectors completing a basis of field^space_dim modulo span(image).

    Lowest-index coordinates are tried first, so the representatives are the
    unit vectors at the non-pivot columns of the image's echelon form.
    """
    for v in image_vectors:
        if len(v) != space_dim:
            raise ValueError("image vector has the wrong length")
    units = [[field.one if i == j else field.zero for i in range(space_dim)] for j in range(space_dim)]
    return [units[i] for i in extend_basis(image_vectors, units, field)]


def dict_to_dense(v: Dict[int, object], n: int, field: Field = QQ) -> list:
    out = [field.zero] * n
    for j, x in v.items():
        out[j] = x
    return out
