"""Exact integer Laurent polynomials in two variables s, t."""
from __future__ import annotations

from typing import Dict, Iterable, Tuple

Monomial = Tuple[int, int]


class LaurentPoly2:
    """Finite sum of c * s^a * t^b with integer c and integer (possibly negative) a, b."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Dict[Monomial, int] | None = None):
        self.coeffs: Dict[Monomial, int] = {}
        for k, v in (coeffs or {}).items():
            if v:
                self.coeffs[(int(k[0]), int(k[1]))] = int(v)

    # constructors
    @classmethod
    def const(cls, c: int) -> "LaurentPoly2":
        return cls({(0, 0): c})

    @classmethod
    def mono(cls, s: int = 0, t: int = 0, c: int = 1) -> "LaurentPoly2":
        return cls({(s, t): c})

    @classmethod
    def from_t_coeffs(cls, coeffs: Iterable[int]) -> "LaurentPoly2":
        """Polynomial in t from ascending coefficients [c0, c1, ...]."""
        return cls({(0, i): c for i, c in enumerate(coeffs)})

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, LaurentPoly2):
            return other
        if isinstance(other, int):
            return LaurentPoly2.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly2(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly2({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Monomial, int] = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPoly2(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.coeffs) == 1:
                ((a, b), c), = self.coeffs.items()
                if c in (1, -1):
                    return LaurentPoly2({(-a * -k, -b * -k): c ** -k})
            raise ValueError("negative power of a non-monomial")
        out = LaurentPoly2.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    # evaluation and substitution
    def __call__(self, s=1, t=1):
        from fractions import Fraction
        total = 0
        for (a, b), c in self.coeffs.items():
            total += c * Fraction(s) ** a * Fraction(t) ** b
        return total

    def at_s_equals_t(self) -> "LaurentPoly2":
        out: Dict[Monomial, int] = {}
        for (a, b), c in self.coeffs.items():
            out[(0, a + b)] = out.get((0, a + b), 0) + c
        return LaurentPoly2(out)

    def substitute(self, x: "LaurentPoly2") -> "LaurentPoly2":
        """Treat self as a polynomial in t (no s) and plug in x for t."""
        if any(a for a, _ in self.coeffs):
            raise ValueError("substitute expects a polynomial in t alone")
        out = LaurentPoly2()
        for (_, b), c in self.coeffs.items():
            out = out + c * (x ** b)
        return out

    def t_coeffs(self) -> list:
        """Ascending coefficient list of a polynomial in t with no s and no negative powers."""
        if not self.coeffs:
            return []
        if any(a or b < 0 for a, b in self.coeffs):
            raise ValueError("not an ordinary polynomial in t")
        top = max(b for _, b in self.coeffs)
        return [self.coeffs.get((0, i), 0) for i in range(top + 1)]

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs.values())

    @property
    def has_s(self) -> bool:
        return any(a for a, _ in self.coeffs)

    # printing
    def to_str(self, t_order: str = "asc") -> str:
        """Monomials ordered by s-exponent descending, then t by ``t_order``."""
        if not self.coeffs:
            return "0"
        sign = 1 if t_order == "asc" else -1
        keys = sorted(self.coeffs, key=lambda k: (-k[0], sign * k[1]))
        parts = []
        for i, k in enumerate(keys):
            c = self.coeffs[k]
            body = _mono_str(*k)
            mag = abs(c)
            if body == "":
                term = str(mag)
            elif mag == 1:
                term = body
            else:
                term = f"{mag}{body}"
            if i == 0:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(("+ " if c > 0 else "- ") + term)
        return " ".join(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"LaurentPoly2({self.to_str()!r})"


def _mono_str(a: int, b: int) -> str:
    out = ""
    if a:
        out += "s" if a == 1 else f"s^{a}"
    if b:
        out += "t" if b == 1 else f"t^{b}"
    return out


S = LaurentPoly2.mono(1, 0)
T = LaurentPoly2.mono(0, 1)
ONE = LaurentPoly2.const(1)
