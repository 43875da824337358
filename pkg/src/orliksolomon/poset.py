"""Finite ranked posets, geometric lattices and locally geometric posets.

Elements are dense integer indices ``0..n-1``.  The order relation is kept as
two bitsets per element (``up[i]`` = elements >= i, ``down[i]`` = elements <= i),
so ``leq`` is a shift and a mask.  Labels are opaque metadata (partitions,
subspaces, strings from a JSON file).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

DEFAULT_MAX_ELEMENTS = 50_000


class PosetError(ValueError):
    pass


class SizeGuardError(PosetError):
    pass


def check_size(n: int, max_elements: Optional[int]) -> None:
    cap = DEFAULT_MAX_ELEMENTS if max_elements is None else max_elements
    if cap and n > cap:
        raise SizeGuardError(f"poset has {n} elements, above the cap of {cap} (raise --max-lattice to override)")


def _bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(eq=False)
class RankedPoset:
    """A finite poset given by its cover relation.

    ``covers`` holds pairs ``(q, p)`` meaning p covers q.  Ranks are checked
    against the covers on construction.  ``atom_order`` fixes the total order
    on atoms used by the Orlik-Solomon machinery (defaults to index order).
    """

    n: int
    covers: Sequence[Tuple[int, int]]
    rank: Sequence[int]
    labels: Sequence[Hashable] = ()
    atom_order: Optional[Sequence[int]] = None
    name: str = ""

    def __post_init__(self):
        self.covers = tuple(sorted({(int(q), int(p)) for q, p in self.covers}))
        self.rank = tuple(int(r) for r in self.rank)
        if len(self.rank) != self.n:
            raise PosetError("rank list has the wrong length")
        self.labels = tuple(self.labels) if self.labels else tuple(range(self.n))
        if len(self.labels) != self.n:
            raise PosetError("label list has the wrong length")
        self.upper_covers: List[List[int]] = [[] for _ in range(self.n)]
        self.lower_covers: List[List[int]] = [[] for _ in range(self.n)]
        for q, p in self.covers:
            if not (0 <= q < self.n and 0 <= p < self.n) or q == p:
                raise PosetError(f"bad cover pair {(q, p)}")
            if self.rank[p] != self.rank[q] + 1:
                raise PosetError(f"cover {q} <: {p} does not raise rank by one")
            self.upper_covers[q].append(p)
            self.lower_covers[p].append(q)
        # ranks strictly increase along covers, so rank order is a linear extension
        order = sorted(range(self.n), key=lambda i: (self.rank[i], i))
        down = [1 << i for i in range(self.n)]
        for p in order:
            for q in self.lower_covers[p]:
                down[p] |= down[q]
        up = [1 << i for i in range(self.n)]
        for q in reversed(order):
            for p in self.upper_covers[q]:
                up[q] |= up[p]
        self.down = down
        self.up = up
        self.order = order
        if self.atom_order is None:
            self.atom_order = tuple(i for i in range(self.n) if self.rank[i] == 1 and self.lower_covers[i])
        else:
            self.atom_order = tuple(self.atom_order)
        self._atom_pos = {a: k for k, a in enumerate(self.atom_order)}
        self._mobius: Dict[int, Dict[int, int]] = {}
        self._join_cache: Dict[Tuple[int, int, int], Optional[int]] = {}

    # -- basic order queries ------------------------------------------------

    def leq(self, a: int, b: int) -> bool:
        return bool((self.up[a] >> b) & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def elements_between(self, a: int, b: int) -> List[int]:
        return sorted(_bits(self.up[a] & self.down[b]), key=lambda i: (self.rank[i], i))

    def upper(self, a: int) -> List[int]:
        return sorted(_bits(self.up[a]), key=lambda i: (self.rank[i], i))

    def lower(self, a: int) -> List[int]:
        return sorted(_bits(self.down[a]), key=lambda i: (self.rank[i], i))

    @cached_property
    def minimal(self) -> List[int]:
        return [i for i in range(self.n) if not self.lower_covers[i]]

    @cached_property
    def maximal(self) -> List[int]:
        return [i for i in range(self.n) if not self.upper_covers[i]]

    @cached_property
    def bottom(self) -> int:
        mins = self.minimal
        if len(mins) != 1 or self.rank[mins[0]] != 0:
            raise PosetError("poset has no unique minimum of rank 0")
        return mins[0]

    @cached_property
    def top(self) -> Optional[int]:
        maxs = self.maximal
        return maxs[0] if len(maxs) == 1 else None

    @property
    def atoms(self) -> Tuple[int, ...]:
        return self.atom_order

    def atom_position(self, a: int) -> int:
        return self._atom_pos[a]

    def atoms_below(self, p: int) -> List[int]:
        return [a for a in self.atom_order if self.leq(a, p)]

    def index_of(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise PosetError(f"no element labelled {label!r}") from None

    # -- joins and minimal upper bounds --------------------------------------

    def min_upper_bounds(self, p: int, q: int) -> List[int]:
        """All minimal common upper bounds of p and q (possibly empty)."""
        common = self.up[p] & self.up[q]
        out = []
        for x in _bits(common):
            if self.down[x] & common == 1 << x:
                out.append(x)
        return sorted(out, key=lambda i: (self.rank[i], i))

    def join_below(self, p: int, q: int, s: int) -> int:
        """Join of p, q inside the lattice [0, s]; both must lie below s."""
        key = (p, q, s) if p <= q else (q, p, s)
        hit = self._join_cache.get(key)
        if hit is not None:
            return hit
        common = self.up[p] & self.up[q] & self.down[s]
        found = None
        for x in _bits(common):
            if self.down[x] & common == 1 << x:
                if found is not None:
                    raise PosetError(f"[0,{s}] is not a lattice: {p},{q} have two joins")
                found = x
        if found is None:
            raise PosetError(f"{p} or {q} is not below {s}")
        self._join_cache[key] = found
        return found

    def join_set_below(self, elems: Iterable[int], s: int) -> int:
        acc = self.bottom
        for e in elems:
            acc = self.join_below(acc, e, s)
        return acc

    def join(self, p: int, q: int) -> int:
        """Join in a lattice (the unique minimal upper bound)."""
        mub = self.min_upper_bounds(p, q)
        if len(mub) != 1:
            raise PosetError(f"elements {p},{q} have {len(mub)} minimal upper bounds")
        return mub[0]

    def meet(self, p: int, q: int) -> int:
        common = self.down[p] & self.down[q]
        maxl = [x for x in _bits(common) if self.up[x] & common == 1 << x]
        if len(maxl) != 1:
            raise PosetError(f"elements {p},{q} have {len(maxl)} maximal lower bounds")
        return maxl[0]

    def join_many(self, elems: Iterable[int]) -> int:
        acc = self.bottom
        for e in elems:
            acc = self.join(acc, e)
        return acc

    # -- Mobius function ------------------------------------------------------

    def mobius_row(self, p: int) -> Dict[int, int]:
        row = self._mobius.get(p)
        if row is None:
            row = {}
            for x in self.upper(p):
                if x == p:
                    row[x] = 1
                else:
                    row[x] = -sum(row[y] for y in _bits(self.down[x] & self.up[p]) if y != x)
            self._mobius[p] = row
        return row

    def mobius(self, p: int, q: int) -> int:
        if not self.leq(p, q):
            raise PosetError(f"mobius({p},{q}) undefined: {p} is not <= {q}")
        return self.mobius_row(p)[q]

    # -- serialisation --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "elements": [_jsonable(l) for l in self.labels],
            "covers": [[q, p] for q, p in self.covers],
            "ranks": list(self.rank),
        }

    def __repr__(self):
        return f"RankedPoset(n={self.n}, covers={len(self.covers)}, name={self.name!r})"


def _jsonable(label):
    if isinstance(label, (tuple, list, frozenset)):
        return [_jsonable(x) for x in label]
    return label


def poset_from_json(data, max_elements: Optional[int] = None) -> RankedPoset:
    """Read ``{"elements": [...], "covers": [[q,p],...], "ranks": [...]}``.

    Cover entries may be element indices or labels.  Ranks may be omitted, in
    which case they are computed as the height above the minima.
    """
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    labels = [tuple(x) if isinstance(x, list) else x for x in data["elements"]]
    n = len(labels)
    check_size(n, max_elements)
    lookup = {}
    for i, l in enumerate(labels):
        lookup.setdefault(_key(l), i)

    def idx(x):
        if isinstance(x, int) and not isinstance(x, bool) and 0 <= x < n:
            return x
        k = _key(tuple(x) if isinstance(x, list) else x)
        if k not in lookup:
            raise PosetError(f"unknown element {x!r} in covers")
        return lookup[k]

    covers = [(idx(q), idx(p)) for q, p in data["covers"]]
    ranks = data.get("ranks")
    if ranks is None:
        ranks = _heights(n, covers)
    return RankedPoset(n, covers, ranks, labels, name=data.get("name", ""))


def _key(label):
    return json.dumps(_jsonable(label), sort_keys=True)


def _heights(n, covers):
    below: Dict[int, List[int]] = {i: [] for i in range(n)}
    for q, p in covers:
        below[p].append(q)
    h: Dict[int, int] = {}

    def height(i, stack=()):
        if i in h:
            return h[i]
        if i in stack:
            raise PosetError("cover relation has a cycle")
        h[i] = 0 if not below[i] else 1 + max(height(q, stack + (i,)) for q in below[i])
        return h[i]

    return [height(i) for i in range(n)]


def poset_from_relation(labels: Sequence, leq, max_elements: Optional[int] = None,
                        atom_key=None, name: str = "") -> RankedPoset:
    """Build a ranked poset from a label list and an order predicate.

    Elements are re-sorted by (rank, label) so the element order is canonical.
    """
    labels = list(labels)
    n = len(labels)
    check_size(n, max_elements)
    less = {i: [j for j in range(n) if j != i and leq(labels[j], labels[i])] for i in range(n)}
    lower_covers = {i: [j for j in less[i] if not any(k in less[i] and j in less[k] for k in less[i])]
                    for i in range(n)}
    covers = [(j, i) for i in range(n) for j in lower_covers[i]]
    heights = _heights(n, covers)
    order = sorted(range(n), key=lambda i: (heights[i], labels[i]))
    pos = {old: new for new, old in enumerate(order)}
    new_covers = [(pos[q], pos[p]) for q, p in covers]
    new_labels = [labels[i] for i in order]
    new_ranks = [heights[i] for i in order]
    atom_order = None
    if atom_key is not None:
        atoms = [i for i in range(n) if new_ranks[i] == 1]
        atom_order = sorted(atoms, key=lambda i: atom_key(new_labels[i]))
    return RankedPoset(n, new_covers, new_ranks, new_labels, atom_order=atom_order, name=name)


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    ok: bool
    reason: str = ""
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def is_ranked(P: RankedPoset) -> bool:
    """Every maximal chain of every interval [0, p] has length rank(p)."""
    try:
        b = P.bottom
    except PosetError:
        return False
    return all(P.leq(b, i) for i in range(P.n))


def check_geometric(P: RankedPoset) -> Verdict:
    """Ranked + lattice + semimodular + atomic, with a failure certificate."""
    try:
        bottom = P.bottom
    except PosetError as e:
        return Verdict(False, str(e))
    if P.top is None:
        return Verdict(False, "no unique maximum", {"maximal": P.maximal})
    for i in range(P.n):
        if not P.leq(bottom, i):
            return Verdict(False, "element not above the minimum", {"element": i})
    # heights: every cover raises rank by one (checked on construction), and
    # every element is reachable from the bottom, hence the poset is graded
    joins = {}
    for p in range(P.n):
        for q in range(p, P.n):
            mub = P.min_upper_bounds(p, q)
            if len(mub) != 1:
                return Verdict(False, "missing join", {"pair": (p, q), "min_upper_bounds": mub})
            common = P.down[p] & P.down[q]
            mlb = [x for x in _bits(common) if P.up[x] & common == 1 << x]
            if len(mlb) != 1:
                return Verdict(False, "missing meet", {"pair": (p, q), "max_lower_bounds": mlb})
            joins[p, q] = mub[0]
            r = P.rank
            if r[mlb[0]] + r[mub[0]] > r[p] + r[q]:
                return Verdict(False, "semimodular inequality fails",
                               {"pair": (p, q), "meet": mlb[0], "join": mub[0]})
    atoms = [i for i in range(P.n) if P.rank[i] == 1]
    for p in range(P.n):
        if p == bottom:
            continue
        below = [a for a in atoms if P.leq(a, p)]
        acc = bottom
        for a in below:
            acc = joins[min(acc, a), max(acc, a)]
        if acc != p:
            return Verdict(False, "element is not a join of atoms", {"element": p, "join_of_atoms_below": acc})
    return Verdict(True)


def check_locally_geometric(P: RankedPoset) -> Verdict:
    try:
        b = P.bottom
    except PosetError as e:
        return Verdict(False, str(e))
    for p in range(P.n):
        v = check_geometric(interval(P, b, p))
        if not v:
            return Verdict(False, f"interval [0,{p}] is not geometric: {v.reason}", {"element": p, **v.certificate})
    return Verdict(True)


# ---------------------------------------------------------------------------
# sub-posets


def induced(P: RankedPoset, elems: Sequence[int], base: int, name: str = "") -> Tuple[RankedPoset, List[int]]:
    """Induced subposet on a convex set of elements, ranks shifted so ``base`` has rank 0.

    Returns the subposet and the list mapping new indices to old ones.
    """
    elems = sorted(elems, key=lambda i: (P.rank[i], i))
    pos = {old: new for new, old in enumerate(elems)}
    covers = [(pos[q], pos[p]) for q, p in P.covers if q in pos and p in pos]
    shift = P.rank[base]
    atom_order = [pos[a] for a in sorted((i for i in elems if P.rank[i] == shift + 1),
                                         key=lambda i: _atom_sort_key(P, i))]
    sub = RankedPoset(len(elems), covers, [P.rank[i] - shift for i in elems],
                      [P.labels[i] for i in elems], atom_order=atom_order, name=name)
    return sub, elems


def _atom_sort_key(P: RankedPoset, i: int):
    # inherit the parent's atom order where possible, else index order
    return (0, P.atom_position(i)) if i in P._atom_pos else (1, i)


def interval(P: RankedPoset, a: int, b: int) -> RankedPoset:
    if not P.leq(a, b):
        raise PosetError(f"interval [{a},{b}] is empty: {a} is not <= {b}")
    return induced(P, _bits(P.up[a] & P.down[b]), a, name=f"[{a},{b}]")[0]


def upper_set(P: RankedPoset, p: int) -> RankedPoset:
    return induced(P, _bits(P.up[p]), p, name=f"[{p},oo)")[0]


def lower_set(P: RankedPoset, p: int) -> RankedPoset:
    return induced(P, _bits(P.down[p]), P.bottom, name=f"[0,{p}]")[0]


def truncate(P: RankedPoset, max_rank: int) -> RankedPoset:
    """Elements of rank <= max_rank; a truncated geometric lattice is locally geometric."""
    keep = [i for i in range(P.n) if P.rank[i] <= max_rank]
    return induced(P, keep, P.bottom, name=f"{P.name}<= {max_rank}")[0]


# ---------------------------------------------------------------------------
# independence and the canonical map


def independent(P: RankedPoset, elems: Sequence[int]) -> bool:
    elems = list(elems)
    if not elems:
        raise PosetError("independence of an empty set is undefined")
    j = P.join_many(elems)
    return P.rank[j] == sum(P.rank[e] for e in elems)


def canonical_lambda(P: RankedPoset, p1: int, q1: int, p2: int, q2: int) -> Dict[int, int]:
    """For each s in p1 v q1 the unique t in p2 v q2 below s."""
    if not (P.leq(p2, p1) and P.leq(q2, q1)):
        raise PosetError("canonical map needs p2 <= p1 and q2 <= q1")
    targets = P.min_upper_bounds(p2, q2)
    out = {}
    for s in P.min_upper_bounds(p1, q1):
        below = [t for t in targets if P.leq(t, s)]
        if len(below) != 1:
            raise PosetError(f"not locally geometric: {len(below)} elements of {p2} v {q2} lie below {s}")
        out[s] = below[0]
    return out


# ---------------------------------------------------------------------------
# small standard examples


def boolean_lattice(k: int) -> RankedPoset:
    subsets = [tuple(i for i in range(k) if m >> i & 1) for m in range(1 << k)]
    return poset_from_relation(subsets, lambda a, b: set(a) <= set(b), name=f"B{k}")


def chain(length: int) -> RankedPoset:
    return RankedPoset(length + 1, [(i, i + 1) for i in range(length)], list(range(length + 1)),
                       name=f"chain{length}")
