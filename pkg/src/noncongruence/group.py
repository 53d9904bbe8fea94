"""Permutation groups with a deterministic Schreier-Sims table.

The stabilizer chain uses the base 0, 1, ..., n-1 and Knuth's sifting
table: level k stores, for every point j in the orbit of k under the
pointwise stabilizer of 0..k-1, a representative moving k to j.  Orders
computed here are exact (no randomization anywhere in construction).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import BoundExceeded, DegreeMismatch, FormatError, NotCentral, NotInGroup
from .perm import Permutation, format_cycles, parse_cycles

__all__ = [
    "PermGroup",
    "ConjClassTable",
    "group_from_generators",
    "order",
    "generates",
    "conjugacy_classes",
    "center",
    "canonical_pair",
    "order_mod_subgroup",
    "read_group_text",
    "write_group_text",
    "DEFAULT_CLASS_BOUND",
    "ENUMERATION_LIMIT",
]

DEFAULT_CLASS_BOUND = 10**6
ENUMERATION_LIMIT = 10**5


def _mul(a, b):
    return tuple(map(b.__getitem__, a))


def _inv(a):
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def _conj(x, h, h_inv):
    """h^-1 x h in left-to-right product order."""
    return tuple([h[x[k]] for k in h_inv])


class _SimsTable:
    """Knuth's incremental Schreier-Sims, run with an explicit work stack."""

    def __init__(self, degree: int):
        ident = tuple(range(degree))
        self.n = degree
        self.reps = [{k: (ident, ident)} for k in range(degree)]
        self.gens = [[] for _ in range(degree)]

    def sift(self, g, start=0):
        """Return (level, residue); level == n means g is a member."""
        reps = self.reps
        for k in range(start, self.n):
            j = g[k]
            if j != k:
                t = reps[k].get(j)
                if t is None:
                    return k, g
                g = _mul(g, t[1])
        return self.n, g

    def contains(self, g, start=0) -> bool:
        return self.sift(g, start)[0] == self.n

    def insert(self, g) -> bool:
        if self.contains(g):
            return False
        stack = []
        self._add(0, g, stack)
        reps, gens = self.reps, self.gens
        while stack:
            k, h = stack.pop()
            j = h[k]
            tk = reps[k]
            t = tk.get(j)
            if t is not None:
                r = _mul(h, t[1])
                if not self.contains(r, k + 1):
                    self._add(k + 1, r, stack)
            else:
                tk[j] = (h, _inv(h))
                for s in gens[k]:
                    stack.append((k, _mul(h, s)))
        return True

    def _add(self, k, g, stack):
        self.gens[k].append(g)
        for rep, _ in list(self.reps[k].values()):
            stack.append((k, _mul(rep, g)))

    def order(self) -> int:
        return math.prod(len(t) for t in self.reps)

    def levels(self):
        """Non-trivial levels, deepest first, as lists of representatives."""
        return [[r for r, _ in t.values()] for t in reversed(self.reps) if len(t) > 1]


class PermGroup:
    """A permutation group given by generators; immutable after construction."""

    def __init__(self, generators: Sequence, degree: int | None = None, name: str | None = None):
        gens = [Permutation(g) if not isinstance(g, Permutation) else g for g in generators]
        if not gens and degree is None:
            raise ValueError("empty generator list")
        if degree is None:
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree:
                raise DegreeMismatch(f"generator of degree {len(g)} in a group of degree {degree}")
        self.degree = degree
        self.generators = tuple(gens)
        self.name = name
        self._table = _SimsTable(degree)
        for g in gens:
            self._table.insert(tuple(g))
        self.cached_order = self._table.order()

    def __repr__(self):
        label = self.name or f"<{len(self.generators)} gens>"
        return f"PermGroup({label}, degree={self.degree}, order={self.cached_order})"

    def order(self) -> int:
        return self.cached_order

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def contains(self, g) -> bool:
        return len(g) == self.degree and self._table.contains(tuple(g))

    __contains__ = contains

    def check_member(self, *elements):
        for g in elements:
            if not self.contains(g):
                raise NotInGroup(f"{format_cycles(g)} is not an element of the group")

    def subgroup(self, generators) -> PermGroup:
        return PermGroup(list(generators), degree=self.degree)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(_mul(a, b) == _mul(b, a) for i, a in enumerate(gens) for b in gens[i + 1:])

    def random_element(self, rng: random.Random) -> Permutation:
        g = tuple(range(self.degree))
        for level in self._table.levels():
            g = _mul(g, level[rng.randrange(len(level))])
        return Permutation(g, check=False)

    def elements(self, bound: int = DEFAULT_CLASS_BOUND) -> list[Permutation]:
        """All elements (cached); ordering is deterministic but not sorted."""
        if self.cached_order > bound:
            raise BoundExceeded(f"group order {self.cached_order} exceeds bound {bound}")
        return self._elements

    @cached_property
    def _elements(self):
        elems = [tuple(range(self.degree))]
        for level in self._table.levels():
            elems = [_mul(e, r) for e in elems for r in level]
        return [Permutation(e, check=False) for e in elems]

    @cached_property
    def _conjugators(self):
        return [(h, _inv(h)) for h in self._elements]

    def exponent(self) -> int:
        return math.lcm(*(g.order() for g in self.elements()))


def group_from_generators(gens: Sequence, name: str | None = None) -> PermGroup:
    gens = list(gens)
    if not gens:
        raise ValueError("empty generator list")
    degrees = {len(g) for g in gens}
    if len(degrees) > 1:
        raise DegreeMismatch(f"generators of mixed degrees {sorted(degrees)}")
    return PermGroup(gens, name=name)


def order(g: PermGroup) -> int:
    return g.cached_order


def generates(ambient: PermGroup, x, y) -> bool:
    ambient.check_member(x, y)
    table = _SimsTable(ambient.degree)
    table.insert(tuple(x))
    table.insert(tuple(y))
    return table.order() == ambient.cached_order


@dataclass
class ConjClassTable:
    group_order: int
    reps: list[Permutation]
    sizes: list[int]
    orders: list[int]
    inverse_map: list[int]
    class_of: dict = field(repr=False)
    _members: list | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.reps)

    def index(self, g) -> int:
        return self.class_of[tuple(g)]

    def power_class(self, k: int, e: int) -> int:
        """Class of rep_k ** e."""
        return self.class_of[tuple(self.reps[k] ** e)]

    def members(self, k: int) -> list[tuple]:
        if self._members is None:
            buckets = [[] for _ in self.reps]
            for x, idx in self.class_of.items():
                buckets[idx].append(x)
            for b in buckets:
                b.sort()
            self._members = buckets
        return self._members[k]


def _conj_orbit(x, gens, class_of, label):
    orbit = [x]
    class_of[x] = label
    for a in orbit:
        for h, hi in gens:
            b = _conj(a, h, hi)
            if b not in class_of:
                class_of[b] = label
                orbit.append(b)
    return orbit


def conjugacy_classes(
    g: PermGroup,
    bound: int = DEFAULT_CLASS_BOUND,
    enumerate_limit: int = ENUMERATION_LIMIT,
    seed: int = 0,
) -> ConjClassTable:
    """Classes sorted by element order, then size, then least element.

    Up to ``enumerate_limit`` the whole group is swept; above it classes are
    discovered from random elements and their powers until the sizes add up
    to |G|, which certifies completeness.
    """
    n = g.cached_order
    if n > bound:
        raise BoundExceeded(f"group order {n} exceeds class bound {bound}")
    gens = [(tuple(h), _inv(h)) for h in g.generators]
    class_of: dict = {}
    orbits = []
    if n <= enumerate_limit:
        for x in g.elements(bound):
            x = tuple(x)
            if x not in class_of:
                orbits.append(_conj_orbit(x, gens, class_of, len(orbits)))
    else:
        rng = random.Random(seed)
        total = 0
        while total < n:
            r = g.random_element(rng)
            for e in range(1, r.order() + 1):
                x = tuple(r**e)
                if x not in class_of:
                    orbits.append(_conj_orbit(x, gens, class_of, len(orbits)))
                    total += len(orbits[-1])
    keyed = []
    for orb in orbits:
        rep = min(orb)
        keyed.append((Permutation(rep, check=False).order(), len(orb), rep, orb))
    keyed.sort(key=lambda t: t[:3])
    new_class_of = {}
    for idx, (_, _, _, orb) in enumerate(keyed):
        for x in orb:
            new_class_of[x] = idx
    reps = [Permutation(k[2], check=False) for k in keyed]
    return ConjClassTable(
        group_order=n,
        reps=reps,
        sizes=[k[1] for k in keyed],
        orders=[k[0] for k in keyed],
        inverse_map=[new_class_of[_inv(r)] for r in reps],
        class_of=new_class_of,
    )


def center(g: PermGroup) -> PermGroup:
    gens = [tuple(h) for h in g.generators]
    table = _SimsTable(g.degree)
    found = []
    for x in g.elements():
        x = tuple(x)
        if table.contains(x):
            continue
        if all(_mul(x, h) == _mul(h, x) for h in gens):
            table.insert(x)
            found.append(x)
    if not found:
        return PermGroup([g.identity()])
    return PermGroup(found, degree=g.degree)


def is_central(g: PermGroup, z: PermGroup) -> bool:
    gens = [tuple(h) for h in g.generators]
    return all(
        g.contains(c) and all(_mul(tuple(c), h) == _mul(h, tuple(c)) for h in gens)
        for c in z.generators
    )


def canonical_pair(g: PermGroup, x, y, check=True) -> tuple[Permutation, Permutation]:
    """Lexicographically least simultaneous conjugate of (x, y) over h in G."""
    if check:
        g.check_member(x, y)
    x, y = tuple(x), tuple(y)
    best_x = best_y = None
    for h, hi in g._conjugators:
        cx = _conj(x, h, hi)
        if best_x is None or cx < best_x:
            best_x, best_y = cx, _conj(y, h, hi)
        elif cx == best_x:
            cy = _conj(y, h, hi)
            if cy < best_y:
                best_y = cy
    return Permutation(best_x, check=False), Permutation(best_y, check=False)


def order_mod_subgroup(g: PermGroup, z: PermGroup, x) -> int:
    """Least k >= 1 with x**k in the central subgroup z."""
    if not is_central(g, z):
        raise NotCentral("subgroup is not central")
    g.check_member(x)
    x = Permutation(x, check=False)
    p = x
    k = 1
    while not z.contains(p):
        p = p * x
        k += 1
    return k


def read_group_text(text: str) -> list[Permutation]:
    """Parse the group file format: ``degree N`` then one generator per line."""
    degree = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if degree is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "degree" or not parts[1].isdigit() or int(parts[1]) < 1:
                raise FormatError(f"line {lineno}: expected 'degree N', got {raw!r}")
            degree = int(parts[1])
            continue
        try:
            gens.append(parse_cycles(line, degree))
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    if degree is None:
        raise FormatError("missing 'degree N' header")
    if not gens:
        raise FormatError("no generators")
    return gens


def write_group_text(gens: Iterable, comment: str | None = None) -> str:
    gens = list(gens)
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"degree {len(gens[0])}")
    lines.extend(format_cycles(g) for g in gens)
    return "\n".join(lines) + "\n"
