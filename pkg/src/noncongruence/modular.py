"""SL2(Z) acting on presentation classes and the congruence closure.

An epimorphism F_2 -> G is recorded by the images (x, y) of the free
generators, up to simultaneous conjugation in G.  The Nielsen lifts

    T: (x, y) -> (x, xy)      S: (x, y) -> (y, x^-1)      U: (x, y) -> (xy, y)

abelianize to [[1,1],[0,1]], [[0,-1],[1,0]] and [[1,0],[1,1]].  Applying
g1 then g2 to a pair equals applying the matrix product g1*g2, so a word
read left to right multiplies out left to right.

The stabilizer of a class is a finite-index subgroup of SL2(Z).  Its
congruence closure has index [SL2(Z/m) : image] once m is a multiple of the
closure's level; the image is measured through the faithful permutation
action of prod SL2(Z/p^k) on unimodular vectors, one block per prime power.
"""

from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import AuditMismatch, BoundExceeded, ClosureUnstable, NotGenerating
from .group import PermGroup, _inv, _mul, _SimsTable, canonical_pair, conjugacy_classes, generates
from .ntheory import factorint
from .perm import Permutation

__all__ = [
    "SL2Matrix",
    "S",
    "T",
    "U",
    "PresentationClass",
    "ModularOrbit",
    "CuspData",
    "ClosureResult",
    "ModImage",
    "presentation_class",
    "apply_generator",
    "apply_word",
    "word_matrix",
    "orbit_and_coset_table",
    "cusp_data",
    "stabilizer_words",
    "stabilizer_generators",
    "sl2_order",
    "sl2_mod_image",
    "sl2_mod_index",
    "congruence_closure",
    "paper_criterion",
    "classify",
    "presentation_classes",
    "orbit_decomposition",
    "DEFAULT_SCHEDULE",
    "default_max_orbit",
    "default_modulus_cap",
]

DEFAULT_SCHEDULE = (1, 2, 4, 6)


def default_max_orbit() -> int:
    return int(os.environ.get("MF_MAX_ORBIT", 10**6))


def default_modulus_cap() -> int:
    return int(os.environ.get("MF_MODULUS_CAP", 10**4))


@dataclass(frozen=True)
class SL2Matrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self} is not 1")

    def __matmul__(self, o: SL2Matrix) -> SL2Matrix:
        return SL2Matrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> SL2Matrix:
        return SL2Matrix(self.d, -self.b, -self.c, self.a)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def mod(self, m: int) -> tuple[int, int, int, int]:
        return (self.a % m, self.b % m, self.c % m, self.d % m)

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = SL2Matrix(1, 0, 0, 1)
S = SL2Matrix(0, -1, 1, 0)
T = SL2Matrix(1, 1, 0, 1)
U = SL2Matrix(1, 0, 1, 1)

# lower case letters are inverses
_LETTER_MATRIX = {
    "S": S, "T": T, "U": U,
    "s": S.inverse(), "t": T.inverse(), "u": U.inverse(),
}
_GEN_ALIASES = {"S": "S", "T": "T", "U": "U", "S^-1": "s", "T^-1": "t", "U^-1": "u",
                "s": "s", "t": "t", "u": "u"}


def _move(letter, x, y):
    if letter == "T":
        return x, _mul(x, y)
    if letter == "S":
        return y, _inv(x)
    if letter == "U":
        return _mul(x, y), y
    if letter == "t":
        return x, _mul(_inv(x), y)
    if letter == "s":
        return _inv(y), x
    if letter == "u":
        return _mul(x, _inv(y)), y
    raise ValueError(f"unknown generator {letter!r}")


def invert_word(word: str) -> str:
    return word[::-1].swapcase()


def word_matrix(word: str) -> SL2Matrix:
    m = IDENTITY
    for ch in word:
        m = m @ _LETTER_MATRIX[ch]
    return m


@dataclass(frozen=True)
class PresentationClass:
    """Canonical representative of an Inn(G)-class of generating pairs."""

    group: PermGroup = field(compare=False, repr=False, hash=False)
    x: Permutation
    y: Permutation

    @property
    def pair(self):
        return (self.x, self.y)


def presentation_class(g: PermGroup, x, y, check: bool = True) -> PresentationClass:
    if check and not generates(g, x, y):
        raise NotGenerating("pair does not generate the group")
    cx, cy = canonical_pair(g, x, y, check=check)
    return PresentationClass(g, cx, cy)


def apply_generator(gen: str, c: PresentationClass) -> PresentationClass:
    letter = _GEN_ALIASES.get(gen)
    if letter is None:
        raise ValueError(f"unknown generator {gen!r}")
    x, y = _move(letter, tuple(c.x), tuple(c.y))
    cx, cy = canonical_pair(c.group, x, y, check=False)
    return PresentationClass(c.group, cx, cy)


def apply_word(word: str, c: PresentationClass) -> PresentationClass:
    for ch in word:
        c = apply_generator(ch, c)
    return c


class PairInterner:
    """Maps pairs to orbit indices, keyed on a pluggable canonical form."""

    def __init__(self, canonicalize: Callable):
        self.canonicalize = canonicalize
        self.index: dict = {}
        self.points: list = []

    def intern(self, x, y):
        key = self.canonicalize(x, y)
        idx = self.index.get(key)
        if idx is None:
            idx = len(self.points)
            self.index[key] = idx
            self.points.append(key)
            return idx, True
        return idx, False


@dataclass
class ModularOrbit:
    group: PermGroup = field(repr=False)
    points: list
    sigma_S: list[int]
    sigma_T: list[int]
    parent: list[int]
    edge: list[str]

    def __len__(self):
        return len(self.points)

    def word_to(self, i: int) -> str:
        """Word w (letters S, T) with base . w = point i."""
        letters = []
        while self.parent[i] >= 0:
            letters.append(self.edge[i])
            i = self.parent[i]
        return "".join(reversed(letters))

    def act(self, word: str, i: int = 0) -> int:
        """Index reached from point i along a word in S, T, s, t."""
        inv_s = inv_t = None
        for ch in word:
            if ch == "S":
                i = self.sigma_S[i]
            elif ch == "T":
                i = self.sigma_T[i]
            elif ch == "s":
                inv_s = inv_s or _inv(self.sigma_S)
                i = inv_s[i]
            elif ch == "t":
                inv_t = inv_t or _inv(self.sigma_T)
                i = inv_t[i]
            else:
                raise ValueError(f"letter {ch!r} not supported on orbits")
        return i

    def pair(self, i: int):
        x, y = self.points[i]
        return Permutation(x, check=False), Permutation(y, check=False)


def orbit_and_coset_table(
    g: PermGroup,
    base: PresentationClass,
    max_orbit: int | None = None,
    canonicalize: Callable | None = None,
) -> ModularOrbit:
    """Breadth-first closure of the base class under S and T (S edge first)."""
    if max_orbit is None:
        max_orbit = default_max_orbit()
    if canonicalize is None:
        def canonicalize(x, y):
            cx, cy = canonical_pair(g, x, y, check=False)
            return tuple(cx), tuple(cy)
    interner = PairInterner(canonicalize)
    interner.intern(tuple(base.x), tuple(base.y))
    parent, edge = [-1], [""]
    sig = {"S": [], "T": []}
    i = 0
    while i < len(interner.points):
        x, y = interner.points[i]
        for letter in ("S", "T"):
            j, new = interner.intern(*_move(letter, x, y))
            sig[letter].append(j)
            if new:
                if len(interner.points) > max_orbit:
                    raise BoundExceeded(f"orbit exceeds {max_orbit} points")
                parent.append(i)
                edge.append(letter)
        i += 1
    return ModularOrbit(g, interner.points, sig["S"], sig["T"], parent, edge)


@dataclass(frozen=True)
class CuspData:
    widths: tuple[int, ...]
    level: int
    base_width: int


def cusp_data(o: ModularOrbit) -> CuspData:
    """Cusp widths are the cycle lengths of T on the coset space."""
    seen = [False] * len(o)
    widths = []
    base_width = 0
    for start in range(len(o)):
        if seen[start]:
            continue
        length, j = 0, start
        while not seen[j]:
            seen[j] = True
            length += 1
            j = o.sigma_T[j]
        widths.append(length)
        if start == 0:
            base_width = length
    return CuspData(tuple(sorted(widths)), math.lcm(*widths), base_width)


def stabilizer_words(o: ModularOrbit) -> list[str]:
    """Schreier generators of the base-point stabilizer as words in S, T."""
    words = []
    tree = [o.word_to(i) for i in range(len(o))]
    for i in range(len(o)):
        for letter, sigma in (("S", o.sigma_S), ("T", o.sigma_T)):
            j = sigma[i]
            if o.parent[j] == i and o.edge[j] == letter:
                continue
            words.append(tree[i] + letter + invert_word(tree[j]))
    return words


def stabilizer_generators(o: ModularOrbit) -> list[SL2Matrix]:
    return [word_matrix(w) for w in stabilizer_words(o)]


def sl2_order(m: int) -> int:
    """|SL2(Z/m)| = m^3 prod_{p | m} (1 - p^-2)."""
    if m < 1:
        raise ValueError("modulus must be positive")
    out = m**3
    for p in factorint(m):
        out = out // (p * p) * (p * p - 1)
    return out


def _unimodular_vectors(q: int, p: int):
    return [(a, b) for a in range(q) for b in range(q) if a % p or b % p]


@dataclass(frozen=True)
class ModImage:
    modulus: int
    order: int
    index: int
    block_indices: dict


def sl2_mod_image(mats: Sequence[SL2Matrix], m: int, modulus_cap: int | None = None) -> ModImage:
    """Image of <mats> in SL2(Z/m) = prod over p^k || m of SL2(Z/p^k)."""
    if modulus_cap is None:
        modulus_cap = default_modulus_cap()
    if m < 1:
        raise ValueError("modulus must be positive")
    if m > modulus_cap:
        raise BoundExceeded(f"modulus {m} exceeds cap {modulus_cap}")
    if m == 1:
        return ModImage(1, 1, 1, {})
    for M in mats:
        if (M.a * M.d - M.b * M.c) % m != 1 % m:
            raise ValueError(f"{M} does not have determinant 1 mod {m}")
    blocks = []
    offset = 0
    for p, k in factorint(m).items():
        q = p**k
        vecs = _unimodular_vectors(q, p)
        blocks.append((p, q, vecs, {v: offset + i for i, v in enumerate(vecs)}))
        offset += len(vecs)
    degree = offset
    full = _SimsTable(degree)
    per_block = [_SimsTable(len(b[2])) for b in blocks]
    for M in mats:
        images = []
        for bi, (p, q, vecs, index) in enumerate(blocks):
            a, b, c, d = M.mod(q)
            block = [index[((a * x + b * y) % q, (c * x + d * y) % q)] for x, y in vecs]
            images.extend(block)
            base = index[vecs[0]]
            per_block[bi].insert(tuple(v - base for v in block))
        full.insert(tuple(images))
    order = full.order()
    block_indices = {
        q: sl2_order(q) // tab.order() for (p, q, _, _), tab in zip(blocks, per_block)
    }
    return ModImage(m, order, sl2_order(m) // order, block_indices)


def sl2_mod_index(mats: Sequence[SL2Matrix], m: int, modulus_cap: int | None = None) -> int:
    """[SL2(Z/m) : <mats mod m>]."""
    return sl2_mod_image(mats, m, modulus_cap).index


@dataclass
class ClosureResult:
    index_gamma: int
    cusp_widths: tuple[int, ...]
    level: int
    modulus_used: int | None
    index_closure: int
    verdict: str
    criterion_verdict: bool | None = None
    schedule: list[tuple[int, int]] = field(default_factory=list)
    stable_from: int | None = None


def _verdict(index_gamma, index_closure):
    if index_closure == index_gamma:
        return "congruence"
    if index_closure == 1:
        return "totally-noncongruence"
    return "noncongruence"


def congruence_closure(
    o: ModularOrbit,
    schedule: Sequence[int] = DEFAULT_SCHEDULE,
    modulus_cap: int | None = None,
) -> ClosureResult:
    """Index of the congruence closure, checked for stability across n*schedule."""
    cusps = cusp_data(o)
    n = cusps.level
    gens = stabilizer_generators(o)
    steps = []
    for f in schedule:
        m = n * f
        steps.append((m, sl2_mod_index(gens, m, modulus_cap)))
    indices = [idx for _, idx in steps]
    if any(a > b or b % a for a, b in zip(indices, indices[1:])):
        raise ArithmeticError(f"closure indices not monotone along the schedule: {steps}")
    if len(steps) >= 2 and indices[-1] != indices[-2]:
        raise ClosureUnstable(f"closure index did not stabilize: {steps}")
    final = indices[-1]
    stable_from = next(m for m, idx in steps if idx == final)
    if len(o) % final:
        raise ArithmeticError(f"closure index {final} does not divide orbit size {len(o)}")
    return ClosureResult(
        index_gamma=len(o),
        cusp_widths=cusps.widths,
        level=n,
        modulus_used=steps[-1][0],
        index_closure=final,
        verdict=_verdict(len(o), final),
        schedule=steps,
        stable_from=stable_from,
    )


def paper_criterion(g: PermGroup, x, y) -> bool:
    """|x|, |y|, |xy| pairwise coprime for a generating pair of a non-trivial G."""
    if not generates(g, x, y):
        raise NotGenerating("pair does not generate the group")
    x, y = Permutation(x, check=False), Permutation(y, check=False)
    r, s, t = x.order(), y.order(), (x * y).order()
    coprime = math.gcd(r, s) == math.gcd(r, t) == math.gcd(s, t) == 1
    return coprime and g.cached_order > 1


def classify(
    g: PermGroup,
    x,
    y,
    audit: bool = False,
    max_orbit: int | None = None,
    modulus_cap: int | None = None,
    schedule: Sequence[int] = DEFAULT_SCHEDULE,
) -> ClosureResult:
    crit = paper_criterion(g, x, y)
    base = presentation_class(g, x, y, check=False)
    orbit = orbit_and_coset_table(g, base, max_orbit)
    if crit and not audit:
        cusps = cusp_data(orbit)
        return ClosureResult(
            index_gamma=len(orbit),
            cusp_widths=cusps.widths,
            level=cusps.level,
            modulus_used=None,
            index_closure=1,
            verdict="totally-noncongruence",
            criterion_verdict=True,
        )
    result = congruence_closure(orbit, schedule, modulus_cap)
    result.criterion_verdict = crit
    if crit and result.verdict != "totally-noncongruence":
        raise AuditMismatch(
            f"coprime pair but closure pipeline says {result.verdict} "
            f"(index {result.index_closure} of {result.index_gamma})"
        )
    return result


def presentation_classes(g: PermGroup) -> list[tuple[Permutation, Permutation]]:
    """Every Inn(G)-class of generating pairs, as sorted canonical pairs."""
    cc = conjugacy_classes(g)
    seen = set()
    out = []
    for x in cc.reps:
        for y in g.elements():
            key = canonical_pair(g, x, y, check=False)
            k = (tuple(key[0]), tuple(key[1]))
            if k in seen:
                continue
            seen.add(k)
            if generates(g, *key):
                out.append(key)
    out.sort()
    return out


def orbit_decomposition(g: PermGroup, classes=None, max_orbit: int | None = None) -> list[ModularOrbit]:
    """Partition the presentation classes into SL2(Z)-orbits."""
    if classes is None:
        classes = presentation_classes(g)
    remaining = {(tuple(x), tuple(y)) for x, y in classes}
    orbits = []
    for x, y in classes:
        key = (tuple(x), tuple(y))
        if key not in remaining:
            continue
        o = orbit_and_coset_table(g, PresentationClass(g, x, y), max_orbit)
        for p in o.points:
            remaining.discard(p)
        orbits.append(o)
    return orbits
