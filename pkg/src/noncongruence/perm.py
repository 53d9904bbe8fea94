"""Permutations on {0, ..., n-1}.

A permutation is stored as the tuple of images.  Products read left to
right: ``x * y`` applies ``x`` first, then ``y``.  Cycle notation in text
is 1-based, everything in memory is 0-based.
"""

from __future__ import annotations

import math
import re
from functools import reduce

__all__ = [
    "Permutation",
    "element_order",
    "parse_cycles",
    "format_cycles",
    "parse_pair",
    "format_pair",
]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation(tuple):
    """Immutable permutation; equal and hash-compatible with its image tuple."""

    __slots__ = ()

    def __new__(cls, images=(), *, check=True):
        p = tuple.__new__(cls, images)
        if check and sorted(p) != list(range(len(p))):
            raise ValueError(f"not a permutation: {tuple(p)!r}")
        return p

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return tuple.__new__(cls, range(degree))

    @classmethod
    def from_cycles(cls, cycles, degree: int) -> Permutation:
        """Build from 0-based cycles, e.g. ``[(0, 1, 2), (3, 4)]``."""
        images = list(range(degree))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if not 0 <= a < degree:
                    raise ValueError(f"point {a} outside degree {degree}")
                if a in seen:
                    raise ValueError(f"point {a} repeated in cycles")
                seen.add(a)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a] = b
        return tuple.__new__(cls, images)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other):
        if len(self) != len(other):
            raise ValueError("degree mismatch")
        return tuple.__new__(Permutation, map(other.__getitem__, self))

    def __invert__(self):
        return self.inverse()

    def __pow__(self, k: int):
        k = int(k)
        result = list(range(len(self)))
        for c in self.cycles():
            L = len(c)
            for idx, a in enumerate(c):
                result[a] = c[(idx + k) % L]
        return tuple.__new__(Permutation, result)

    def inverse(self) -> Permutation:
        inv = [0] * len(self)
        for i, j in enumerate(self):
            inv[j] = i
        return tuple.__new__(Permutation, inv)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self))

    def cycles(self, include_fixed=False):
        seen = [False] * len(self)
        out = []
        for i in range(len(self)):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = True
            j = self[i]
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = self[j]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Sorted (descending) lengths of the non-trivial cycles."""
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def conjugate(self, h) -> Permutation:
        """Relabel by ``h``: the result maps ``h[i]`` to ``h[self[i]]``."""
        out = [0] * len(self)
        for i, j in enumerate(self):
            out[h[i]] = h[j]
        return tuple.__new__(Permutation, out)

    def __repr__(self):
        return f"Permutation({format_cycles(self)!r}, degree={len(self)})"

    def __str__(self):
        return format_cycles(self)


def element_order(g) -> int:
    """Least k >= 1 with g**k the identity."""
    if isinstance(g, Permutation):
        return g.order()
    return Permutation(g, check=False).order()


def parse_cycles(text: str, degree: int | None = None, one_based=True) -> Permutation:
    """Parse ``(1 2 3)(4 5)``; commas inside cycles are accepted too.

    Without ``degree`` the largest mentioned point decides it.
    """
    text = text.strip()
    rest = _CYCLE_RE.sub("", text).strip()
    if rest:
        raise ValueError(f"cannot parse cycle notation {text!r}")
    shift = 1 if one_based else 0
    cycles = []
    for body in _CYCLE_RE.findall(text):
        pts = [int(tok) - shift for tok in re.split(r"[\s,]+", body.strip()) if tok]
        if any(p < 0 for p in pts):
            raise ValueError(f"point below {shift} in {text!r}")
        if pts:
            cycles.append(tuple(pts))
    top = max((max(c) + 1 for c in cycles), default=0)
    if degree is None:
        degree = top
    elif top > degree:
        raise ValueError(f"point {top} exceeds degree {degree} in {text!r}")
    return Permutation.from_cycles(cycles, degree)


def format_cycles(p, one_based=True) -> str:
    shift = 1 if one_based else 0
    cyc = Permutation(p, check=False).cycles()
    if not cyc:
        return "()"
    return "".join("(" + " ".join(str(a + shift) for a in c) + ")" for c in cyc)


def parse_pair(text: str, degree: int | None = None) -> tuple[Permutation, Permutation]:
    """Parse the CLI pair syntax ``"(1 2 3 4 5);(1 2 3)"``."""
    parts = text.split(";")
    if len(parts) != 2:
        raise ValueError(f"expected two permutations separated by ';', got {text!r}")
    x, y = (parse_cycles(s, degree) for s in parts)
    if degree is None:
        n = max(len(x), len(y))
        x, y = _pad(x, n), _pad(y, n)
    return x, y


def format_pair(x, y) -> str:
    return f"{format_cycles(x)};{format_cycles(y)}"


def _pad(p, n):
    return tuple.__new__(Permutation, tuple(p) + tuple(range(len(p), n)))
