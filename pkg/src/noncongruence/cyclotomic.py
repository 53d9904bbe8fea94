"""Exact elements of Z[zeta_n].

A value is stored as its coefficient vector in powers of zeta_n, reduced
modulo the n-th cyclotomic polynomial, so entries at positions >= phi(n)
are zero and the representation is unique for a fixed n.  Values over
different n are compared and combined inside Q(zeta_lcm).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

__all__ = ["CycInt", "cyclotomic_poly", "totient"]


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_div(num, den):
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]  # den is monic
        if c:
            q[i - dd] = c
            for k, dk in enumerate(den):
                num[i - dd + k] -= c * dk
    assert not any(num[:dd]), "inexact cyclotomic division"
    return q


def _reduce(n: int, coeffs: list[int]) -> tuple[int, ...]:
    phi = totient(n)
    poly = cyclotomic_poly(n)
    c = list(coeffs)
    for i in range(n - 1, phi - 1, -1):
        a = c[i]
        if a:
            shift = i - phi
            for k, pk in enumerate(poly):
                c[shift + k] -= a * pk
    return tuple(c)


class CycInt:
    """sum_k c[k] zeta_n^k with zeta_n = exp(2 pi i / n)."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs=None, *, reduced=False):
        if n < 1:
            raise ValueError("n must be positive")
        c = [0] * n
        if coeffs is not None:
            coeffs = list(coeffs)
            if len(coeffs) > n:
                raise ValueError(f"{len(coeffs)} coefficients for n = {n}")
            c[: len(coeffs)] = coeffs
        self.n = n
        self.c = tuple(c) if reduced else _reduce(n, c)

    @classmethod
    def from_int(cls, a: int, n: int = 1) -> CycInt:
        return cls(n, [a], reduced=True)

    @classmethod
    def root(cls, k: int, n: int) -> CycInt:
        c = [0] * n
        c[k % n] = 1
        return cls(n, c)

    @classmethod
    def from_multiplicities(cls, n: int, mult) -> CycInt:
        """Eigenvalue multiplicities (m_0, ..., m_{n-1}) of a matrix of finite order."""
        return cls(n, mult)

    def embed(self, m: int) -> CycInt:
        if m % self.n:
            raise ValueError(f"cannot embed Q(zeta_{self.n}) into Q(zeta_{m})")
        if m == self.n:
            return self
        s = m // self.n
        c = [0] * m
        for k, a in enumerate(self.c):
            if a:
                c[k * s] = a
        return CycInt(m, c)

    def _common(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(other, self.n)
        if not isinstance(other, CycInt):
            return NotImplemented, None
        if other.n == self.n:
            return self, other
        m = math.lcm(self.n, other.n)
        return self.embed(m), other.embed(m)

    def __add__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return a
        return CycInt(a.n, [x + y for x, y in zip(a.c, b.c)], reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.n, [-x for x in self.c], reduced=True)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.n, [other * x for x in self.c], reduced=True)
        a, b = self._common(other)
        if a is NotImplemented:
            return a
        n = a.n
        out = [0] * n
        bnz = [(j, y) for j, y in enumerate(b.c) if y]
        for i, x in enumerate(a.c):
            if x:
                for j, y in bnz:
                    out[(i + j) % n] += x * y
        return CycInt(n, out)

    __rmul__ = __mul__

    def conjugate(self) -> CycInt:
        return self.galois(-1)

    def galois(self, a: int) -> CycInt:
        """Image under zeta_n -> zeta_n^a (a coprime to n)."""
        n = self.n
        if math.gcd(a, n) != 1:
            raise ValueError(f"{a} is not a unit mod {n}")
        out = [0] * n
        for k, x in enumerate(self.c):
            if x:
                out[(k * a) % n] += x
        return CycInt(n, out)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_int(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.c[0]

    def __complex__(self):
        n = self.n
        return sum((x * cmath.exp(2j * math.pi * k / n) for k, x in enumerate(self.c) if x), 0j)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.c[0] == other
        if not isinstance(other, CycInt):
            return NotImplemented
        a, b = self._common(other)
        return a.c == b.c

    __hash__ = None

    def __bool__(self):
        return any(self.c)

    def trimmed(self) -> tuple[int, ...]:
        """Coefficient vector with trailing zeros removed (at least one entry)."""
        c = list(self.c)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        return tuple(c)

    def __repr__(self):
        if self.is_rational():
            return f"CycInt({self.c[0]})"
        terms = [f"{x}*z{self.n}^{k}" if k else str(x) for k, x in enumerate(self.c) if x]
        return "CycInt(" + " + ".join(terms) + ")"
