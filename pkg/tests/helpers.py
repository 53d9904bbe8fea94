"""Brute-force oracles that share no code with the package's algorithms."""

from __future__ import annotations

import itertools
import math


def compose(a, b):
    """a then b."""
    return tuple(b[i] for i in a)


def invert(a):
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def closure(gens):
    """All elements of <gens> by breadth-first multiplication."""
    gens = [tuple(g) for g in gens]
    n = len(gens[0])
    e = tuple(range(n))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = compose(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def perm_order(a):
    e = tuple(range(len(a)))
    k, b = 1, a
    while b != e:
        b = compose(b, a)
        k += 1
    return k


def conj_classes(elements):
    """List of frozensets, by direct conjugation."""
    remaining = set(elements)
    out = []
    while remaining:
        x = min(remaining)
        cls = frozenset(compose(compose(invert(h), x), h) for h in elements)
        out.append(cls)
        remaining -= cls
    return out


def generating_pair_classes(elements):
    """Canonical (min over conjugates) generating pairs."""
    elements = sorted(elements)
    order = len(elements)
    inv = {h: invert(h) for h in elements}
    seen = set()
    for x in elements:
        for y in elements:
            key = min((compose(compose(inv[h], x), h), compose(compose(inv[h], y), h)) for h in elements)
            if key in seen:
                continue
            if len(closure([x, y])) == order:
                seen.add(key)
    return seen


def sl2_mod(m):
    return [(a, b, c, d) for a, b, c, d in itertools.product(range(m), repeat=4) if (a * d - b * c) % m == 1 % m]


def mat_mul(p, q, m):
    a, b, c, d = p
    e, f, g, h = q
    return ((a * e + b * g) % m, (a * f + b * h) % m, (c * e + d * g) % m, (c * f + d * h) % m)


def matrix_closure(mats, m):
    e = (1 % m, 0, 0, 1 % m)
    seen = {e}
    frontier = [e]
    gens = [tuple(x % m for x in M) for M in mats]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = mat_mul(a, g, m)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def class_constant_brute(elements, ci, cj, z):
    return sum(1 for a in ci if compose(invert(a), z) in cj)


def primes_upto(n):
    sieve = [True] * (n + 1)
    sieve[0] = sieve[1] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = [False] * len(sieve[p * p :: p])
    return [p for p, ok in enumerate(sieve) if ok]


def brute_ppd(a, d):
    """Largest prime dividing a^d - 1 and no a^i - 1 (i < d), by trial division."""
    n = a**d - 1
    best = None
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            if all((a**i - 1) % p for i in range(1, d)):
                best = p
        p += 1
    if m > 1 and all((a**i - 1) % m for i in range(1, d)):
        best = max(best or 0, m)
    return best


def pair_orbit(elements, x, y):
    """SL2(Z)-orbit of the class of (x, y), using S: (y, x^-1), T: (x, xy)."""
    inv = {h: invert(h) for h in elements}

    def canon(p, q):
        return min((compose(compose(inv[h], p), h), compose(compose(inv[h], q), h)) for h in elements)

    start = canon(x, y)
    seen = {start}
    stack = [start]
    while stack:
        p, q = stack.pop()
        for nxt in ((q, invert(p)), (p, compose(p, q))):
            c = canon(*nxt)
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return seen
