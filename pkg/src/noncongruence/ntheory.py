"""Integer factoring and Zsigmondy primitive prime divisors."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BoundExceeded

__all__ = ["is_prime", "factorint", "prime_factors", "PpdResult", "ppd", "is_primitive_divisor"]

TRIAL_LIMIT = 10**6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho(n: int) -> int:
    """A non-trivial factor of the odd composite n (Brent's variant, fixed seeds)."""
    for c in range(1, 200):
        y, m, g, r, q = 2, 128, 1, 1, 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"Pollard rho failed on {n}")


def factorint(n: int, max_bits: int = 64) -> dict[int, int]:
    """Prime factorization: trial division to 10^6, then Pollard rho."""
    if n < 1:
        raise ValueError("n must be positive")
    if n.bit_length() > max_bits:
        raise BoundExceeded(f"{n} exceeds the {max_bits}-bit factoring budget")
    out: dict[int, int] = {}
    p = 2
    while p <= TRIAL_LIMIT and p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
        else:
            f = _rho(m)
            stack.extend([f, m // f])
    return dict(sorted(out.items()))


def prime_factors(n: int) -> list[int]:
    return list(factorint(n))


def is_primitive_divisor(ell: int, a: int, d: int) -> bool:
    """ell divides a^d - 1 and no a^i - 1 with 1 <= i < d."""
    if pow(a, d, ell) != 1:
        return False
    return all(pow(a, i, ell) != 1 for i in range(1, d))


@dataclass(frozen=True)
class PpdResult:
    a: int
    d: int
    prime: int | None
    exceptional: bool


def ppd(a: int, d: int, max_bits: int = 64) -> PpdResult:
    """Largest primitive prime divisor of a^d - 1, or the Zsigmondy exception."""
    if a < 2 or d < 2:
        raise ValueError("ppd needs a >= 2 and d >= 2")
    exceptional = (a, d) == (2, 6) or (d == 2 and (a + 1) & a == 0)
    if exceptional:
        return PpdResult(a, d, None, True)
    cands = [ell for ell in factorint(a**d - 1, max_bits) if is_primitive_divisor(ell, a, d)]
    if not cands:
        raise ArithmeticError(f"no primitive prime divisor for ({a}, {d})")
    return PpdResult(a, d, max(cands), False)
