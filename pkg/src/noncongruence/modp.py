"""Small dense linear algebra over the prime field F_p (lists of ints)."""

from __future__ import annotations


def rref(rows, p):
    """Row-reduce in place semantics; returns (rows, pivot_columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(a, p):
    """Basis of {v : a v = 0} for a square or rectangular matrix ``a``."""
    ncols = len(a[0])
    red, pivots = rref(a, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[f]) % p
        basis.append(v)
    return basis


def charpoly(a, p):
    """Characteristic polynomial (lowest degree first) via Hessenberg reduction."""
    n = len(a)
    h = [list(r) for r in a]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if h[i][m - 1] % p), None)
        if piv is None:
            continue
        if piv != m:
            h[piv], h[m] = h[m], h[piv]
            for row in h:
                row[piv], row[m] = row[m], row[piv]
        inv = pow(h[m][m - 1], -1, p)
        for i in range(m + 1, n):
            u = h[i][m - 1] * inv % p
            if u:
                for j in range(n):
                    h[i][j] = (h[i][j] - u * h[m][j]) % p
                for row in h:
                    row[m] = (row[m] + u * row[i]) % p
    # recurrence on leading principal submatrices of the Hessenberg form
    polys = [[1]]
    for k in range(n):
        nxt = [0] + polys[k]  # x * p_k
        for i in range(len(polys[k])):
            nxt[i] = (nxt[i] - h[k][k] * polys[k][i]) % p
        prod = 1
        for i in range(k - 1, -1, -1):
            prod = prod * h[i + 1][i] % p
            if not prod:
                break
            coef = prod * h[i][k] % p
            for t, c in enumerate(polys[i]):
                nxt[t] = (nxt[t] - coef * c) % p
        polys.append(nxt)
    return polys[n]


def roots(poly, p):
    """All roots in F_p, with multiplicity ignored."""
    out = []
    for x in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % p
        if acc == 0:
            out.append(x)
    return out


def primitive_root(p):
    phi = p - 1
    factors = []
    m, q = phi, 2
    while q * q <= m:
        if m % q == 0:
            factors.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        factors.append(m)
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in factors):
            return g
    raise ValueError(f"no primitive root mod {p}")
