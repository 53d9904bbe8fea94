"""Exact character tables (Dixon-Schur) and Frobenius triple counts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import modp
from .cyclotomic import CycInt
from .errors import BoundExceeded, FormatError, OrthogonalityError
from .group import ConjClassTable, PermGroup, _inv, _mul, conjugacy_classes
from .ntheory import is_prime

__all__ = [
    "CharacterTable",
    "TripleCount",
    "Sum1Bound",
    "class_constant",
    "dixon_prime",
    "dixon_table",
    "frobenius_sum",
    "frobenius_count",
    "sum1_bound",
    "read_table",
    "write_table",
    "parse_table",
    "format_table",
    "TABLE_FORMAT",
]

TABLE_FORMAT = "chartable/1"
DIXON_BOUND = 10**5
EXACT_CHECK_CONDUCTOR = 5000


@dataclass
class CharacterTable:
    group_order: int
    exponent: int
    sizes: list[int]
    orders: list[int]
    inverse_map: list[int]
    values: list[list[CycInt]]
    degrees: list[int]
    classes: ConjClassTable | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.values)

    @property
    def num_classes(self) -> int:
        return len(self.sizes)

    def check(self, exact: bool | None = None):
        """Verify the table invariants; raise OrthogonalityError on failure."""
        k = self.num_classes
        if len(self.values) != k or any(len(row) != k for row in self.values):
            raise OrthogonalityError(f"table is not square ({len(self.values)} characters, {k} classes)")
        if sum(self.sizes) != self.group_order:
            raise OrthogonalityError("class sizes do not add up to the group order")
        if any(v != 1 for v in self.values[0]):
            raise OrthogonalityError("first character is not trivial")
        if sum(d * d for d in self.degrees) != self.group_order:
            raise OrthogonalityError("sum of squared degrees differs from the group order")
        for row, d in zip(self.values, self.degrees):
            if row[0] != d:
                raise OrthogonalityError("degree column does not match the stated degrees")
        if sorted(self.inverse_map) != list(range(k)) or any(
            self.inverse_map[self.inverse_map[i]] != i for i in range(k)
        ):
            raise OrthogonalityError("inverse map is not an involution")
        if exact is None:
            cond = math.lcm(*(v.n for row in self.values for v in row))
            exact = cond <= EXACT_CHECK_CONDUCTOR
        if exact:
            _check_exact(self)
        else:
            _check_numeric(self)


def _check_exact(t: CharacterTable):
    n, k, inv = t.group_order, t.num_classes, t.inverse_map
    for a in range(k):
        for b in range(a, k):
            s = sum(
                (t.values[a][c] * t.values[b][inv[c]] * t.sizes[c] for c in range(k)),
                CycInt.from_int(0),
            )
            if s != (n if a == b else 0):
                raise OrthogonalityError(f"row orthogonality fails for characters {a + 1}, {b + 1}")
    for c in range(k):
        for d in range(c, k):
            s = sum((row[c] * row[inv[d]] for row in t.values), CycInt.from_int(0))
            expect = Fraction(n, t.sizes[c]) if c == d else 0
            if s != expect:
                raise OrthogonalityError(f"column orthogonality fails for classes {c + 1}, {d + 1}")


def _check_numeric(t: CharacterTable, tol=1e-6):
    n, k, inv = t.group_order, t.num_classes, t.inverse_map
    vals = [[complex(v) for v in row] for row in t.values]
    for a in range(k):
        for b in range(k):
            s = sum(vals[a][c] * vals[b][inv[c]] * t.sizes[c] for c in range(k))
            if abs(s - (n if a == b else 0)) > tol * n:
                raise OrthogonalityError(f"row orthogonality fails for characters {a + 1}, {b + 1}")


def class_constant(g: PermGroup, cc: ConjClassTable, i: int, j: int, z) -> int:
    """#{(a, b) in C_i x C_j : ab = z}, by direct enumeration over C_i."""
    k = len(cc)
    if not (0 <= i < k and 0 <= j < k):
        raise IndexError(f"class index out of range 0..{k - 1}")
    g.check_member(z)
    z = tuple(z)
    class_of = cc.class_of
    return sum(1 for a in cc.members(i) if class_of[_mul(_inv(a), z)] == j)


def dixon_prime(group_order: int, exponent: int, limit: int = 10**7) -> int:
    """Least prime p = 1 mod exponent with p > 2 sqrt(group_order)."""
    p = exponent + 1
    while p * p <= 4 * group_order or not is_prime(p):
        p += exponent
        if p > limit:
            raise BoundExceeded(f"no Dixon prime below {limit}")
    return p


def _class_matrix(cc: ConjClassTable, j: int):
    """M[k][l] = #{a in C_j : a^-1 z_l in C_k}."""
    r = len(cc)
    m = [[0] * r for _ in range(r)]
    class_of = cc.class_of
    inv_members = [_inv(a) for a in cc.members(j)]
    for l, z in enumerate(cc.reps):
        z = tuple(z)
        for ai in inv_members:
            m[class_of[_mul(ai, z)]][l] += 1
    return m


def _split(space, mat, p):
    """Split an invariant subspace (RREF rows + pivots) into eigenspaces of mat."""
    rows, pivots = space
    d = len(rows)
    r = len(mat)
    images = [[sum(mat[a][b] * v[b] for b in range(r)) % p for a in range(r)] for v in rows]
    # column i of the restricted matrix = pivot coordinates of images[i]
    restricted = [[images[i][pc] for i in range(d)] for pc in pivots]
    out = []
    for lam in modp.roots(modp.charpoly(restricted, p), p):
        shifted = [[(restricted[a][b] - (lam if a == b else 0)) % p for b in range(d)] for a in range(d)]
        for_space = []
        for coords in modp.nullspace(shifted, p):
            vec = [sum(c * v[t] for c, v in zip(coords, rows)) % p for t in range(r)]
            for_space.append(vec)
        out.append(modp.rref(for_space, p))
    if sum(len(s[0]) for s in out) != d:
        raise ArithmeticError("class matrix is not diagonalizable mod p")
    return out


def dixon_table(g: PermGroup, classes: ConjClassTable | None = None, bound: int = DIXON_BOUND) -> CharacterTable:
    """Irreducible characters via simultaneous eigenvectors of class matrices mod p."""
    n = g.cached_order
    if n > bound:
        raise BoundExceeded(f"group order {n} exceeds the character-table bound {bound}")
    cc = classes if classes is not None else conjugacy_classes(g)
    r = len(cc)
    e = math.lcm(*cc.orders)
    p = dixon_prime(n, e)

    spaces = [modp.rref([[int(a == b) for b in range(r)] for a in range(r)], p)]
    for j in range(1, r):
        if all(len(s[0]) == 1 for s in spaces):
            break
        mat = _class_matrix(cc, j)
        nxt = []
        for s in spaces:
            nxt.extend([s] if len(s[0]) == 1 else _split(s, mat, p))
        spaces = nxt
    if len(spaces) != r or any(len(s[0]) != 1 for s in spaces):
        raise ArithmeticError("class algebra did not split into one-dimensional spaces")

    eps = pow(modp.primitive_root(p), (p - 1) // e, p)  # stands for exp(2 pi i / e)
    sizes, inv_map = cc.sizes, cc.inverse_map
    power = [[cc.power_class(l, a) for a in range(cc.orders[l])] for l in range(r)]
    rows = []
    for (vec,), _ in spaces:
        w0 = vec[0]
        w = [x * pow(w0, -1, p) % p for x in vec]
        s = sum(w[l] * w[inv_map[l]] * pow(sizes[l], -1, p) for l in range(r)) % p
        d2 = n * pow(s, -1, p) % p
        d = next((d for d in range(1, math.isqrt(n) + 1) if d * d % p == d2), None)
        if d is None:
            raise ArithmeticError("degree square root not found; Dixon prime too small")
        theta = [d * w[l] * pow(sizes[l], -1, p) % p for l in range(r)]
        values = []
        for l in range(r):
            o = cc.orders[l]
            zo = pow(eps, e // o, p)
            mult = [0] * e
            inv_o = pow(o, -1, p)
            for t in range(o):
                acc = sum(theta[power[l][a]] * pow(zo, (-a * t) % o, p) for a in range(o)) % p
                m_t = acc * inv_o % p
                if m_t > d:
                    raise ArithmeticError("eigenvalue multiplicity out of range")
                mult[t * (e // o)] = m_t
            values.append(CycInt.from_multiplicities(e, mult))
        rows.append((d, values))

    rows.sort(key=lambda dv: (not all(v == 1 for v in dv[1]), dv[0], [v.c for v in dv[1]]))
    table = CharacterTable(
        group_order=n,
        exponent=e,
        sizes=list(sizes),
        orders=list(cc.orders),
        inverse_map=list(inv_map),
        values=[v for _, v in rows],
        degrees=[d for d, _ in rows],
        classes=cc,
    )
    table.check(exact=True)
    return table


def frobenius_sum(t: CharacterTable, i: int, j: int, k: int, invert_last: bool = True) -> Fraction:
    """sum over chi of chi(c_i) chi(c_j) chi(c_k^-1) / chi(1), exactly.

    With ``invert_last=False`` the last factor is chi(c_k) instead, the form
    used when counting solutions of xyz = 1.  The sum is Galois-stable, hence
    rational; a non-rational result means the table is inconsistent.
    """
    nc = t.num_classes
    for idx in (i, j, k):
        if not 0 <= idx < nc:
            raise IndexError(f"class index {idx} out of range 0..{nc - 1}")
    kk = t.inverse_map[k] if invert_last else k
    L = math.lcm(*t.degrees)
    total = CycInt.from_int(0)
    for row, d in zip(t.values, t.degrees):
        total = total + row[i] * row[j] * row[kk] * (L // d)
    if not total.is_rational():
        raise ArithmeticError("character sum is not rational; table is inconsistent")
    return Fraction(total.to_int(), L)


@dataclass(frozen=True)
class TripleCount:
    class_indices: tuple[int, int, int]
    count: int
    rational_sum: Fraction


def frobenius_count(t: CharacterTable, i: int, j: int, k: int) -> TripleCount:
    """Number of (a, b) in C_i x C_j with ab equal to a fixed element of C_k."""
    s = frobenius_sum(t, i, j, k)
    c = Fraction(t.sizes[i] * t.sizes[j], t.group_order) * s
    if c.denominator != 1 or c < 0:
        raise ArithmeticError(f"class multiplication coefficient {c} is not a non-negative integer")
    return TripleCount((i, j, k), int(c), s)


@dataclass(frozen=True)
class Sum1Bound:
    """|sum over non-trivial chi of chi(x)chi(y)chi(z)/chi(1)|.

    ``exact`` is the rational value; ``lower``/``upper`` enclose it in
    floating point, and ``numeric`` is the independent complex-embedding
    evaluation with its error radius.
    """

    exact: Fraction
    lower: float
    upper: float
    numeric: float
    numeric_error: float

    @property
    def below_one(self) -> bool:
        return self.exact < 1


def sum1_bound(t: CharacterTable, i: int, j: int, k: int, conjugate_last: bool = False) -> Sum1Bound:
    """The Frobenius positivity test value.

    By default the last factor is chi(c_k) as written for xyz = 1; a value
    below 1 then certifies that x^G y^G contains the class of c_k^-1.
    ``conjugate_last=True`` uses chi(c_k^-1) instead.
    """
    s = frobenius_sum(t, i, j, k, invert_last=conjugate_last) - 1
    exact = abs(s)
    f = float(exact)
    lower = math.nextafter(f, -math.inf) if Fraction(f) >= exact else f
    upper = math.nextafter(f, math.inf) if Fraction(f) <= exact else f
    kk = t.inverse_map[k] if conjugate_last else k
    terms = [
        complex(row[i]) * complex(row[j]) * complex(row[kk]) / d
        for row, d in zip(t.values[1:], t.degrees[1:])
    ]
    numeric = abs(sum(terms))
    err = 16 * len(terms) * 2.0**-52 * (1 + sum(abs(z) for z in terms)) * max(1, t.exponent)
    return Sum1Bound(exact, max(0.0, lower), upper, numeric, err)


def _format_value(v: CycInt, e: int) -> str:
    if v.n != e:
        if e % v.n == 0:
            v = v.embed(e)
        else:
            return f"{v.n}:" + ",".join(map(str, v.trimmed()))
    return ",".join(map(str, v.trimmed()))


def format_table(t: CharacterTable) -> str:
    lines = [
        f"format {TABLE_FORMAT}",
        f"order {t.group_order}",
        f"exponent {t.exponent}",
        f"classes {t.num_classes}",
        "sizes " + " ".join(map(str, t.sizes)),
        "orders " + " ".join(map(str, t.orders)),
        "inverses " + " ".join(str(i + 1) for i in t.inverse_map),
    ]
    for row in t.values:
        lines.append(" ".join(_format_value(v, t.exponent) for v in row))
    return "\n".join(lines) + "\n"


def _parse_value(tok: str, e: int, lineno: int) -> CycInt:
    n = e
    if ":" in tok:
        head, tok = tok.split(":", 1)
        try:
            n = int(head)
        except ValueError:
            raise FormatError(f"line {lineno}: bad modulus prefix in {tok!r}") from None
        if n < 1:
            raise FormatError(f"line {lineno}: bad modulus prefix {n}")
    try:
        coeffs = [int(x) for x in tok.split(",")]
    except ValueError:
        raise FormatError(f"line {lineno}: bad character value {tok!r}") from None
    if len(coeffs) > n:
        raise FormatError(f"line {lineno}: value {tok!r} has more than {n} coefficients")
    return CycInt(n, coeffs)


def parse_table(text: str, verify: bool = True) -> CharacterTable:
    header = {}
    rows = []
    keys = ["format", "order", "exponent", "classes", "sizes", "orders", "inverses"]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if len(header) < len(keys):
            key = keys[len(header)]
            parts = line.split()
            if parts[0] != key:
                raise FormatError(f"line {lineno}: expected '{key} ...', got {raw!r}")
            if key == "format":
                if parts[1:] != [TABLE_FORMAT]:
                    raise FormatError(f"line {lineno}: unsupported table format {' '.join(parts[1:])!r}")
                header[key] = TABLE_FORMAT
                continue
            try:
                nums = [int(x) for x in parts[1:]]
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer entry in {raw!r}") from None
            if key in ("order", "exponent", "classes"):
                if len(nums) != 1 or nums[0] < 1:
                    raise FormatError(f"line {lineno}: expected one positive integer")
                header[key] = nums[0]
            else:
                if len(nums) != header["classes"]:
                    raise FormatError(f"line {lineno}: expected {header['classes']} entries, got {len(nums)}")
                header[key] = nums
            continue
        toks = line.split()
        if len(toks) != header["classes"]:
            raise FormatError(f"line {lineno}: expected {header['classes']} values, got {len(toks)}")
        rows.append([_parse_value(tok, header["exponent"], lineno) for tok in toks])
    if len(header) < len(keys):
        raise FormatError(f"truncated header: missing '{keys[len(header)]}'")
    inverses = [i - 1 for i in header["inverses"]]
    if any(not 0 <= i < header["classes"] for i in inverses):
        raise FormatError("inverse class index out of range")
    degrees = []
    for r in rows:
        if not r[0].is_rational() or r[0].to_int() < 1:
            raise OrthogonalityError("character degree is not a positive integer")
        degrees.append(r[0].to_int())
    table = CharacterTable(
        group_order=header["order"],
        exponent=header["exponent"],
        sizes=header["sizes"],
        orders=header["orders"],
        inverse_map=inverses,
        values=rows,
        degrees=degrees,
    )
    if verify:
        table.check()
    return table


def read_table(path, verify: bool = True) -> CharacterTable:
    return parse_table(Path(path).read_text(encoding="utf-8"), verify=verify)


def write_table(t: CharacterTable, path) -> None:
    Path(path).write_text(format_table(t), encoding="utf-8")
