"""Named group constructors and group-id parsing.

Ids: ``A5``, ``S4``, ``C6``, ``D4`` (dihedral of order 8), ``PSL2(7)``,
``SL2(5)``, products ``C2xC2``, and ``file:path/to/group.grp``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import BoundExceeded, FormatError
from .group import PermGroup, read_group_text
from .ntheory import is_prime
from .perm import Permutation

__all__ = ["GroupSpec", "parse_spec", "build", "build_group", "MAX_N", "MAX_P"]

MAX_N = 16
MAX_P = 61

_KINDS = {"A": "alternating", "S": "symmetric", "C": "cyclic", "D": "dihedral"}
_SIMPLE_RE = re.compile(r"^(A|S|C|D)(\d+)$")
_LINEAR_RE = re.compile(r"^(PSL2|SL2)\((\d+)\)$")


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    param: int | None = None
    factors: tuple[GroupSpec, ...] = ()
    path: str | None = None
    name: str | None = None

    @property
    def id(self) -> str:
        if self.name:
            return self.name
        if self.kind == "product":
            return "x".join(f.id for f in self.factors)
        if self.kind == "file":
            return f"file:{self.path}"
        if self.kind in ("psl2", "sl2"):
            return f"{self.kind.upper()}({self.param})"
        letter = {v: k for k, v in _KINDS.items()}[self.kind]
        return f"{letter}{self.param}"

    def __str__(self):
        return self.id


def parse_spec(text: str) -> GroupSpec:
    text = text.strip()
    if text.startswith("file:"):
        return GroupSpec("file", path=text[5:])
    parts = text.split("x")
    if len(parts) > 1:
        return GroupSpec("product", factors=tuple(parse_spec(p) for p in parts))
    m = _SIMPLE_RE.match(text)
    if m:
        return GroupSpec(_KINDS[m.group(1)], int(m.group(2)))
    m = _LINEAR_RE.match(text)
    if m:
        return GroupSpec(m.group(1).lower(), int(m.group(2)))
    corpus = _corpus_group_file(text)
    if corpus is not None:
        return GroupSpec("file", path=str(corpus), name=text)
    raise ValueError(f"unknown group id {text!r}")


def _corpus_group_file(name: str):
    ref = resources.files("noncongruence") / "data" / "groups" / f"{name}.grp"
    return ref if ref.is_file() else None


def _cycle(points, degree):
    return Permutation.from_cycles([tuple(points)], degree)


def _alternating(n):
    if n < 3:
        return [Permutation.identity(max(n, 1))]
    if n == 3:
        return [_cycle(range(3), 3)]
    long = range(n) if n % 2 else range(1, n)
    return [_cycle((0, 1, 2), n), _cycle(long, n)]


def _symmetric(n):
    if n < 2:
        return [Permutation.identity(1)]
    if n == 2:
        return [_cycle((0, 1), 2)]
    return [_cycle((0, 1), n), _cycle(range(n), n)]


def _cyclic(n):
    if n == 1:
        return [Permutation.identity(1)]
    return [_cycle(range(n), n)]


def _dihedral(n):
    if n < 3:
        raise ValueError("dihedral groups need n >= 3 (use C2xC2 for the Klein group)")
    refl = Permutation([(-i) % n for i in range(n)])
    return [_cycle(range(n), n), refl]


def _matrix_action(p, projective):
    """Unipotent and Weyl generators acting on vectors or projective points."""
    if projective:
        points = [(1, 0)] + [(a, 1) for a in range(p)]
        def normalize(v):
            a, b = v[0] % p, v[1] % p
            if b == 0:
                return (1, 0)
            ib = pow(b, -1, p)
            return (a * ib % p, 1)
    else:
        points = [(a, b) for a in range(p) for b in range(p) if (a, b) != (0, 0)]
        def normalize(v):
            return (v[0] % p, v[1] % p)
    index = {v: i for i, v in enumerate(points)}
    gens = []
    for (a, b, c, d) in ((1, 1, 0, 1), (0, -1, 1, 0)):
        images = [index[normalize((a * x + b * y, c * x + d * y))] for x, y in points]
        gens.append(Permutation(images))
    return gens


def build(spec: GroupSpec | str, max_n: int = MAX_N, max_p: int = MAX_P) -> PermGroup:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    return PermGroup(_generators(spec, max_n, max_p), name=spec.id)


build_group = build


def _generators(spec: GroupSpec, max_n, max_p):
    k = spec.kind
    if k in ("alternating", "symmetric", "cyclic", "dihedral"):
        n = spec.param
        if n < 1 or n > (max_n if k != "cyclic" else 4 * max_n):
            raise BoundExceeded(f"parameter {n} out of bounds for {spec.id}")
        return {"alternating": _alternating, "symmetric": _symmetric,
                "cyclic": _cyclic, "dihedral": _dihedral}[k](n)
    if k in ("psl2", "sl2"):
        p = spec.param
        if not is_prime(p):
            raise ValueError(f"{spec.id}: {p} is not prime")
        if p > max_p:
            raise BoundExceeded(f"prime {p} exceeds bound {max_p}")
        return _matrix_action(p, projective=(k == "psl2"))
    if k == "product":
        parts = [_generators(f, max_n, max_p) for f in spec.factors]
        total = sum(len(g[0]) for g in parts)
        gens = []
        offset = 0
        for g in parts:
            deg = len(g[0])
            for h in g:
                images = list(range(total))
                for i, j in enumerate(h):
                    images[offset + i] = offset + j
                gens.append(Permutation(images))
            offset += deg
        return gens
    if k == "file":
        try:
            text = Path(spec.path).read_text(encoding="utf-8")
        except OSError as exc:
            raise FormatError(f"cannot read group file {spec.path}: {exc}") from None
        return read_group_text(text)
    raise ValueError(f"unknown group kind {k!r}")
