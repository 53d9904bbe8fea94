"""Coprime generating pairs, alternating-group constructions, smoothness, Nielsen moves."""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .chartable import CharacterTable, TripleCount, frobenius_count
from .errors import NotGenerating
from .group import (
    PermGroup,
    _inv,
    _mul,
    canonical_pair,
    center,
    conjugacy_classes,
    generates,
    is_central,
    order_mod_subgroup,
)
from .ntheory import PpdResult, ppd
from .perm import Permutation

__all__ = [
    "TripleWitness",
    "WitnessReport",
    "AlternatingWitness",
    "NielsenResult",
    "ProductReplacement",
    "search_coprime_pair",
    "search_smooth_pair",
    "verify_witness",
    "alternating_witness",
    "alternating_target",
    "smooth_pair_check",
    "nielsen_equivalent",
    "abelian_obstruction",
    "ppd",
    "PpdResult",
]


def _delta(r, s, t):
    return math.gcd(r * s, r * t, s * t)


@dataclass(frozen=True)
class TripleWitness:
    x: Permutation
    y: Permutation
    orders: tuple[int, int, int]
    delta: int
    generates: bool
    smooth_for: str | None = None
    seed: int | None = None
    iteration: int | None = None

    @classmethod
    def of(cls, g: PermGroup, x, y, smooth_for=None, seed=None, iteration=None):
        x, y = Permutation(x, check=False), Permutation(y, check=False)
        r, s, t = x.order(), y.order(), (x * y).order()
        return cls(x, y, (r, s, t), _delta(r, s, t), generates(g, x, y), smooth_for, seed, iteration)

    @property
    def coprime(self) -> bool:
        return self.delta == 1


class ProductReplacement:
    """Product-replacement random walk with an accumulator (fixed schedule per seed)."""

    def __init__(self, g: PermGroup, seed: int, slots: int = 10, burn_in: int = 50):
        self.rng = random.Random(seed)
        gens = [tuple(h) for h in g.generators] or [tuple(g.identity())]
        self.state = [gens[i % len(gens)] for i in range(max(slots, len(gens)))]
        self.acc = tuple(g.identity())
        for _ in range(burn_in):
            self.next()

    def next(self) -> tuple:
        st, rng = self.state, self.rng
        i, j = rng.sample(range(len(st)), 2)
        other = st[j] if rng.random() < 0.5 else _inv(st[j])
        st[i] = _mul(st[i], other) if rng.random() < 0.5 else _mul(other, st[i])
        self.acc = _mul(self.acc, st[i])
        return self.acc


def _element_of_order(walk: ProductReplacement, r: int, tries: int = 64):
    for _ in range(tries):
        h = Permutation(walk.next(), check=False)
        o = h.order()
        if o % r == 0:
            return h ** (o // r)
    return None


def abelian_obstruction(g: PermGroup) -> int | None:
    """delta for abelian g (always a multiple of the exponent), else None."""
    if not g.is_abelian():
        return None
    return g.exponent()


def _candidate_orders(g: PermGroup, odd_to: int | None = None):
    """(r, s) order pairs ranked by how often such elements occur."""
    cc = conjugacy_classes(g)
    freq = Counter()
    for o, size in zip(cc.orders, cc.sizes):
        if o > 1 and (odd_to is None or math.gcd(o, odd_to) == 1):
            freq[o] += size
    orders = sorted(freq)
    pairs = []
    for r in orders:
        for s in orders:
            if r < s if odd_to is None else r <= s:
                if odd_to is None and math.gcd(r, s) != 1:
                    continue
                pairs.append((r, s))
    pairs.sort(key=lambda rs: (-freq[rs[0]] * freq[rs[1]], -rs[0], -rs[1]))
    return pairs


def _search_worker(args):
    g, budget, seed, smooth_z, smooth_label = args
    zorder = smooth_z.order() if smooth_z is not None else None
    pairs = _candidate_orders(g, odd_to=zorder)
    if not pairs:
        return None
    walk = ProductReplacement(g, seed)
    for it in range(budget):
        r, s = pairs[it % len(pairs)]
        x = _element_of_order(walk, r)
        y = _element_of_order(walk, s)
        if x is None or y is None:
            continue
        t = (x * y).order()
        if t == 1:
            continue
        if smooth_z is None:
            if _delta(r, s, t) != 1:
                continue
        else:
            if math.gcd(t, zorder) != 1 or not smooth_pair_check(g, smooth_z, x, y):
                continue
        if generates(g, x, y):
            return TripleWitness.of(g, x, y, smooth_label, seed, it)
    return None


def _run_search(g, budget, seed, workers, smooth_z=None, smooth_label=None):
    if g.order() == 1:
        return None
    seeds = [seed + k for k in range(max(1, workers))]
    share = -(-budget // len(seeds))
    jobs = [(g, share, sd, smooth_z, smooth_label) for sd in seeds]
    if len(jobs) == 1:
        results = [_search_worker(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            results = list(pool.map(_search_worker, jobs))
    found = [w for w in results if w is not None]
    if not found:
        return None
    # tie-break independent of scheduling: earliest iteration, then smallest seed
    return min(found, key=lambda w: (w.iteration, w.seed))


def search_coprime_pair(g: PermGroup, budget: int = 2000, seed: int = 0, workers: int = 1):
    """A generating pair with |x|, |y|, |xy| pairwise coprime, or None.

    None only means the budget ran out (or g is trivial or abelian, where
    no such pair exists).
    """
    if g.order() == 1 or abelian_obstruction(g) is not None:
        return None
    return _run_search(g, budget, seed, workers)


def search_smooth_pair(g: PermGroup, z: PermGroup | None = None, budget: int = 2000, seed: int = 0, workers: int = 1):
    """A generating pair whose three orders are coprime to |z| (so unchanged mod z).

    ``z`` defaults to the center of g.
    """
    if z is None:
        z = center(g)
    if not is_central(g, z):
        from .errors import NotCentral
        raise NotCentral("subgroup is not central")
    label = "center" if z.order() == center(g).order() else f"order-{z.order()}"
    return _run_search(g, budget, seed, workers, smooth_z=z, smooth_label=label)


def smooth_pair_check(g: PermGroup, z: PermGroup, x, y) -> bool:
    """|w| equals the order of wZ for w in {x, y, xy}."""
    if not is_central(g, z):
        from .errors import NotCentral
        raise NotCentral("subgroup is not central")
    g.check_member(x, y)
    x, y = Permutation(x, check=False), Permutation(y, check=False)
    return all(w.order() == order_mod_subgroup(g, z, w) for w in (x, y, x * y))


@dataclass(frozen=True)
class WitnessReport:
    orders: tuple[int, int, int]
    delta: int
    gcds: tuple[int, int, int]
    generates: bool
    frobenius: TripleCount | None = None

    @property
    def coprime(self) -> bool:
        return self.delta == 1


def verify_witness(g: PermGroup, x, y, table: CharacterTable | None = None) -> WitnessReport:
    g.check_member(x, y)
    x, y = Permutation(x, check=False), Permutation(y, check=False)
    xy = x * y
    r, s, t = x.order(), y.order(), xy.order()
    frob = None
    if table is not None:
        cc = conjugacy_classes(g)
        frob = frobenius_count(table, cc.index(x), cc.index(y), cc.index(xy))
    return WitnessReport(
        (r, s, t),
        _delta(r, s, t),
        (math.gcd(r, s), math.gcd(r, t), math.gcd(s, t)),
        generates(g, x, y),
        frob,
    )


@dataclass(frozen=True)
class AlternatingWitness:
    n: int
    u: Permutation
    v: Permutation
    orders: tuple[int, int, int]
    uv_cycle_type: tuple[int, ...]
    conjugation: str  # "A_n", or "S_n" when the fallback class was needed


def alternating_target(n: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Non-trivial cycle lengths of u, v and uv in the construction for A_n."""
    if n < 5:
        raise ValueError("alternating witnesses need n >= 5")
    if n % 2:
        uv = (2, 2) if n == 5 else (n - 4,)
        return (n,), (n - 2,), uv
    uv = (5, n - 5) if n % 5 in (2, 4) else (2, n - 2)
    return (n - 1,), (n - 3,), tuple(sorted(uv))


def _cycle_perm(points, n):
    return Permutation.from_cycles([tuple(points)], n)


def _cycles_of_length(n, length):
    """All length-cycles on 0..n-1 in a fixed lexicographic order."""
    for support in itertools.combinations(range(n), length):
        head, rest = support[0], support[1:]
        for arr in itertools.permutations(rest):
            yield (head,) + arr


def _splits(cycle_type_with_fixed):
    parts = cycle_type_with_fixed
    return all(p % 2 for p in parts) and len(set(parts)) == len(parts)


def alternating_witness(n: int) -> AlternatingWitness:
    """Deterministic (u, v) in A_n with the prescribed cycle types for u, v, uv."""
    from .catalog import build

    tu, tv, tuv = alternating_target(n)
    lu, lv = tu[0], tv[0]
    u = _cycle_perm(range(lu), n)
    v0 = tuple(range(lv))
    group = build(f"A{n}")
    # the class of v splits in A_n only when its full cycle type has distinct odd parts
    split = _splits((lv,) + (1,) * (n - lv))

    def conjugator_sign(cyc):
        images = list(cyc) + [p for p in range(n) if p not in cyc]
        sources = list(v0) + [p for p in range(n) if p not in v0]
        h = [0] * n
        for a, b in zip(sources, images):
            h[a] = b
        return Permutation(h, check=False).sign()

    for phase in ("A_n", "S_n"):
        if phase == "S_n" and not split:
            break
        for cyc in _cycles_of_length(n, lv):
            if split and (conjugator_sign(cyc) == 1) != (phase == "A_n"):
                continue
            v = _cycle_perm(cyc, n)
            uv = u * v
            if tuple(sorted(c for c in uv.cycle_type() if c > 1)) != tuv:
                continue
            if not generates(group, u, v):
                continue
            orders = (u.order(), v.order(), uv.order())
            return AlternatingWitness(n, u, v, orders, tuv, phase)
    raise RuntimeError(f"no alternating witness found for n={n}; this indicates a bug")


@dataclass(frozen=True)
class NielsenResult:
    status: str  # "equivalent", "inequivalent", "unknown"
    word: str | None = None
    explored: int = 0


# moves on pairs; lower case letters undo the upper case ones
_NIELSEN_MOVES = {
    "T": lambda x, y: (x, _mul(x, y)),
    "t": lambda x, y: (x, _mul(_inv(x), y)),
    "U": lambda x, y: (_mul(x, y), y),
    "u": lambda x, y: (_mul(x, _inv(y)), y),
    "I": lambda x, y: (x, _inv(y)),
}
_INVERSE_MOVE = {"T": "t", "t": "T", "U": "u", "u": "U", "I": "I"}


def apply_nielsen_word(word: str, x, y):
    x, y = tuple(x), tuple(y)
    for ch in word:
        x, y = _NIELSEN_MOVES[ch](x, y)
    return Permutation(x, check=False), Permutation(y, check=False)


def nielsen_equivalent(g: PermGroup, p1, p2, bound: int = 10**5, mod_inn: bool = False,
                       check_generation: bool = False) -> NielsenResult:
    """Bidirectional BFS over the moves (x,xy), (xy,y), (x,y^-1) and their inverses.

    The certificate word w satisfies apply_nielsen_word(w, *p1) == p2 (up to
    simultaneous conjugation when ``mod_inn`` is set).  ``inequivalent``
    means both frontiers were exhausted before reaching ``bound`` states.
    ``check_generation`` re-tests generation of every new state.
    """
    for p in (p1, p2):
        if not generates(g, *p):
            raise NotGenerating("pair does not generate the group")

    if mod_inn:
        def key(x, y):
            cx, cy = canonical_pair(g, x, y, check=False)
            return tuple(cx), tuple(cy)
    else:
        def key(x, y):
            return tuple(x), tuple(y)

    a, b = key(*p1), key(*p2)
    if a == b:
        return NielsenResult("equivalent", "", 1)
    # parent maps: state -> (previous state, move used from previous)
    fwd, bwd = {a: None}, {b: None}
    qf, qb = deque([a]), deque([b])

    def word_from(parents, s):
        letters = []
        while parents[s] is not None:
            s, m = parents[s]
            letters.append(m)
        return "".join(reversed(letters))

    def expand(queue, seen, other, forward):
        for _ in range(len(queue)):
            s = queue.popleft()
            for m, f in _NIELSEN_MOVES.items():
                nxt = key(*f(*s))
                if nxt in seen:
                    continue
                if check_generation and not generates(g, *nxt):
                    raise AssertionError("Nielsen move broke generation")
                seen[nxt] = (s, m)
                if nxt in other:
                    return nxt
                queue.append(nxt)
        return None

    while qf and qb:
        if len(fwd) + len(bwd) > bound:
            return NielsenResult("unknown", None, len(fwd) + len(bwd))
        forward = len(qf) <= len(qb)
        if forward:
            meet = expand(qf, fwd, bwd, True)
        else:
            meet = expand(qb, bwd, fwd, False)
        if meet is not None:
            w1 = word_from(fwd, meet)
            w2 = word_from(bwd, meet)
            back = "".join(_INVERSE_MOVE[c] for c in reversed(w2))
            return NielsenResult("equivalent", w1 + back, len(fwd) + len(bwd))
    return NielsenResult("inequivalent", None, len(fwd) + len(bwd))
