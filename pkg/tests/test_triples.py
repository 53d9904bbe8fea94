import math

import pytest
from hypothesis import given, settings, strategies as st

from noncongruence.errors import NotCentral, NotGenerating, NotInGroup
from noncongruence.group import PermGroup, center
from noncongruence.perm import Permutation, parse_cycles
from noncongruence.triples import (
    ProductReplacement,
    TripleWitness,
    alternating_target,
    alternating_witness,
    apply_nielsen_word,
    nielsen_equivalent,
    search_coprime_pair,
    search_smooth_pair,
    smooth_pair_check,
    verify_witness,
)
from noncongruence.chartable import dixon_table

from conftest import cached_group

# order triples for A_n from the construction
ALT_ORDERS = {
    5: (5, 3, 2),
    6: (5, 3, 4),
    7: (7, 5, 3),
    8: (7, 5, 6),
    9: (9, 7, 5),
    10: (9, 7, 8),
    11: (11, 9, 7),
    12: (11, 9, 35),
}


@pytest.mark.parametrize("n", sorted(ALT_ORDERS))
def test_alternating_witness(n):
    w = alternating_witness(n)
    assert w.orders == ALT_ORDERS[n]
    assert w.u.sign() == w.v.sign() == 1
    tu, tv, tuv = alternating_target(n)
    assert tuple(c for c in w.u.cycle_type() if c > 1) == tu
    assert tuple(c for c in w.v.cycle_type() if c > 1) == tv
    assert tuple(sorted(c for c in (w.u * w.v).cycle_type() if c > 1)) == tuv
    rep = verify_witness(cached_group(f"A{n}"), w.u, w.v)
    assert rep.delta == 1 and rep.generates
    assert w.conjugation == "A_n"


def test_alternating_witness_is_deterministic():
    assert alternating_witness(9) == alternating_witness(9)


def test_alternating_witness_rejects_small_n():
    with pytest.raises(ValueError):
        alternating_witness(4)


def test_verify_witness_examples():
    a5 = cached_group("A5")
    x, y = parse_cycles("(1 2 3 4 5)"), parse_cycles("(1 2 3)", 5)
    rep = verify_witness(a5, x, y)
    t = (x * y).order()
    assert rep.orders == (5, 3, t)
    assert rep.delta == math.gcd(15, 5 * t, 3 * t)
    e = a5.identity()
    rep = verify_witness(a5, e, e)
    assert rep.orders == (1, 1, 1) and not rep.generates
    s4 = cached_group("S4")
    rep = verify_witness(s4, parse_cycles("(1 2)", 4), parse_cycles("(1 2 3 4)"))
    assert rep.orders == (2, 4, 3)
    assert rep.delta == 2 and not rep.coprime and rep.generates
    assert rep.gcds == (2, 1, 1)
    with pytest.raises(NotInGroup):
        verify_witness(a5, parse_cycles("(1 2)", 5), e)


def test_verify_witness_with_table_counts_triple():
    a5 = cached_group("A5")
    w = alternating_witness(5)
    rep = verify_witness(a5, w.u, w.v, dixon_table(a5))
    assert rep.frobenius is not None and rep.frobenius.count > 0


@pytest.mark.parametrize("gid", ["A5", "PSL2(7)", "A6", "PSL2(11)"])
def test_search_finds_verified_coprime_pair(gid):
    g = cached_group(gid)
    w = search_coprime_pair(g, budget=2000, seed=7)
    assert w is not None
    rep = verify_witness(g, w.x, w.y)
    assert rep.delta == 1 and rep.generates
    assert w.orders == rep.orders


def test_a5_witness_orders():
    w = search_coprime_pair(cached_group("A5"), seed=0)
    assert sorted(w.orders) == [2, 3, 5]


def test_search_is_deterministic_per_seed():
    g = cached_group("PSL2(7)")
    assert search_coprime_pair(g, seed=3) == search_coprime_pair(g, seed=3)


def test_parallel_search_matches_serial_tie_break():
    g = cached_group("A5")
    par = search_coprime_pair(g, seed=11, workers=3)
    serial = [search_coprime_pair(g, budget=667, seed=s) for s in (11, 12, 13)]
    best = min((w for w in serial if w), key=lambda w: (w.iteration, w.seed))
    assert par == best


@pytest.mark.parametrize("gid", [f"C{n}" for n in range(2, 13)] + ["C2xC2", "C1"])
def test_abelian_and_trivial_groups_have_no_witness(gid):
    assert search_coprime_pair(cached_group(gid), budget=200) is None


def test_s4_has_no_coprime_pair_within_budget():
    assert search_coprime_pair(cached_group("S4"), budget=300) is None


def test_product_replacement_stays_in_group():
    g = cached_group("PSL2(7)")
    walk = ProductReplacement(g, seed=1)
    assert all(g.contains(walk.next()) for _ in range(200))


def test_smooth_pair_check():
    sl = cached_group("SL2(5)")
    z = center(sl)
    trivial = PermGroup([sl.identity()])
    minus_one = next(h for h in z.elements() if not h.is_identity())
    a, b = sl.generators
    assert smooth_pair_check(sl, trivial, a, b)
    assert not smooth_pair_check(sl, z, minus_one, a)
    with pytest.raises(NotCentral):
        smooth_pair_check(sl, PermGroup([a]), a, b)


def test_smooth_search_in_sl2_5():
    sl = cached_group("SL2(5)")
    z = center(sl)
    w = search_smooth_pair(sl, z, seed=0)
    assert w is not None and w.generates
    assert all(o % 2 for o in w.orders)
    assert smooth_pair_check(sl, z, w.x, w.y)
    assert w.smooth_for == "center"


class TestNielsen:
    def setup_method(self):
        self.g = cached_group("A5")
        w = alternating_witness(5)
        self.x, self.y = w.u, w.v

    def test_identical_pairs(self):
        r = nielsen_equivalent(self.g, (self.x, self.y), (self.x, self.y))
        assert r.status == "equivalent" and r.word == ""

    def test_single_moves(self):
        x, y = self.x, self.y
        assert nielsen_equivalent(self.g, (x, y), (x, x * y)).word == "T"
        assert nielsen_equivalent(self.g, (x, y), (x, ~y)).word == "I"
        assert nielsen_equivalent(self.g, (x, y), (x * y, y)).word == "U"

    def test_certificates_replay(self):
        x, y = self.x, self.y
        target = (y * x, ~x)
        r = nielsen_equivalent(self.g, (x, y), target)
        assert r.status == "equivalent"
        assert apply_nielsen_word(r.word, x, y) == target

    def test_mod_inn_certificate_up_to_conjugacy(self):
        x, y = self.x, self.y
        h = parse_cycles("(1 2 3)", 5)
        target = (x.conjugate(h), (x * y).conjugate(h))
        r = nielsen_equivalent(self.g, (x, y), target, mod_inn=True)
        assert r.status == "equivalent"
        from noncongruence.group import canonical_pair
        assert canonical_pair(self.g, *apply_nielsen_word(r.word, x, y)) == canonical_pair(self.g, *target)

    def test_moves_preserve_generation(self):
        r = nielsen_equivalent(self.g, (self.x, self.y), (self.y, self.x), bound=5000, check_generation=True)
        assert r.status == "equivalent"

    def test_exhausted_closure_is_inequivalent(self):
        # raw Nielsen classes of generating pairs of A5 have sizes 1080, 600, 600
        # (closure enumeration); these two pairs lie in different classes
        p1 = (parse_cycles("(3 4 5)", 5), parse_cycles("(1 2 3)", 5))
        p2 = (parse_cycles("(3 4 5)", 5), parse_cycles("(1 3)(2 4)", 5))
        r = nielsen_equivalent(self.g, p1, p2, bound=10**5)
        assert r.status == "inequivalent"
        assert r.explored <= 1080 + 600
        c2 = cached_group("C2")
        g, e = c2.generators[0], c2.identity()
        assert nielsen_equivalent(c2, (g, e), (e, g)).status == "equivalent"

    def test_bound_gives_unknown(self):
        g6 = cached_group("A6")
        w = alternating_witness(6)
        r = nielsen_equivalent(g6, (w.u, w.v), (w.v, w.u * w.u), bound=10)
        assert r.status in ("unknown", "equivalent")

    def test_non_generating_rejected(self):
        e = self.g.identity()
        with pytest.raises(NotGenerating):
            nielsen_equivalent(self.g, (self.x, e), (self.x, self.y))


@settings(max_examples=15, deadline=None)
@given(st.text(alphabet="TtUuI", max_size=8))
def test_random_move_words_are_certified(word):
    g = cached_group("A5")
    w = alternating_witness(5)
    target = apply_nielsen_word(word, w.u, w.v)
    r = nielsen_equivalent(g, (w.u, w.v), target)
    assert r.status == "equivalent"
    assert apply_nielsen_word(r.word, w.u, w.v) == target
