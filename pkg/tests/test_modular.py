import random

import pytest
from hypothesis import given, settings, strategies as st

from noncongruence import modular
from noncongruence.errors import AuditMismatch, BoundExceeded, ClosureUnstable, NotGenerating
from noncongruence.group import canonical_pair, generates
from noncongruence.modular import (
    S,
    T,
    U,
    SL2Matrix,
    apply_generator,
    apply_word,
    classify,
    congruence_closure,
    cusp_data,
    orbit_and_coset_table,
    orbit_decomposition,
    paper_criterion,
    presentation_class,
    presentation_classes,
    sl2_mod_image,
    sl2_mod_index,
    sl2_order,
    stabilizer_generators,
    stabilizer_words,
    word_matrix,
)
from noncongruence.perm import Permutation, parse_cycles
from noncongruence.triples import alternating_witness

from conftest import cached_group
from helpers import closure, generating_pair_classes, matrix_closure, sl2_mod

SL2_ORDERS = [1, 6, 24, 48, 120, 144, 336, 384, 648, 720, 1320, 1152]  # brute-force enumeration

# presentation classes per group, by closure enumeration
CLASS_COUNTS = {"C2": 3, "C3": 8, "C4": 12, "C6": 24, "C2xC2": 6, "S3": 3, "D4": 6, "Q8": 6,
                "A4": 8, "S4": 9, "A5": 38, "PSL2(7)": 114, "SL2(5)": 152, "S5": 57}


def random_class(g, rng):
    while True:
        x, y = g.random_element(rng), g.random_element(rng)
        if generates(g, x, y):
            return presentation_class(g, x, y)


def test_matrices():
    assert word_matrix("SSSS") == SL2Matrix(1, 0, 0, 1)
    assert word_matrix("SS") == SL2Matrix(-1, 0, 0, -1)
    assert word_matrix("stS") == U
    assert word_matrix("STSTST") == word_matrix("SS")
    assert T.inverse() @ T == SL2Matrix(1, 0, 0, 1)
    with pytest.raises(ValueError):
        SL2Matrix(1, 1, 1, 1)


def test_t_on_c2():
    g = cached_group("C2")
    a, e = g.generators[0], g.identity()
    c = presentation_class(g, a, a)
    assert apply_generator("T", c) == presentation_class(g, a, e)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_u_equals_s_inv_t_inv_s_on_a5(seed):
    g = cached_group("A5")
    c = random_class(g, random.Random(seed))
    assert apply_word("stS", c) == apply_generator("U", c)
    assert apply_word("SSSS", c) == c
    assert apply_word("SS", c) == apply_word("STSTST", c)
    for letter in "STU":
        assert apply_generator(letter.lower(), apply_generator(letter, c)) == c


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([4, 5, 6, 12]), st.text(alphabet="STUstu", max_size=10), st.integers(0, 10**6))
def test_abelianized_action_is_right_matrix_multiplication(n, word, seed):
    # on C_n, a pair (g^a, g^b) is the row vector (a, b); words act as (a, b) * M_word
    g = cached_group(f"C{n}")
    gen = g.generators[0]
    rng = random.Random(seed)
    while True:
        a, b = rng.randrange(n), rng.randrange(n)
        if generates(g, gen**a, gen**b):
            break
    c = apply_word(word, presentation_class(g, gen**a, gen**b))
    M = word_matrix(word)
    expect = ((a * M.a + b * M.c) % n, (a * M.b + b * M.d) % n)
    assert (c.x, c.y) == (gen ** expect[0], gen ** expect[1])


def test_c2_orbit():
    g = cached_group("C2")
    a, e = g.generators[0], g.identity()
    o = orbit_and_coset_table(g, presentation_class(g, a, e))
    assert len(o) == 3
    assert {tuple(map(tuple, o.pair(i))) for i in range(3)} == {
        (tuple(a), tuple(e)), (tuple(e), tuple(a)), (tuple(a), tuple(a))}
    cd = cusp_data(o)
    assert cd.widths == (1, 2) and cd.level == 2


def test_trivial_group_single_point_orbit():
    g = cached_group("C1")
    e = g.identity()
    o = orbit_and_coset_table(g, presentation_class(g, e, e))
    assert len(o) == 1
    assert cusp_data(o).widths == (1,) and cusp_data(o).level == 1
    assert stabilizer_words(o) == ["S", "T"]
    assert stabilizer_generators(o) == [S, T]
    r = congruence_closure(o)
    assert r.index_closure == 1 and r.verdict == "congruence"


def test_orbit_is_deterministic_bfs():
    g = cached_group("A5")
    w = alternating_witness(5)
    o1 = orbit_and_coset_table(g, presentation_class(g, w.u, w.v))
    o2 = orbit_and_coset_table(g, presentation_class(g, w.u, w.v))
    assert o1.points == o2.points and o1.sigma_S == o2.sigma_S
    assert o1.edge[1] == "S" and o1.parent[1] == 0


def test_orbit_bound():
    g = cached_group("A5")
    w = alternating_witness(5)
    with pytest.raises(BoundExceeded):
        orbit_and_coset_table(g, presentation_class(g, w.u, w.v), max_orbit=5)


def relations_hold(o):
    sS, sT = Permutation(o.sigma_S), Permutation(o.sigma_T)
    e = Permutation.identity(len(o))
    z = sS * sS
    return z * z == e and z == (sS * sT) ** 3 and z * sT == sT * z


def parabolic_fix(o):
    x, y = o.pair(0)
    return o.act("T" * x.order()) == 0 and o.act("stS" * y.order()) == 0


@pytest.mark.parametrize("gid", ["C2", "C6", "C2xC2", "S3", "D4", "Q8", "A4", "S4", "A5", "PSL2(7)", "SL2(5)"])
def test_relations_parabolics_and_stabilizers_on_every_orbit(gid):
    g = cached_group(gid)
    for o in orbit_decomposition(g):
        assert relations_hold(o)
        assert parabolic_fix(o)
        x, _ = o.pair(0)
        assert x.order() % cusp_data(o).base_width == 0
        words = stabilizer_words(o)
        assert len(words) <= 2 * len(o)
        base = presentation_class(g, *o.pair(0))
        for w, M in zip(words, stabilizer_generators(o)):
            assert M.det() == 1
            assert o.act(w) == 0
        for w in words[:6]:
            assert apply_word(w, base) == base


@pytest.mark.parametrize("gid", sorted(CLASS_COUNTS))
def test_presentation_class_counts(gid):
    g = cached_group(gid)
    classes = presentation_classes(g)
    assert len(classes) == CLASS_COUNTS[gid]
    assert sum(len(o) for o in orbit_decomposition(g, classes)) == len(classes)
    for x, y in classes[:5]:
        assert canonical_pair(g, x, y) == (x, y)


@pytest.mark.parametrize("gid", ["C5", "C8", "C12", "C2xC4", "C3xC3", "C4xC4", "C2xC8", "C6xC6", "C8xC8"])
def test_abelian_orbits_match_brute_force_and_are_congruence(gid):
    g = cached_group(gid)
    els = closure(g.generators)
    brute = sum(1 for x in els for y in els if len(closure([x, y])) == len(els)) if len(els) <= 16 else None
    orbits = orbit_decomposition(g)
    total = sum(len(o) for o in orbits)
    if brute is not None:
        assert total == brute
    assert total == len(presentation_classes(g))
    for o in orbits:
        assert congruence_closure(o).verdict == "congruence"


def test_brute_force_classes_small():
    for gid in ("S3", "A4", "Q8"):
        g = cached_group(gid)
        assert len(generating_pair_classes(closure(g.generators))) == CLASS_COUNTS[gid]


def test_sl2_order():
    assert [sl2_order(m) for m in range(1, 13)] == SL2_ORDERS
    assert [len(sl2_mod(m)) for m in (2, 3, 4, 6)] == [6, 24, 48, 144]


def test_sl2_mod_index_examples():
    for m in (1, 2, 3, 4, 6, 10, 12, 30):
        assert sl2_mod_index([S, T], m) == 1
    assert sl2_mod_index([], 2) == 6
    assert sl2_mod_index([T], 4) == 12
    img = sl2_mod_image([T], 12)
    assert img.index == 1152 // 12
    assert img.block_indices == {4: 12, 3: 8}


@settings(max_examples=40, deadline=None)
@given(st.lists(st.text(alphabet="STst", min_size=1, max_size=7), min_size=1, max_size=3),
       st.sampled_from([2, 3, 4, 5, 6, 8, 9, 10, 12]))
def test_sl2_mod_index_against_matrix_closure(words, m):
    mats = [word_matrix(w) for w in words]
    brute = sl2_order(m) // len(matrix_closure([(M.a, M.b, M.c, M.d) for M in mats], m))
    assert sl2_mod_index(mats, m) == brute


@settings(max_examples=25, deadline=None)
@given(st.lists(st.text(alphabet="STst", min_size=1, max_size=9), min_size=1, max_size=3),
       st.sampled_from([(2, 3), (4, 3), (3, 5), (4, 5), (8, 3)]))
def test_crt_consistency(words, pair):
    m1, m2 = pair
    mats = [word_matrix(w) for w in words]
    i1, i2, i12 = (sl2_mod_index(mats, m) for m in (m1, m2, m1 * m2))
    assert i12 >= max(i1, i2)
    assert i12 % i1 == 0 and i12 % i2 == 0


def test_sl2_mod_index_errors():
    with pytest.raises(BoundExceeded):
        sl2_mod_index([T], 10**6, modulus_cap=100)
    with pytest.raises(ValueError):
        sl2_mod_index([T], 0)


def test_closure_examples():
    c2 = cached_group("C2")
    a = c2.generators[0]
    o = orbit_and_coset_table(c2, presentation_class(c2, a, c2.identity()))
    r = congruence_closure(o)
    assert r.verdict == "congruence" and r.index_closure == r.index_gamma == 3
    w = alternating_witness(5)
    a5 = cached_group("A5")
    r = congruence_closure(orbit_and_coset_table(a5, presentation_class(a5, w.u, w.v)))
    assert r.verdict == "totally-noncongruence" and r.index_closure == 1 < r.index_gamma
    assert [m for m, _ in r.schedule] == [r.level * f for f in (1, 2, 4, 6)]
    s3 = cached_group("S3")
    for x, y in presentation_classes(s3):
        assert classify(s3, x, y).verdict == "congruence"


def test_closure_instability_is_reported(monkeypatch):
    g = cached_group("S3")
    x, y = presentation_classes(g)[0]
    o = orbit_and_coset_table(g, presentation_class(g, x, y))
    calls = iter([1, 1, 1, 3])
    monkeypatch.setattr(modular, "sl2_mod_index", lambda mats, m, cap=None: next(calls))
    with pytest.raises(ClosureUnstable):
        congruence_closure(o)


def test_paper_criterion():
    a5 = cached_group("A5")
    w = alternating_witness(5)
    assert paper_criterion(a5, w.u, w.v)
    c6 = cached_group("C6")
    for x, y in presentation_classes(c6):
        assert not paper_criterion(c6, x, y)
    s4 = cached_group("S4")
    assert not paper_criterion(s4, parse_cycles("(1 2)", 4), parse_cycles("(1 2 3 4)"))
    with pytest.raises(NotGenerating):
        paper_criterion(a5, w.u, a5.identity())
    c1 = cached_group("C1")
    assert not paper_criterion(c1, c1.identity(), c1.identity())


def test_classify_modes():
    a5 = cached_group("A5")
    w = alternating_witness(5)
    fast = classify(a5, w.u, w.v)
    assert fast.criterion_verdict and fast.verdict == "totally-noncongruence" and not fast.schedule
    audited = classify(a5, w.u, w.v, audit=True)
    assert audited.criterion_verdict and audited.index_closure == 1 < audited.index_gamma
    c4 = cached_group("C4")
    a = c4.generators[0]
    assert classify(c4, a, a).verdict == "congruence"


def test_audit_mismatch_detected(monkeypatch):
    a5 = cached_group("A5")
    w = alternating_witness(5)
    real = modular.congruence_closure

    def fake(o, *args, **kw):
        r = real(o, *args, **kw)
        r.index_closure, r.verdict = r.index_gamma, "congruence"
        return r

    monkeypatch.setattr(modular, "congruence_closure", fake)
    with pytest.raises(AuditMismatch):
        classify(a5, w.u, w.v, audit=True)


def test_psl27_presentations_never_congruence():
    g = cached_group("PSL2(7)")
    for o in orbit_decomposition(g):
        assert congruence_closure(o).verdict != "congruence"


def test_closure_index_divides_orbit_size():
    for gid in ("S4", "SL2(5)", "S5"):
        for o in orbit_decomposition(cached_group(gid)):
            r = congruence_closure(o)
            assert r.index_gamma % r.index_closure == 0
            idx = [i for _, i in r.schedule]
            assert all(b % a == 0 for a, b in zip(idx, idx[1:]))


def test_env_defaults(monkeypatch):
    monkeypatch.setenv("MF_MAX_ORBIT", "7")
    monkeypatch.setenv("MF_MODULUS_CAP", "11")
    assert modular.default_max_orbit() == 7
    assert modular.default_modulus_cap() == 11
