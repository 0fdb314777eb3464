import json
import random

import numpy as np
import pytest

import liftforge as lf
from liftforge.corefn import ArityCapError, InvalidRuleError
from liftforge.landscape import compile_landscape, parse_landscape
from liftforge.lifting import (
    CapExceededError,
    _raw_induced_array,
    compose_chain,
    net_rotation,
    replay_witness,
    sigma,
)


def _rule(text):
    return compile_landscape(parse_landscape(text))


PATT = _rule("0★10")
XOR2 = lf.rule_from_anf_text("x1 ^ x2")


def test_induce_identity():
    ident = lf.rule_from_table(1, [0, 1])
    fm = lf.induce(ident, 5)
    assert np.array_equal(fm.as_array(), np.arange(32))


def test_induce_patt_bijection_n4():
    fm = lf.induce(PATT, 4)
    assert fm.is_bijective()
    assert sorted(fm.as_array()) == list(range(16))


def test_xor_rule_complement_symmetry():
    fm = lf.induce(XOR2, 6)
    arr = fm.as_array()
    full = (1 << 6) - 1
    x = 0b010011
    assert arr[x] == arr[x ^ full]
    assert not fm.is_bijective()


def test_induce_rejects_short_circle():
    with pytest.raises(InvalidRuleError):
        lf.induce(PATT, 3)


def test_is_lifting_examples():
    assert all(lf.is_lifting(PATT, n) for n in range(4, 17))
    assert not lf.is_lifting(XOR2, 8)
    gf = lf.compose(_rule("1★001"), _rule("1★01"))
    assert all(lf.is_lifting(gf, n) for n in range(5, 15))


def test_is_lifting_cap():
    with pytest.raises(CapExceededError):
        lf.is_lifting(PATT, 25)


def test_shift_invariance_random():
    rng = random.Random(20240810)
    for _ in range(200):
        k = rng.randint(1, 6)
        table = rng.getrandbits(1 << k)
        try:
            r = lf.rule_from_table(k, table)
        except InvalidRuleError:
            continue
        n = rng.randint(r.k, 12)
        fm = lf.induce(r, n)
        x = rng.getrandbits(n)
        assert fm(sigma(x, n)) == sigma(fm(x), n)


def test_single_point_matches_array():
    fm = lf.induce(PATT, 9)
    arr = fm.as_array()
    rng = random.Random(1)
    for _ in range(50):
        x = rng.getrandbits(9)
        assert fm(x) == arr[x]


def test_normalization_preserves_induced_behavior():
    # raw table with a leading dead variable: rule slides, induced maps
    # differ only by the recorded rotation
    raw_k, n = 5, 10
    base = _rule("0★10")
    raw_table = 0
    for v in range(1 << raw_k):
        raw_table |= base.bit((v >> 1) & 0b1111) << v
    r = lf.rule_from_table(raw_k, raw_table)
    assert r.k == 4 and r.shift == -1
    raw_map = _raw_induced_array(raw_table, raw_k, n)
    shifted = lf.induce(r, n, honor_shift=True).as_array()
    assert np.array_equal(raw_map, shifted)


# ---------------------------------------------------------------------------
# composition


def test_compose_reproduces_printed_diameter5_rule():
    gf = lf.compose(_rule("1★001"), _rule("1★01"))
    ref = lf.rule_from_anf_text("x2 ^ x1*(x4*(x3^1) ^ (x4^1)*x5*(x2^x3^1))")
    assert gf.k == 5
    assert gf.same_function(ref)


def test_compose_with_identity():
    ident = lf.rule_from_table(1, [0, 1])
    assert lf.compose(ident, PATT).same_function(PATT)
    assert lf.compose(PATT, ident).same_function(PATT)


def test_compose_homomorphism_with_shift():
    rng = random.Random(99)
    pool = [PATT, _rule("1★01"), _rule("0★110"), _rule("10★10"), _rule("1★001")]
    for _ in range(200):
        g, f = rng.choice(pool), rng.choice(pool)
        c = lf.compose(g, f)
        n = rng.randint(max(c.k, g.k, f.k), 12)
        lhs = lf.induce(c, n, honor_shift=True).as_array()
        fg = lf.induce(f, n, honor_shift=True).as_array()
        gg = lf.induce(g, n, honor_shift=True).as_array()
        assert np.array_equal(lhs, gg[fg])


def test_compose_arity_cap():
    r = _rule("0★-----------10")  # diameter 15
    with pytest.raises(ArityCapError):
        lf.compose(r, r, arity_cap=20)


def test_compose_chain_matches_pairwise():
    rules = [_rule("0★10"), _rule("0★110"), _rule("01★00")]
    a = compose_chain(rules)
    b = lf.compose(lf.compose(rules[0], rules[1]), rules[2])
    assert a.same_function(b) and a.shift == b.shift


# ---------------------------------------------------------------------------
# expansion


def test_expand_patt_stride3():
    f3 = lf.expand(PATT, 3)
    assert f3.k == 10
    # f3(x) = f(x1, x4, x7, x10)
    rng = random.Random(5)
    for _ in range(100):
        v = rng.getrandbits(10)
        w = ((v >> 0) & 1) | (((v >> 3) & 1) << 1) | (((v >> 6) & 1) << 2) | (((v >> 9) & 1) << 3)
        assert f3.bit(v) == PATT.bit(w)


def test_expand_stride1_is_identity():
    assert lf.expand(PATT, 1) is PATT


def test_expand_conjugacy_coprime():
    # for gcd(n, s) = 1 the expanded map is an index-permutation conjugate:
    # bit i of the permuted state reads bit i * s^(-1) mod n of the original
    s, n = 2, 11
    f2 = lf.expand(PATT, s)
    base = lf.induce(PATT, n).as_array()
    exp = lf.induce(f2, n).as_array()
    sinv = pow(s, -1, n)
    perm = [(i * sinv) % n for i in range(n)]

    def apply_perm(x):
        y = 0
        for i in range(n):
            y |= ((x >> perm[i]) & 1) << i
        return y

    rng = random.Random(11)
    for _ in range(200):
        x = rng.getrandbits(n)
        assert apply_perm(base[x]) == exp[apply_perm(x)]


# ---------------------------------------------------------------------------
# iterate order and the divisor implication


def test_iterate_order_examples():
    assert lf.iterate_order(PATT, 4) == 2
    assert lf.iterate_order(lf.rule_from_table(1, [0, 1]), 3) == 1
    assert lf.iterate_order(XOR2, 6) is None


def test_iterate_order_records_rotation():
    sq = lf.compose(PATT, PATT)
    assert sq.k == 1 and net_rotation(sq) == -2


def test_divisor_check():
    assert lf.divisor_check(PATT, 12, 6)
    assert lf.divisor_check(XOR2, 8, 4)  # vacuous: not a lifting at 8
    with pytest.raises(InvalidRuleError):
        lf.divisor_check(PATT, 12, 5)


def test_divisor_implication_randomized():
    rng = random.Random(20240810)
    checked = 0
    while checked < 200:
        k = rng.randint(2, 5)
        table = rng.getrandbits(1 << k)
        try:
            r = lf.rule_from_table(k, table)
        except InvalidRuleError:
            continue
        n = rng.choice([8, 12, 16])
        m = rng.choice([d for d in range(r.k, n + 1) if n % d == 0])
        assert lf.divisor_check(r, n, m)
        checked += 1


# ---------------------------------------------------------------------------
# properness


def test_decide_proper_patt():
    v = lf.decide_proper(PATT)
    assert v.proper and v.method == "pair-graph" and v.witness is None


def test_decide_proper_xor_witness():
    v = lf.decide_proper(XOR2)
    assert not v.proper
    assert replay_witness(XOR2, v.witness)
    doc = json.loads(v.to_json())
    assert doc["decision"] == "not-proper"
    assert set(doc["witness"]) == {"n", "x", "y"}


def test_finite_scan_agrees_on_conserved_k6(conserved_pool_k6):
    for _, r in conserved_pool_k6:
        assert lf.decide_proper(r).proper
    # conserved landscapes are all proper; scan mode agrees up to its limit
    sample = [r for _, r in conserved_pool_k6[:10]]
    for r in sample:
        assert lf.decide_proper(r, method="finite-scan", scan_limit=12).proper


def test_finite_scan_agrees_on_random_non_liftings():
    rng = random.Random(77)
    disagreements = 0
    found = 0
    while found < 100:
        k = rng.randint(2, 5)
        table = rng.getrandbits(1 << k)
        try:
            r = lf.rule_from_table(k, table)
        except InvalidRuleError:
            continue
        exact = lf.decide_proper(r)
        if exact.proper:
            continue
        found += 1
        assert replay_witness(r, exact.witness)
        scan = lf.decide_proper(r, method="finite-scan", scan_limit=16)
        if scan.proper:
            disagreements += 1  # scan limit too small to catch it
        else:
            assert replay_witness(r, scan.witness)
    assert disagreements == 0


def test_composition_of_proper_is_proper(conserved_pool_k6):
    rng = random.Random(13)
    pool = [r for _, r in conserved_pool_k6]
    for _ in range(25):
        g, f = rng.choice(pool), rng.choice(pool)
        assert lf.decide_proper(lf.compose(g, f)).proper


def test_equivalence_preserves_lifting_status():
    rng = random.Random(3)
    checked = 0
    while checked < 60:
        k = rng.randint(2, 5)
        table = rng.getrandbits(1 << k)
        try:
            r = lf.rule_from_table(k, table)
        except InvalidRuleError:
            continue
        checked += 1
        for n in range(r.k, 11):
            status = lf.is_lifting(r, n)
            for m in lf.orbit(r):
                assert lf.is_lifting(m, n) == status
