import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import liftforge as lf
from liftforge.corefn import (
    Anf,
    InvalidRuleError,
    _lex_key,
    anf_masks_to_table,
    essential_vars,
    rule_from_table,
    table_to_anf_masks,
)


def test_identity_rule():
    r = rule_from_table(1, [0, 1])
    assert (r.k, r.shift) == (1, 0)
    assert r.text() == "1:2"


def test_projection_trims_and_records_shift():
    # g(x1,x2,x3) = x2
    table = [0, 0, 1, 1, 0, 0, 1, 1]
    r = rule_from_table(3, table)
    assert r.k == 1 and r.shift == -1
    assert r.same_function(lf.rule_from_table(1, [0, 1]))


def test_tight_rule_unchanged():
    ref = lf.rule_from_anf_text("x2 ^ x1*(x3^1)*x4")
    r = rule_from_table(4, ref.table_array())
    assert r.k == 4 and r.shift == 0 and r.table == ref.table


def test_constant_rejected():
    with pytest.raises(InvalidRuleError):
        rule_from_table(3, [0] * 8)
    with pytest.raises(InvalidRuleError):
        rule_from_table(2, [1] * 4)


def test_length_mismatch_rejected():
    with pytest.raises(InvalidRuleError):
        rule_from_table(3, [0, 1, 1, 0])


def test_serialization_round_trip():
    r = lf.rule_from_anf_text("x2 ^ x1*(x3^1)*x4")
    assert lf.rule_from_text(r.text()).same_function(r)
    assert r.text().startswith("4:")


def test_anf_known_expansion():
    # x2 + x1(x3+1)x4 expands to {x2, x1x3x4, x1x4}
    r = lf.rule_from_anf_text("x2 ^ x1*(x3^1)*x4")
    monos = {tuple(sorted(m)) for m in lf.to_anf(r).monomials}
    assert monos == {(2,), (1, 3, 4), (1, 4)}


def test_anf_constant_zero_table():
    assert table_to_anf_masks(0, 3) == []
    assert anf_masks_to_table([], 3) == 0


def test_degree_examples():
    patt = lf.rule_from_anf_text("x2 ^ (x1^1)*x3*(x4^1)")
    assert lf.degree(patt) == 3
    assert lf.degree(lf.rule_from_anf_text("x1")) == 1


def test_balance():
    assert lf.is_balanced(lf.rule_from_anf_text("x1 ^ x2"))
    assert not lf.is_balanced(lf.rule_from_anf_text("x1*x2"))


def test_reverse_complement_basics():
    r = lf.rule_from_anf_text("x2 ^ x1*(x3^1)*x4")
    assert lf.reverse(lf.reverse(r)).same_function(r)
    assert lf.complement(lf.complement(r)).same_function(r)
    rev = lf.reverse(r)
    assert rev.same_function(lf.rule_from_anf_text("x3 ^ x4*(x2^1)*x1"))


def test_canonicalize_constant_on_orbit():
    r = lf.rule_from_anf_text("x2 ^ x1*(x3^1)*(x4^1)*x5")
    cid = lf.canonicalize(r)
    assert lf.canonicalize(lf.reverse(r)) == cid
    assert lf.canonicalize(lf.complement(r)) == cid
    assert lf.canonicalize(lf.complement(lf.reverse(r))) == cid
    # idempotent on the canonical representative
    assert lf.canonicalize(cid.rule()) == cid


def test_palindromic_rule_orbit_smaller_than_group():
    # x1 + x2 is fixed by reversal, so its orbit has 2 members, not 4
    r = lf.rule_from_anf_text("x1 ^ x2")
    assert len(lf.orbit(r)) == 2
    # x1 is fixed by both reversal and complementation
    assert len(lf.orbit(lf.rule_from_anf_text("x1"))) == 1


def test_lex_key_orders_lexicographically():
    # table [0,1] must precede [1,0]
    assert _lex_key(0b10, 1) < _lex_key(0b01, 1)


def test_degree_balance_invariant_under_group():
    r = lf.rule_from_anf_text("x2 ^ x1*x3*(x4^1)*(x5^1)")
    for m in lf.orbit(r):
        assert lf.degree(m) == lf.degree(r)
        assert lf.is_balanced(m) == lf.is_balanced(r)


@settings(max_examples=200, derandomize=True)
@given(st.integers(min_value=1, max_value=9), st.data())
def test_mobius_round_trip(k, data):
    table = data.draw(st.integers(min_value=0, max_value=(1 << (1 << k)) - 1))
    masks = table_to_anf_masks(table, k)
    assert anf_masks_to_table(masks, k) == table


@settings(max_examples=200, derandomize=True)
@given(st.integers(min_value=1, max_value=8), st.data())
def test_from_anf_to_anf_round_trip(k, data):
    table = data.draw(st.integers(min_value=1, max_value=(1 << (1 << k)) - 1))
    try:
        r = rule_from_table(k, table)
    except InvalidRuleError:
        return  # constant draw
    assert lf.from_anf(lf.to_anf(r)).same_function(r)


@settings(max_examples=200, derandomize=True)
@given(st.integers(min_value=2, max_value=8), st.data())
def test_canonicalize_idempotent_and_invariant(k, data):
    table = data.draw(st.integers(min_value=1, max_value=(1 << (1 << k)) - 2))
    try:
        r = rule_from_table(k, table)
    except InvalidRuleError:
        return
    cid = lf.canonicalize(r)
    assert lf.canonicalize(lf.reverse(r)) == cid
    assert lf.canonicalize(lf.complement(r)) == cid


def test_parse_anf_errors():
    with pytest.raises(lf.LiftforgeError):
        lf.parse_anf("x2 ^ (x1")
    with pytest.raises(lf.LiftforgeError):
        lf.parse_anf("y1 ^ x2")


def test_render_parse_round_trip():
    r = lf.rule_from_anf_text("x2 ^ x1*(x4*(x3^1) ^ (x4^1)*x5*(x2^x3^1))")
    text = lf.render_anf(lf.to_anf(r))
    assert lf.rule_from_anf_text(text).same_function(r)


def test_essential_vars():
    r = lf.rule_from_anf_text("x1 ^ x3")
    assert r.k == 3
    assert essential_vars(r.table, 3) == 0b101
