import pytest
import sympy
from hypothesis import assume, given, strategies as st

from pfisterlab.errors import BadCenter, NotAUnit, ZeroInput
from pfisterlab.fields import field_make, parse_element
from pfisterlab.valuations import Center, lex_val, residue, vals_distinct_mod

K = field_make("GF(5)(t1,t2)")
C = Center.make(K, [2, 3])


def el(text, field=K):
    return parse_element(field, text)


def test_monomial_value():
    assert lex_val(el("(t1-2)^2*(t2-3)^3"), C) == (2, 3)


def test_sum_takes_lex_min():
    assert lex_val(el("(t1-2)+(t2-3)"), C) == (0, 1)


def test_inverse_value():
    assert lex_val(el("1/(t1-2)"), C) == (-1, 0)


def test_zero_has_no_value():
    with pytest.raises(ZeroInput):
        lex_val(K(0), C)


def test_residue_examples():
    assert residue(el("(1+(t1-2))/(1-(t2-3))"), C) == field_make("GF(5)")(1)
    with pytest.raises(NotAUnit):
        residue(el("t1-2"), C)


def test_residue_equals_substitution_when_regular():
    F5 = field_make("GF(5)")
    f = el("(t1^2+t2+1)/(t1*t2+1)")
    assert residue(f, C) == F5((4 + 3 + 1) * pow(2 * 3 + 1, -1, 5))


def test_vals_distinct_mod_examples():
    assert vals_distinct_mod([(0, 0), (1, 0), (2, 0)], 3)
    assert not vals_distinct_mod([(0, 0), (3, 0)], 3)
    assert vals_distinct_mod([(0, 1), (1, 0)], 2)


def test_center_over_extension():
    F9 = field_make("GF(9)")
    K3 = field_make("GF(3)(t)")
    c = Center.make(K3, [parse_element(F9, "u")], F9)
    # t^2+1 vanishes to first order at u
    assert lex_val(el("t^2+1", K3), c) == (1,)
    with pytest.raises(BadCenter):
        Center.make(K3, [F9(1)], F9)  # 1 does not generate GF(9)


polys = st.sampled_from(["t1-2", "t2-3", "t1+t2", "t1*t2+1", "(t1-2)^2+(t2-3)", "t2^2-4",
                         "(t1-2)*(t2-3)+(t1-2)^3", "t1^2+t2^2+3", "1/(t1-2)", "(t2-3)/(t1+1)", "4"])


@given(polys, polys)
def test_valuation_multiplicative(a, b):
    f, g = el(a), el(b)
    assert lex_val(f * g, C) == tuple(x + y for x, y in zip(lex_val(f, C), lex_val(g, C)))


@given(polys, polys)
def test_ultrametric(a, b):
    f, g = el(a), el(b)
    assume(not (f + g).is_zero())
    vf, vg, vs = lex_val(f, C), lex_val(g, C), lex_val(f + g, C)
    assert vs >= min(vf, vg)
    if vf != vg:
        assert vs == min(vf, vg)


units = st.sampled_from(["1+(t1-2)", "t1*t2+1", "t1+t2+1", "(t2+1)/(t1+1)", "2", "t1^2+t2^2+3",
                         "(t1-2)+(t2-3)+1"])


@given(units, units)
def test_residue_is_multiplicative_and_additive(a, b):
    f, g = el(a), el(b)
    assert residue(f * g, C) == residue(f, C) * residue(g, C)
    s = f + g
    if lex_val(s, C) == (0, 0):
        assert residue(s, C) == residue(f, C) + residue(g, C)


@given(st.lists(st.integers(0, 4), min_size=1, max_size=6), st.integers(0, 4))
def test_univariate_value_is_order_of_vanishing(cs, b):
    K1 = field_make("GF(5)(t)")
    text = "+".join(f"{c}*t^{k}" for k, c in enumerate(cs))
    f = el(text, K1)
    assume(not f.is_zero())
    t = sympy.symbols("t")
    p = sympy.Poly(sympy.sympify(text.replace("^", "**")), t, modulus=5)
    order = 0
    while p.eval(b) % 5 == 0:
        p = sympy.Poly(sympy.div(p, sympy.Poly(t - b, t, modulus=5))[0], t, modulus=5)
        order += 1
    assert lex_val(f, Center.make(K1, [b])) == (order,)
