import pytest
import sympy
from hypothesis import given, strategies as st

from pfisterlab.errors import ZeroDerivative
from pfisterlab.fields import QQ, field_make, parse_element
from pfisterlab.poly import (Poly, discriminant, poly_discriminant, poly_gcd, squarefree_check,
                             sylvester_resultant)


def P(text, base="Q", gens="x,a"):
    num, den = parse_element(field_make(f"{base}({gens})"), text).value
    assert den.is_constant()
    return num


def sym(p: Poly):
    return sympy.sympify(str(p).replace("^", "**"))


def test_quintic_discriminant():
    d = poly_discriminant(P("x^5+a*x+1"), "x")
    assert str(d) == "256*a^5+3125"
    K = field_make("Q(a)")
    assert d == parse_element(K, "256*a^5+3125")


def test_quadratic_discriminant():
    d = poly_discriminant(P("x^2+b*x+c", gens="x,b,c"), "x")
    assert d == parse_element(field_make("Q(b,c)"), "b^2-4*c")


def test_cubic_over_q():
    d = poly_discriminant(P("x^3-1", gens="x"), "x")
    assert d == QQ(-27)


def test_zero_derivative_in_char_p():
    with pytest.raises(ZeroDerivative):
        poly_discriminant(P("x^3+a", base="GF(3)"), "x")


def test_squarefree_examples():
    assert squarefree_check(P("256*a^5+3125", gens="a"), "a")
    assert not squarefree_check(P("(a-1)^2", gens="a"), "a")
    with pytest.raises(ValueError):
        squarefree_check(Poly.zero(QQ, ("a",)), "a")


@pytest.mark.parametrize("text", ["x^5+a*x+1", "x^7+a*x+1", "x^4+a*x^2+1", "a*x^3+x+a^2", "x^3+a*x+a"])
def test_discriminant_matches_sympy(text):
    x, a = sympy.symbols("x a")
    ours = discriminant(P(text), 0)
    expected = sympy.discriminant(sympy.sympify(text.replace("^", "**")), x)
    assert sympy.expand(sym(ours) - expected) == 0


def test_septic_discriminant_over_f5_matches_sympy():
    x, a = sympy.symbols("x a")
    ours = discriminant(P("x^7+a*x+1", base="GF(5)"), 0)
    expected = sympy.Poly(sympy.discriminant(x ** 7 + a * x + 1, x), a, modulus=5)
    assert sympy.Poly(sym(ours), a, modulus=5) == expected


def test_resultant_matches_sympy():
    x = sympy.symbols("x")
    f, g = P("x^3+2*x+5", gens="x"), P("x^2-3", gens="x")
    assert sym(Poly.const(QQ, ("x",), sylvester_resultant(f, g, 0).constant_coeff())) == \
        sympy.resultant(x ** 3 + 2 * x + 5, x ** 2 - 3, x)


coeff = st.integers(-3, 3)


@given(st.lists(coeff, min_size=3, max_size=6), st.sampled_from(["Q", "GF(5)", "GF(7)"]))
def test_discriminant_vanishes_iff_not_squarefree(cs, base):
    cs = cs[:-1] + [1]  # monic keeps the leading coefficient a unit
    text = "+".join(f"({c})*x^{k}" for k, c in enumerate(cs))
    f = P(text, base=base, gens="x")
    if f.degree(0) < 1 or f.derivative(0).is_zero():
        return
    d = poly_discriminant(f, "x")
    assert d.is_zero() == (not squarefree_check(f, "x"))


@given(st.lists(coeff, min_size=1, max_size=4), st.lists(coeff, min_size=1, max_size=4),
       st.lists(coeff, min_size=1, max_size=3))
def test_gcd_matches_sympy(a, b, c):
    x = sympy.symbols("x")

    def mk(cs):
        return "+".join(f"({v})*x^{k}" for k, v in enumerate(cs))

    fa, fb, fc = (P(mk(cs), gens="x") for cs in (a, b, c))
    f, g = fa * fc, fb * fc
    if f.is_zero() or g.is_zero():
        return
    ours = poly_gcd(f, g)
    theirs = sympy.gcd(sym(f), sym(g))
    assert sympy.simplify(sym(ours.monic()) - sympy.Poly(theirs, x).monic().as_expr()) == 0


def test_taylor_shift_and_evaluate():
    f = P("x^3+2*x*a+1")
    g = f.taylor_shift([QQ(1).value, QQ(2).value])
    assert g.evaluate([QQ(0).value, QQ(0).value]) == f.evaluate([QQ(1).value, QQ(2).value])
