import itertools

import pytest
from hypothesis import given, strategies as st

from pfisterlab import formula as fm
from pfisterlab.curves import CurveFamily, compute_Sa, compute_Sa_prime, prime_powers, template_for
from pfisterlab.errors import (BudgetExceeded, FoldCeiling, FormulaSyntaxError, InfiniteField,
                               UnboundVariable)
from pfisterlab.fields import QQ, Element, field_make
from pfisterlab.formula.ast import Var, numeral
from pfisterlab.independence import empirical_e


def F(q):
    return field_make(f"GF({q})")


def corpus():
    out = []
    for t in ("quintic", "septic", "artin-schreier"):
        out.append(fm.gen_Sa_membership(t))
        for m in (2, 3, 5):
            out.append(fm.gen_Sa_prime_membership(t, m))
            out.append(fm.gen_finite_or_antimordellic_sentence(t, m))
        out.append(fm.gen_constants_formula(t, 2))
        out.append(fm.gen_constants_formula(t, 4))
    for e, n in [(0, 0), (1, 0), (1, 1), (0, 2), (2, 0)]:
        out.append(fm.gen_trdeg_sentence(e, n))
    return out


# -- syntax -----------------------------------------------------------------------------------


def test_parse_examples():
    phi = fm.parse("Ax.Ey.(y+x=0)")
    assert isinstance(phi, fm.Forall) and fm.is_sentence(phi)
    with pytest.raises(FormulaSyntaxError) as err:
        fm.parse("(x+")
    assert err.value.position == 3
    assert fm.parse("x != y") == fm.Not(fm.Eq(Var("x"), Var("y")))
    assert fm.parse("x^3 = 2") == fm.Eq(fm.Mul(fm.Mul(Var("x"), Var("x")), Var("x")), numeral(2))
    assert fm.parse("a -> b=c -> d=e".replace("a ", "a=a ")) == fm.Implies(
        fm.parse("a=a"), fm.Implies(fm.parse("b=c"), fm.parse("d=e")))
    assert fm.parse("InSub(x+1)") == fm.InSub(fm.Add(Var("x"), fm.Const(1)))


@pytest.mark.parametrize("bad", ["", "x", "x = ", "Ex x=0", "E.x=0", "x=0 &", "(x=0", "x=0)", "x^0=1", "x # y"])
def test_parse_errors(bad):
    with pytest.raises(FormulaSyntaxError):
        fm.parse(bad)


def test_round_trip_generated_corpus():
    for phi in corpus():
        text = fm.pretty_print(phi)
        back = fm.parse(text)
        assert back == phi
        assert fm.canonical(fm.parse(fm.pretty_print(fm.canonical(phi)).replace("_", "v"))) == fm.canonical(phi)
        assert fm.from_json(fm.to_json(phi)) == phi


_names = st.sampled_from(["x", "y", "z"])


def _terms():
    leaf = st.one_of(_names.map(Var), st.sampled_from([fm.Const(0), fm.Const(1)]))
    return st.recursive(leaf, lambda t: st.one_of(
        st.builds(fm.Add, t, t), st.builds(fm.Sub, t, t), st.builds(fm.Mul, t, t), st.builds(fm.Neg, t)),
        max_leaves=6)


def _formulas():
    atom = st.one_of(st.builds(fm.Eq, _terms(), _terms()), st.builds(fm.InSub, _terms()))
    return st.recursive(atom, lambda f: st.one_of(
        st.builds(fm.Not, f), st.builds(fm.And, f, f), st.builds(fm.Or, f, f), st.builds(fm.Implies, f, f),
        st.builds(fm.Exists, _names, f), st.builds(fm.Forall, _names, f)), max_leaves=6)


@given(_formulas())
def test_round_trip_random(phi):
    assert fm.parse(fm.pretty_print(phi)) == phi


@given(_formulas(), st.dictionaries(_names, st.integers(0, 4), min_size=3))
def test_printing_preserves_meaning(phi, env):
    G = F(5)
    assert fm.evaluate(fm.parse(fm.pretty_print(phi)), G, env) == fm.evaluate(phi, G, env)
    assert fm.evaluate(fm.canonical(phi), G, env) == fm.evaluate(phi, G, env)


def test_structure_counts():
    phi = fm.gen_Sa_membership("quintic")
    assert fm.quantifier_depth(phi) == 4 and fm.free_vars(phi) == {"a", "s"}
    base = fm.size(fm.gen_Sa_prime_membership("quintic", 2))
    step = fm.size(fm.gen_Sa_prime_membership("quintic", 4)) - fm.size(fm.gen_Sa_prime_membership("quintic", 3))
    for m in range(4, 9):
        assert fm.size(fm.gen_Sa_prime_membership("quintic", m + 1)) - fm.size(fm.gen_Sa_prime_membership("quintic", m)) == step
    assert fm.gen_Sa_prime_membership("quintic", 2).right == fm.parse("s*s=s")
    assert base > fm.size(phi)
    foa = fm.gen_finite_or_antimordellic_sentence("quintic", 3)
    assert fm.is_sentence(foa) and isinstance(foa, fm.Forall) and isinstance(foa.body, fm.Forall)
    assert (foa.var, foa.body.var) == ("a", "s")


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_constants_quantifier_count(m):
    phi = fm.gen_constants_formula("quintic", m)
    k = 4 if m == 2 else 4 + (m - 1)
    assert fm.quantifier_count(phi) == 8 * (k + 1) + 5
    assert fm.free_vars(phi) == {"t"}


def test_trdeg_shape():
    phi = fm.gen_trdeg_sentence(1, 0)
    assert fm.is_sentence(phi)
    assert "1+1" not in fm.pretty_print(phi)
    with pytest.raises(FoldCeiling):
        fm.gen_trdeg_sentence(2, 1)
    assert fm.is_sentence(fm.gen_trdeg_sentence(3, 1, fold_ceiling=5))


# -- evaluation ----------------------------------------------------------------------------------


def test_evaluate_examples():
    assert fm.evaluate(fm.parse("Ax.Ey.y+x=0"), F(5))
    assert fm.evaluate(fm.parse("Ex.x*x=-1"), F(5))
    assert not fm.evaluate(fm.parse("Ex.x*x=-1"), F(7))
    assert fm.evaluate(fm.parse("Ax.Ey.(y*y=x | y*y=-x)"), F(7))
    assert not fm.evaluate(fm.parse("Ax.Ey.(y*y=x | y*y=-x)"), F(5))
    assert fm.evaluate(fm.parse("x*y=1"), F(7), {"x": 3, "y": 5})


def test_evaluate_errors():
    with pytest.raises(UnboundVariable):
        fm.evaluate(fm.parse("x=0"), F(5))
    with pytest.raises(InfiniteField):
        fm.evaluate(fm.parse("Ex.x=0"), QQ)
    phi = fm.parse("Ex.Ey.Ez.Ew.x*y*z*w=1+1")
    with pytest.raises(BudgetExceeded):
        fm.evaluate(phi, F(31), budget=1000)


def test_subfield_predicate():
    G = F(9)
    assert fm.evaluate(fm.parse("Ax.(InSub(x) -> x*x*x=x)"), G)
    assert not fm.evaluate(fm.parse("Ax.InSub(x)"), G)
    assert fm.evaluate(fm.parse("Ax.InSub(x)"), G, subfield=2)
    assert fm.evaluate(fm.parse("Ax.(InSub(x) <-> x=0)".replace("<->", "->")), G, subfield=[0])


@pytest.mark.parametrize("q", [q for q in prime_powers(2, 13)])
def test_Sa_formula_matches_compute_Sa(q):
    G = F(q)
    phi = fm.gen_Sa_membership(template_for(G.characteristic))
    ev = fm.Evaluator(G)
    for a in G.raw_elements():
        S = {e.value for e in compute_Sa(CurveFamily.auto(G, Element(G, a)), G)}
        for s in G.raw_elements():
            assert ev.evaluate(phi, {"a": Element(G, a), "s": Element(G, s)}) == (s in S)


@pytest.mark.parametrize("q,m", [(7, 2), (7, 4), (9, 3), (11, 6), (13, 4), (8, 3), (25, 5)])
def test_Sa_prime_formula_matches(q, m):
    G = F(q)
    phi = fm.gen_Sa_prime_membership(template_for(G.characteristic), m)
    ev = fm.Evaluator(G)
    for a in list(G.raw_elements())[:5]:
        S = {e.value for e in compute_Sa_prime(CurveFamily.auto(G, Element(G, a)), G, m)}
        for s in G.raw_elements():
            assert ev.evaluate(phi, {"a": Element(G, a), "s": Element(G, s)}) == (s in S)


def _e_of(q):
    G = F(q)
    if G.sqrt_raw(G.from_int(-1)) is None:
        G = F(q * q)
    return empirical_e(G, 3)


@pytest.mark.parametrize("q", [3, 5, 9])
def test_trdeg_matches_pfister_sweep(q):
    e = _e_of(q)
    for e_, n in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)]:
        assert fm.evaluate(fm.gen_trdeg_sentence(e_, n), F(q)) == (e_ + n == e)


def test_estimate_bounds_work():
    cases = [(fm.gen_trdeg_sentence(1, 0), q) for q in (3, 5, 9)]
    cases += [(fm.gen_finite_or_antimordellic_sentence(template_for(F(q).characteristic), 2), q)
              for q in (7, 11, 16, 19)]
    cases += [(fm.Forall("t", fm.gen_constants_formula("quintic", 2)), 19)]
    for phi, q in cases:
        ev = fm.Evaluator(F(q))
        ev.evaluate(phi)
        assert ev.work <= ev.estimate(phi)


def test_estimate_monotone_in_field_size():
    phi = fm.gen_finite_or_antimordellic_sentence("quintic", 3)
    ests = [fm.estimate_cost(phi, F(q)) for q in (3, 7, 11, 13, 19, 23)]
    assert ests == sorted(ests)
    trd = fm.gen_trdeg_sentence(1, 0)
    for qs in [(3, 7, 11), (5, 9, 13)]:  # same branch of the square-root-of-minus-one guard
        ests = [fm.estimate_cost(trd, F(q)) for q in qs]
        assert ests == sorted(ests)


@pytest.mark.parametrize("q", [19, 23])
def test_constants_formula_defines_the_field(q):
    G = F(q)
    phi = fm.gen_constants_formula(template_for(G.characteristic), 2)
    ev = fm.Evaluator(G)
    assert all(ev.evaluate(phi, {"t": Element(G, t)}) for t in G.raw_elements())


@pytest.mark.parametrize("q", [19, 23, 29, 43, 47])
def test_finite_or_antimordellic_against_census(q):
    from pfisterlab.curves import census_q
    G = F(q)
    t = template_for(G.characteristic)
    covered = all(r["min_m"] <= 2 for r in census_q(t, q))
    assert fm.evaluate(fm.gen_finite_or_antimordellic_sentence(t, 2), G) == covered
    assert fm.evaluate(fm.gen_finite_or_antimordellic_sentence(t, 17), G)


def test_deterministic_work():
    phi = fm.gen_finite_or_antimordellic_sentence("quintic", 2)
    a, b = fm.Evaluator(F(19)), fm.Evaluator(F(19))
    assert a.evaluate(phi) == b.evaluate(phi) and a.work == b.work
