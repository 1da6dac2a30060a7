"""Generators for the sentences used by the toolkit.

All encodings here are choices of this module: the curve templates are
written with ``x^k`` expanded into products, ``2`` never appears (``uv + vu``
stands for ``2uv``), and the quadratic extension by a square root of -1 is
encoded by coordinate pairs.
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, FrozenSet, List, Tuple

from ..curves import DEGREE, TEMPLATES
from ..errors import FoldCeiling
from .ast import (ONE, ZERO, Add, And, Eq, Exists, Forall, Formula, Implies, Mul, Neg, Not, Or, Sub,
                  Term, Var, conj, disj, exists, forall, neq, power)

FOLD_CEILING = 3


def curve_equation(template: str, x: Term, y: Term, a: Term) -> Formula:
    if template not in TEMPLATES:
        raise ValueError(f"unknown template {template!r}")
    rhs = Add(power(x, DEGREE[template]), Mul(a, x))
    if template == "artin-schreier":
        return Eq(Add(Mul(y, y), y), rhs)
    return Eq(Mul(y, y), Add(rhs, ONE))


def _template(fam) -> str:
    return fam if isinstance(fam, str) else fam.template


def gen_Sa_membership(fam, a: str = "a", s: str = "s") -> Formula:
    """s lies in S_a: Ex1 y1 x2 y2 (both points on C_a, x2 != 0, s*x2 = x1)."""
    t = _template(fam)
    A = Var(a)
    x1, y1, x2, y2 = (Var(n) for n in ("x1", "y1", "x2", "y2"))
    body = conj([curve_equation(t, x1, y1, A), curve_equation(t, x2, y2, A), neq(x2, ZERO),
                 Eq(Mul(Var(s), x2), x1)])
    return exists(["x1", "y1", "x2", "y2"], body)


def frobenius_clause(m: int, s: str = "s") -> Formula:
    """s^j = s for some 2 <= j <= m, with powers computed by a chain of witnesses."""
    if m < 2:
        raise ValueError("m must be at least 2")
    S = Var(s)
    if m == 2:
        return Eq(Mul(S, S), S)
    names = [f"p{j}" for j in range(2, m + 1)]
    defs = [Eq(Var("p2"), Mul(S, S))]
    defs += [Eq(Var(names[k]), Mul(Var(names[k - 1]), S)) for k in range(1, len(names))]
    return exists(names, And(conj(defs), disj([Eq(Var(n), S) for n in names])))


def gen_Sa_prime_membership(fam, m: int, a: str = "a", s: str = "s") -> Formula:
    return Or(gen_Sa_membership(fam, a, s), frobenius_clause(m, s))


def _member(node: Formula, term: Term) -> Formula:
    """term lies in S'_a, reusing the shared node over its free variable s."""
    if isinstance(term, Var) and term.name == "s":
        return node
    return Exists("s", And(Eq(Var("s"), term), node))


def gen_constants_formula(fam, m: int, t: str = "t") -> Formula:
    """Aa (S'_a is a field containing a -> t in S'_a), free in t.

    Field condition: a in S'_a, closure under u - v and u*v, and every nonzero
    member has its inverse in S'_a.
    """
    if t in ("a", "s", "u", "v", "w"):
        raise ValueError(f"free variable name {t!r} clashes with a bound variable")
    node = gen_Sa_prime_membership(fam, m)
    u, v, w, a = Var("u"), Var("v"), Var("w"), Var("a")
    closure = forall(["u", "v"], Implies(And(_member(node, u), _member(node, v)),
                                         And(_member(node, Sub(u, v)), _member(node, Mul(u, v)))))
    inverse = Forall("u", Implies(And(_member(node, u), neq(u, ZERO)),
                                  Exists("w", And(Eq(Mul(u, w), ONE), _member(node, w)))))
    field_cond = conj([_member(node, a), closure, inverse])
    return Forall("a", Implies(field_cond, _member(node, Var(t))))


def gen_finite_or_antimordellic_sentence(fam, m: int) -> Formula:
    """Aa As s in S'_a."""
    return forall(["a", "s"], gen_Sa_prime_membership(fam, m))


# -- Pfister sentences ------------------------------------------------------------------------


def _label(S) -> str:
    if not S:
        return "0"
    return "".join(str(j) for j in S) if max(S) < 10 else "_".join(str(j) for j in S)


def _subsets(f: int) -> List[Tuple[int, ...]]:
    return [S for k in range(f + 1) for S in combinations(range(1, f + 1), k)]


def _sum(terms: List[Term]) -> Term:
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out


def _pfister_zero_K(f: int) -> Tuple[Formula, List[str]]:
    """Ec x (coefficient products ∧ x not all zero ∧ sum c_S x_S^2 = 0) over K, slots a1..af."""
    subsets = _subsets(f)
    coeff: Dict[Tuple, Term] = {(): ONE}
    names, defs = [], []
    for S in subsets[1:]:
        if len(S) == 1:
            coeff[S] = Var(f"a{S[0]}")
            continue
        name = f"c{_label(S)}"
        names.append(name)
        defs.append(Eq(Var(name), Mul(coeff[S[:-1]], Var(f"a{S[-1]}"))))
        coeff[S] = Var(name)
    xs = {S: Var(f"x{_label(S)}") for S in subsets}
    names += [x.name for x in xs.values()]
    value = _sum([Mul(coeff[S], Mul(xs[S], xs[S])) if S else Mul(xs[S], xs[S]) for S in subsets])
    nonzero = disj([neq(xs[S], ZERO) for S in subsets])
    return exists(names, conj(defs + [nonzero, Eq(value, ZERO)])), [f"a{j}" for j in range(1, f + 1)]


def _pfister_zero_pairs(f: int) -> Tuple[Formula, List[str]]:
    """Same statement over K[i], each element a pair (real, imaginary); slots (a_j, b_j)."""
    subsets = _subsets(f)
    coeff: Dict[Tuple, Tuple[Term, Term]] = {(): (ONE, ZERO)}
    names, defs = [], []
    for S in subsets[1:]:
        if len(S) == 1:
            coeff[S] = (Var(f"a{S[0]}"), Var(f"b{S[0]}"))
            continue
        (cr, ci), (sr, si) = coeff[S[:-1]], (Var(f"a{S[-1]}"), Var(f"b{S[-1]}"))
        re, im = f"c{_label(S)}", f"d{_label(S)}"
        names += [re, im]
        defs.append(Eq(Var(re), Sub(Mul(cr, sr), Mul(ci, si))))
        defs.append(Eq(Var(im), Add(Mul(cr, si), Mul(ci, sr))))
        coeff[S] = (Var(re), Var(im))
    real_parts, imag_parts, nonzero = [], [], []
    for S in subsets:
        lab = _label(S)
        u, v = Var(f"u{lab}"), Var(f"v{lab}")
        r, s = Var(f"r{lab}"), Var(f"s{lab}")
        names += [u.name, v.name, r.name, s.name]
        defs.append(Eq(r, Sub(Mul(u, u), Mul(v, v))))
        defs.append(Eq(s, Add(Mul(u, v), Mul(v, u))))
        nonzero += [neq(u, ZERO), neq(v, ZERO)]
        cr, ci = coeff[S]
        if not S:
            real_parts.append(r)
            imag_parts.append(s)
        else:
            real_parts.append(Sub(Mul(cr, r), Mul(ci, s)))
            imag_parts.append(Add(Mul(cr, s), Mul(ci, r)))
    core = conj(defs + [disj(nonzero), Eq(_sum(real_parts), ZERO), Eq(_sum(imag_parts), ZERO)])
    return exists(names, core), [n for j in range(1, f + 1) for n in (f"a{j}", f"b{j}")]


def _slots_nonzero(slots: List[str], pairs: bool) -> Formula:
    if not pairs:
        return conj([neq(Var(n), ZERO) for n in slots])
    return conj([Or(neq(Var(slots[k]), ZERO), neq(Var(slots[k + 1]), ZERO))
                 for k in range(0, len(slots), 2)])


def all_pfister_isotropic(f: int, pairs: bool) -> Formula:
    """Every f-fold Pfister form represents 0."""
    rep, slots = (_pfister_zero_pairs if pairs else _pfister_zero_K)(f)
    if f == 0:
        return rep
    return forall(slots, Implies(_slots_nonzero(slots, pairs), rep))


def some_pfister_anisotropic(f: int, pairs: bool) -> Formula:
    """Some f-fold Pfister form does not represent 0."""
    rep, slots = (_pfister_zero_pairs if pairs else _pfister_zero_K)(f)
    if f == 0:
        return Not(rep)
    return exists(slots, And(_slots_nonzero(slots, pairs), Not(rep)))


def sqrt_minus_one_guard() -> Formula:
    w = Var("w")
    return Exists("w", Eq(Add(Mul(w, w), ONE), ZERO))


def gen_trdeg_sentence(e: int, n: int, fold_ceiling: int = FOLD_CEILING) -> Formula:
    """Every (e+n+1)-fold Pfister form over K[i] is isotropic and some (e+n)-fold is not.

    When -1 is already a square in K the pair algebra is split, so the sentence
    branches on that guard and speaks about K itself in that case.
    """
    if e < 0 or n < 0:
        raise ValueError("e and n must be non-negative")
    if e + n + 1 > fold_ceiling:
        raise FoldCeiling(f"fold {e + n + 1} exceeds the ceiling {fold_ceiling}")
    f = e + n

    def phi(pairs):
        return And(all_pfister_isotropic(f + 1, pairs), some_pfister_anisotropic(f, pairs))

    G = sqrt_minus_one_guard()
    return Or(And(G, phi(False)), And(Not(G), phi(True)))
