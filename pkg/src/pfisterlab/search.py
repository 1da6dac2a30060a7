"""Exhaustive bounded search for nontrivial zeros of diagonal forms of degree ell.

Given c_1..c_n in k(t_1..t_r) (k finite), decide whether sum_i c_i x_i^ell = 0
has a solution in polynomials x_i of total degree <= D, not all zero.  After
clearing denominators this is a system of polynomial equations over k in the
coefficients x_{i,beta}, one equation per output monomial.

The search is a depth-first enumeration of all coefficient vectors up to
projective scaling (the first nonzero coefficient is 1), so it is complete.
Pruning is exact: an output coefficient is checked as soon as every product
term contributing to it is resolved, meaning all its factors are assigned or
one of them is assigned zero.  Variables are visited in increasing graded-lex
order of v_i + ell*beta, where v_i is the least exponent of c_i; for forms
whose leading terms separate by value (the situation certificates describe)
the first nonzero block is then refuted immediately.

An optional chart (point b, invertible matrix N) rewrites the problem in
coordinates s = N (t - b).  An affine change of variables preserves the space
of polynomials of degree <= D, so the search stays exhaustive; the chart only
changes visiting order.
"""

from __future__ import annotations

import sys
from collections import Counter
from dataclasses import dataclass, field as dc_field
from itertools import combinations_with_replacement
from math import factorial
from typing import List, Optional, Sequence

from .fields import Element, FiniteField, RationalFunctionField, embedding
from .linalg import inverse
from .poly import Poly, grlex_key, monomials


@dataclass
class SearchResult:
    found: bool
    bound: int
    witness: Optional[List[Element]] = None
    nodes: int = 0
    notes: List[str] = dc_field(default_factory=list)


class _Engine:
    def __init__(self, F: FiniteField, coeffs: Sequence[Poly], ell: int, D: int):
        self.F = F
        r = coeffs[0].nvars
        self.mons = mons = monomials(r, D)
        lows = [min(c.terms, key=grlex_key) for c in coeffs]

        def key(ib):
            i, b = ib
            e = tuple(v + ell * m for v, m in zip(lows[i], mons[b]))
            return (grlex_key(e), i, b)

        order = sorted(((i, b) for i in range(len(coeffs)) for b in range(len(mons))), key=key)
        self.order = order
        index = {ib: k for k, ib in enumerate(order)}
        nv = len(order)

        out_index = {}
        t_out, t_coef, t_fac = [], [], []
        terms_of = [[] for _ in range(nv)]
        p = F.characteristic
        for i, c in enumerate(coeffs):
            for combo in combinations_with_replacement(range(len(mons)), ell):
                counts = Counter(combo)
                mult = factorial(ell)
                for e in counts.values():
                    mult //= factorial(e)
                mult %= p
                if mult == 0:
                    continue
                bsum = [0] * r
                for b in combo:
                    for j, x in enumerate(mons[b]):
                        bsum[j] += x
                factors = tuple((index[(i, b)], e) for b, e in sorted(counts.items()))
                fm = F.from_int(mult)
                for v, cv in c.terms.items():
                    mu = tuple(a + b for a, b in zip(v, bsum))
                    o = out_index.setdefault(mu, len(out_index))
                    tid = len(t_out)
                    t_out.append(o)
                    t_coef.append(F.mul(cv, fm))
                    t_fac.append(factors)
                    for vid, _ in factors:
                        terms_of[vid].append(tid)
        self.t_out, self.t_coef, self.t_fac = t_out, t_coef, t_fac
        self.terms_of = terms_of
        self.nu = [len(f) for f in t_fac]
        self.nz = [0] * len(t_out)
        self.open = [0] * len(out_index)
        for o in t_out:
            self.open[o] += 1
        self.value = [F.zero] * len(out_index)
        self.x = [None] * nv
        self.nodes = 0

    def _product(self, tid):
        F, x = self.F, self.x
        v = self.t_coef[tid]
        for vid, e in self.t_fac[tid]:
            v = F.mul(v, x[vid] if e == 1 else F.pow(x[vid], e))
        return v

    def assign(self, vid, a) -> bool:
        F = self.F
        self.x[vid] = a
        nu, nz, opn, val, t_out = self.nu, self.nz, self.open, self.value, self.t_out
        ok = True
        zero = F.is_zero(a)
        for tid in self.terms_of[vid]:
            was_open = nz[tid] == 0
            nu[tid] -= 1
            if zero:
                nz[tid] += 1
            if was_open and (zero or nu[tid] == 0):
                o = t_out[tid]
                opn[o] -= 1
                if not zero:
                    val[o] = F.add(val[o], self._product(tid))
                if opn[o] == 0 and not F.is_zero(val[o]):
                    ok = False
        return ok

    def unassign(self, vid, a):
        F = self.F
        nu, nz, opn, val, t_out = self.nu, self.nz, self.open, self.value, self.t_out
        zero = F.is_zero(a)
        for tid in self.terms_of[vid]:
            now_open = nz[tid] == 0 and nu[tid] > 0
            closed_here = (nz[tid] == 1 and zero) or (nz[tid] == 0 and nu[tid] == 0)
            if closed_here and not now_open:
                o = t_out[tid]
                opn[o] += 1
                if not zero:
                    val[o] = F.sub(val[o], self._product(tid))
            nu[tid] += 1
            if zero:
                nz[tid] -= 1
        self.x[vid] = None

    def run(self) -> bool:
        F = self.F
        full = list(F.raw_elements())
        first = [F.zero, F.one]
        nv = len(self.order)
        limit = sys.getrecursionlimit()
        if nv + 50 > limit:
            sys.setrecursionlimit(nv + 100)

        def dfs(k, nonzero):
            if k == nv:
                return nonzero
            for a in (full if nonzero else first):
                self.nodes += 1
                if self.assign(k, a) and dfs(k + 1, nonzero or a != F.zero):
                    return True
                self.unassign(k, a)
            return False

        return dfs(0, False)

    def solution(self, gens) -> List[Poly]:
        n = max(i for i, _ in self.order) + 1
        terms = [dict() for _ in range(n)]
        for k, (i, b) in enumerate(self.order):
            terms[i][self.mons[b]] = self.x[k]
        return [Poly(self.F, gens, t) for t in terms]


def _clear_denominators(K: RationalFunctionField, coeffs: Sequence[Element]) -> List[Poly]:
    dens = []
    for c in coeffs:
        d = c.value[1]
        if not d.is_constant() and d not in dens:
            dens.append(d)
    L = Poly.one(K.base, K.vars)
    for d in dens:
        L = L * d
    return [c.value[0] * L.exquo(c.value[1]) for c in coeffs]


def find_zero_polys(F: FiniteField, polys: Sequence[Poly], ell: int, D: int):
    """Low-level entry: polynomial coefficients over F, returns (solution polys or None, nodes)."""
    eng = _Engine(F, polys, ell, D)
    if eng.run():
        return eng.solution(polys[0].gens), eng.nodes
    return None, eng.nodes


def bounded_zero_search(coeffs: Sequence[Element], ell: int, D: int, chart=None) -> SearchResult:
    """Search for a nonzero polynomial vector x, deg <= D, with sum c_i x_i^ell = 0.

    ``coeffs`` live in a finite field or in k(t_1..t_r) with k finite.
    ``chart`` is an optional (l, point, N) triple: l a finite extension of k,
    point raws in l, N an invertible r x r matrix over l.  When l != k and a
    zero is found in the chart, the search is repeated over k without it.
    """
    K = coeffs[0].field
    if isinstance(K, FiniteField):
        polys = [Poly.const(K, (), c.value) for c in coeffs]
        sol, nodes = find_zero_polys(K, polys, ell, 0)
        if sol is None:
            return SearchResult(False, D, None, nodes)
        return SearchResult(True, D, [Element(K, p.constant_coeff()) for p in sol], nodes)
    if not isinstance(K, RationalFunctionField) or not isinstance(K.base, FiniteField):
        raise TypeError("bounded search needs a finite field or k(t_1..t_r) with k finite")
    polys = _clear_denominators(K, coeffs)
    k = K.base
    if chart is None:
        sol, nodes = find_zero_polys(k, polys, ell, D)
        if sol is None:
            return SearchResult(False, D, None, nodes)
        return SearchResult(True, D, [K.from_poly(p) for p in sol], nodes)

    l, point, N = chart
    emb = embedding(k, l)
    gens = K.vars
    r = len(gens)
    M = inverse(l, N)
    lifted = [p.map_coeffs(emb, l) for p in polys]
    images = []
    for i in range(r):
        img = Poly.const(l, gens, point[i])
        for j in range(r):
            img = img + Poly.var(l, gens, j).scale(M[i][j])
        images.append(img)
    in_chart = [p.compose(images) for p in lifted]
    sol, nodes = find_zero_polys(l, in_chart, ell, D)
    if sol is None:
        return SearchResult(False, D, None, nodes, ["chart"])
    back = []
    for j in range(r):
        img = Poly.zero(l, gens)
        for i in range(r):
            img = img + (Poly.var(l, gens, i) - Poly.const(l, gens, point[i])).scale(N[j][i])
        back.append(img)
    xs = [p.compose(back) for p in sol]
    if l == k:
        return SearchResult(True, D, [K.from_poly(p) for p in xs], nodes, ["chart"])
    plain = bounded_zero_search(coeffs, ell, D)
    plain.nodes += nodes
    plain.notes.append("chart zero over extension; repeated over base")
    return plain
