"""Generalized Pfister forms of degree ell and C_i-style degree checks.

q = sum over multi-indices i in [0, ell)^r of s^i X_i^ell, with the variables
ordered row-major (i_1 slowest).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from math import gcd
from typing import List, Optional, Sequence, Tuple

from .errors import BadGenerators, CharDivides, DimensionMismatch, InternalDisagreement
from .fields import Element, Field, FiniteField, RationalFunctionField
from .poly import Poly
from .search import SearchResult, bounded_zero_search
from .valuations import Center, lex_val, vals_distinct_mod


@dataclass(frozen=True)
class GenForm:
    field: Field
    ell: int
    gens: Tuple[Element, ...]

    @classmethod
    def of(cls, field: Field, ell: int, gens) -> "GenForm":
        if ell < 2:
            raise ValueError("degree must be at least 2")
        return cls(field, ell, tuple(field.convert(s) for s in gens))

    @property
    def r(self) -> int:
        return len(self.gens)

    @property
    def nvars(self) -> int:
        return self.ell ** self.r

    def indices(self) -> List[Tuple[int, ...]]:
        return list(product(range(self.ell), repeat=self.r))

    def coefficients(self) -> List[Element]:
        one = self.field(1)
        out = []
        for idx in self.indices():
            c = one
            for s, k in zip(self.gens, idx):
                if k:
                    c = c * s ** k
            out.append(c)
        return out

    def to_json(self):
        return {"ell": self.ell, "generators": [str(s) for s in self.gens]}


def genform_eval(g: GenForm, x: Sequence) -> Element:
    if len(x) != g.nvars:
        raise DimensionMismatch(f"form has {g.nvars} variables, vector has length {len(x)}")
    total = g.field(0)
    for c, xi in zip(g.coefficients(), x):
        total = total + c * g.field.convert(xi) ** g.ell
    return total


@dataclass
class GenFormValidation:
    valid: bool
    values: List[Tuple[int, ...]] = dc_field(default_factory=list)
    permutation: Tuple[int, ...] = ()

    def __bool__(self):
        return self.valid


def _check_coprime(ell: int, p: int):
    if p and ell % p == 0:
        raise CharDivides(f"degree {ell} is divisible by the characteristic {p}")


def match_shifted_coordinates(gens: Sequence[Element], c: Center) -> Tuple[int, ...]:
    """Variable index sigma(j) with gens[j] = t_sigma(j) - b_sigma(j), or BadGenerators."""
    L = c.L
    sigma = []
    for s in gens:
        lifted = c.lift(s)
        hit = None
        for i in range(L.nvars):
            target = L.gen(i) - Element(L, L.convert(Element(c.l, c.point[i])).value)
            if lifted == target:
                hit = i
                break
        if hit is None or hit in sigma:
            raise BadGenerators(f"{s} is not a shifted coordinate at the center")
        sigma.append(hit)
    return tuple(sigma)


def genform_certificate(g: GenForm, c: Center) -> GenFormValidation:
    """Valid iff the coefficient valuations are pairwise distinct mod ell."""
    _check_coprime(g.ell, g.field.characteristic)
    sigma = match_shifted_coordinates(g.gens, c)
    values = [lex_val(coef, c) for coef in g.coefficients()]
    return GenFormValidation(vals_distinct_mod(values, g.ell), values, sigma)


def genform_bounded_search(g: GenForm, D: int, chart=None) -> SearchResult:
    if g.r == 0:
        return bounded_zero_search([g.field(1)], g.ell, D)
    return bounded_zero_search(g.coefficients(), g.ell, D, chart=chart)


# -- C_i degree hypothesis ---------------------------------------------------------


@dataclass
class CIReport:
    holds: bool
    n: int
    degree_sum: int
    coprime: bool
    zero: Optional[Tuple[Element, ...]] = None
    searched: bool = False


def ci_degree_check(forms: Sequence, i: int, p: int, n: Optional[int] = None) -> CIReport:
    """Check n > sum d^i with every d prime to p.

    ``forms`` are homogeneous :class:`Poly` objects sharing their variables, or
    bare degrees (then ``n`` must be given).  Over a finite field with i == 1
    and the hypothesis satisfied, a nontrivial common zero is searched for
    exhaustively and must exist.
    """
    polys = [f for f in forms if isinstance(f, Poly)]
    degrees = [f.total_degree() if isinstance(f, Poly) else int(f) for f in forms]
    for f in polys:
        if not f.is_homogeneous():
            raise ValueError("forms must be homogeneous")
    if n is None:
        if not polys:
            raise ValueError("variable count needed")
        n = polys[0].nvars
    s = sum(d ** i for d in degrees)
    coprime = all(gcd(p, d) == 1 for d in degrees) if p else True
    holds = n > s and coprime
    report = CIReport(holds, n, s, coprime)
    if holds and i == 1 and polys and isinstance(polys[0].field, FiniteField):
        report.searched = True
        z = common_zero(polys)
        if z is None:
            raise InternalDisagreement("Chevalley-Warning hypothesis holds but no common zero exists")
        report.zero = z
    return report


def common_zero(polys: Sequence[Poly]) -> Optional[Tuple[Element, ...]]:
    """First projective common zero (leading coordinate 1), exhaustive."""
    F = polys[0].field
    n = polys[0].nvars
    elems = list(F.raw_elements())
    for lead in range(n):
        for rest in product(elems, repeat=n - lead - 1):
            pt = (F.zero,) * lead + (F.one,) + rest
            if all(F.is_zero(f.evaluate(pt)) for f in polys):
                return tuple(Element(F, x) for x in pt)
    return None
