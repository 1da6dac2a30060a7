"""Lexicographic Z^r valuations on k(t_1..t_r) centred at a point b.

The valuation of a polynomial is the lex-least exponent vector of its
expansion in the shifted variables t_i - b_i, coordinate 1 most significant
(plain Python tuple order).  Points with coordinates in a finite extension l
of k are handled by coercing into l(t_1..t_r).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Sequence, Tuple

from .errors import BadCenter, NotAUnit, ZeroInput
from .fields import (Element, Field, FiniteField, RationalFunctionField, coerce_rf,
                     extend_scalars)
from .poly import Poly

LexValue = Tuple[int, ...]


@dataclass(frozen=True)
class Center:
    """A point b of affine r-space over the residue field l."""

    K: RationalFunctionField
    point: Tuple  # raw values in l
    l: Field

    @classmethod
    def make(cls, K: RationalFunctionField, point: Sequence, l: Field = None) -> "Center":
        l = K.base if l is None else l
        raws = tuple(l.convert(x).value if isinstance(x, (Element, str, int)) else x for x in point)
        if len(raws) != K.nvars:
            raise BadCenter(f"center needs {K.nvars} coordinates, got {len(raws)}")
        c = cls(K, raws, l)
        c.check_generates()
        return c

    @property
    def L(self) -> RationalFunctionField:
        return extend_scalars(self.K, self.l)

    def check_generates(self):
        """l must be generated over k by the coordinates of b."""
        k, l = self.K.base, self.l
        if l == k:
            return
        if not (isinstance(k, FiniteField) and isinstance(l, FiniteField)):
            raise BadCenter("residue extensions are only supported for finite base fields")
        if l.p != k.p or l.n % k.n:
            raise BadCenter(f"{l.descriptor} is not an extension of {k.descriptor}")
        deg = 1
        for b in self.point:
            deg = lcm(deg, l.frobenius_degree(b, k.q))
        if deg != l.n // k.n:
            raise BadCenter(f"point generates a degree-{deg} extension, not {l.descriptor}")

    def lift(self, f: Element) -> Element:
        """Image of f in l(t_1..t_r)."""
        return coerce_rf(f, self.L) if f.field != self.L else f

    def shifted(self, f: Element) -> Tuple[Poly, Poly]:
        """Numerator and denominator rewritten in the variables t_i - b_i."""
        n, d = self.lift(f).value
        return n.taylor_shift(self.point), d.taylor_shift(self.point)

    def to_json(self):
        return {"field": self.K.descriptor, "residue_field": self.l.descriptor,
                "point": [self.l.format(b) for b in self.point]}


def lex_val(f: Element, c: Center) -> LexValue:
    if f.is_zero():
        raise ZeroInput("valuation of zero")
    n, d = c.shifted(f)
    en, _ = n.lex_min()
    ed, _ = d.lex_min()
    return tuple(a - b for a, b in zip(en, ed))


def residue(f: Element, c: Center) -> Element:
    """Image of a unit in the residue field l."""
    if f.is_zero():
        return Element(c.l, c.l.zero)
    n, d = c.shifted(f)
    en, cn = n.lex_min()
    ed, cd = d.lex_min()
    if en != ed:
        raise NotAUnit(f"valuation {tuple(a - b for a, b in zip(en, ed))} is not zero")
    l = c.l
    return Element(l, l.mul(cn, l.inv(cd)))


def vals_distinct_mod(values: Sequence[LexValue], ell: int) -> bool:
    seen = set()
    for v in values:
        key = tuple(x % ell for x in v)
        if key in seen:
            return False
        seen.add(key)
    return True


def first_order_coeffs(f: Element, c: Center):
    """Coefficients of (t_i - b_i) in the shifted expansion of f - f(b).

    Requires f regular at b; the i-th entry is the residue of df/dt_i.
    """
    L = c.L
    g = c.lift(f)
    out = []
    for i in range(L.nvars):
        out.append(L.evaluate(L.derivative(g.value, i), c.point))
    return out


def is_regular_at(f: Element, c: Center) -> bool:
    """f has no pole at b (its reduced denominator does not vanish there)."""
    d = c.lift(f).value[1]
    return not c.l.is_zero(d.evaluate(c.point))
