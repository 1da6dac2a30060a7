"""Sparse multivariate polynomials over any field of the toolkit.

A polynomial stores its coefficients as *raw* field values (whatever the
owning field uses internally: ints for finite fields, ``Fraction`` for Q,
tuples for extensions) keyed by exponent tuples.  Zero coefficients are
never stored.

The leading term is taken in graded-lex order (total degree first, then
lexicographic with variable 0 most significant).  The gcd is the classical
recursive primitive-PRS algorithm, which is exact over any field.
"""

from __future__ import annotations

from itertools import product
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

from .errors import FieldMismatch, ZeroDerivative

Exp = Tuple[int, ...]


def grlex_key(e: Exp):
    return (sum(e), e)


class Poly:
    """Immutable sparse polynomial in the generators ``gens`` over ``field``."""

    __slots__ = ("field", "gens", "terms", "_hash")

    def __init__(self, field, gens: Sequence[str], terms: Optional[Dict[Exp, object]] = None):
        self.field = field
        self.gens = tuple(gens)
        is_zero = field.is_zero
        self.terms = {e: c for e, c in (terms or {}).items() if not is_zero(c)}
        self._hash = None

    # -- construction -------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.gens)

    def _new(self, terms):
        p = Poly.__new__(Poly)
        p.field = self.field
        p.gens = self.gens
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, field, gens, raw) -> "Poly":
        return cls(field, gens, {(0,) * len(gens): raw})

    @classmethod
    def zero(cls, field, gens) -> "Poly":
        return cls(field, gens, {})

    @classmethod
    def one(cls, field, gens) -> "Poly":
        return cls.const(field, gens, field.one)

    @classmethod
    def var(cls, field, gens, i: int) -> "Poly":
        e = [0] * len(gens)
        e[i] = 1
        return cls(field, gens, {tuple(e): field.one})

    def const_like(self, raw) -> "Poly":
        return Poly.const(self.field, self.gens, raw)

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self):
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def leading(self) -> Tuple[Exp, object]:
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def lex_min(self) -> Tuple[Exp, object]:
        e = min(self.terms)
        return e, self.terms[e]

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def variables(self) -> set:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.gens != self.gens or other.field != self.field:
                raise FieldMismatch("polynomials live in different rings")
            return other
        if isinstance(other, int):
            return self.const_like(self.field.from_int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        add, is_zero = self.field.add, self.field.is_zero
        t = dict(self.terms)
        for e, c in other.terms.items():
            if e in t:
                s = add(t[e], c)
                if is_zero(s):
                    del t[e]
                else:
                    t[e] = s
            else:
                t[e] = c
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        neg = self.field.neg
        return self._new({e: neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        add, mul, is_zero = F.add, F.mul, F.is_zero
        t: Dict[Exp, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = mul(c1, c2)
                if e in t:
                    t[e] = add(t[e], c)
                else:
                    t[e] = c
        return self._new({e: c for e, c in t.items() if not is_zero(c)})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.one(self.field, self.gens)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, raw) -> "Poly":
        mul = self.field.mul
        return Poly(self.field, self.gens, {e: mul(c, raw) for e, c in self.terms.items()})

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        _, lc = self.leading()
        return self.scale(self.field.inv(lc))

    def mul_monomial(self, e: Exp, c) -> "Poly":
        mul = self.field.mul
        return self._new({tuple(a + b for a, b in zip(k, e)): mul(v, c) for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.gens == other.gens and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.gens, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution ----------------------------------------

    def derivative(self, i: int) -> "Poly":
        F = self.field
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                d = F.mul(c, F.from_int(e[i]))
                if not F.is_zero(d):
                    k = list(e)
                    k[i] -= 1
                    t[tuple(k)] = d
        return self._new(t)

    def evaluate(self, point: Sequence) -> object:
        """Value at a point given as raw field values (one per generator)."""
        F = self.field
        powers = [{} for _ in point]
        total = F.zero
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    if k not in cache:
                        cache[k] = F.pow(point[i], k)
                    v = F.mul(v, cache[k])
            total = F.add(total, v)
        return total

    def compose(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute ``images[i]`` for generator ``i``; the result lives in
        the ring of the images.  Coefficients must already belong to that
        ring's field."""
        target = images[0]
        power_cache = [dict() for _ in images]
        result = Poly.zero(target.field, target.gens)
        for e, c in self.terms.items():
            term = Poly.const(target.field, target.gens, c)
            for i, k in enumerate(e):
                if k:
                    cache = power_cache[i]
                    if k not in cache:
                        cache[k] = images[i] ** k
                    term = term * cache[k]
            result = result + term
        return result

    def taylor_shift(self, shift: Sequence) -> "Poly":
        """f(t + b) for raw shift values b."""
        F = self.field
        images = [Poly.var(F, self.gens, i) + Poly.const(F, self.gens, b) for i, b in enumerate(shift)]
        return self.compose(images)

    def map_coeffs(self, fn: Callable, field) -> "Poly":
        return Poly(field, self.gens, {e: fn(c) for e, c in self.terms.items()})

    def coeffs_in(self, i: int) -> Dict[int, "Poly"]:
        """View as univariate in generator ``i``: degree -> coefficient poly."""
        out: Dict[int, Dict[Exp, object]] = {}
        for e, c in self.terms.items():
            k = list(e)
            d = k[i]
            k[i] = 0
            out.setdefault(d, {})[tuple(k)] = c
        return {d: self._new(t) for d, t in out.items()}

    def homogeneous_part(self, degree: int) -> "Poly":
        return self._new({e: c for e, c in self.terms.items() if sum(e) == degree})

    # -- division -------------------------------------------------------

    def exquo(self, other: "Poly") -> "Poly":
        """Exact quotient; raises ``ArithmeticError`` if ``other`` does not divide."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        ge, gc = max(other.terms.items(), key=lambda kv: kv[0])
        ginv = F.inv(gc)
        rem = dict(self.terms)
        quo: Dict[Exp, object] = {}
        while rem:
            e = max(rem)
            c = rem[e]
            m = tuple(a - b for a, b in zip(e, ge))
            if min(m) < 0:
                raise ArithmeticError("inexact polynomial division")
            qc = F.mul(c, ginv)
            quo[m] = qc
            for k, v in other.terms.items():
                key = tuple(a + b for a, b in zip(k, m))
                s = F.sub(rem.get(key, F.zero), F.mul(v, qc))
                if F.is_zero(s):
                    rem.pop(key, None)
                else:
                    rem[key] = s
        return self._new(quo)

    def divides(self, other: "Poly") -> bool:
        try:
            other.exquo(self)
        except ArithmeticError:
            return False
        return True

    # -- square roots ----------------------------------------------------

    def sqrt(self) -> Optional["Poly"]:
        """A square root in the polynomial ring, or None."""
        F = self.field
        if not self.terms:
            return self
        if F.characteristic == 2:
            out = {}
            for e, c in self.terms.items():
                if any(k % 2 for k in e):
                    return None
                r = F.sqrt_raw(c)
                if r is None:
                    return None
                out[tuple(k // 2 for k in e)] = r
            return self._new(out)
        e, c = self.leading()
        if any(k % 2 for k in e):
            return None
        rc = F.sqrt_raw(c)
        if rc is None:
            return None
        he = tuple(k // 2 for k in e)
        root = self._new({he: rc})
        two_lc_inv = F.inv(F.add(rc, rc))
        last = he
        rem = self - root * root
        while not rem.is_zero():
            re, rcoef = rem.leading()
            m = tuple(a - b for a, b in zip(re, he))
            if min(m) < 0 or grlex_key(m) >= grlex_key(last):
                return None
            term = self._new({m: F.mul(rcoef, two_lc_inv)})
            rem = rem - (root + root) * term - term * term
            root = root + term
            last = m
        return root

    # -- formatting -------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                g if k == 1 else f"{g}^{k}" for g, k in zip(self.gens, e) if k
            )
            cs = self.field.format(c)
            if not mono:
                parts.append(cs)
                continue
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                if _needs_parens(cs):
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"Poly({self}, gens={self.gens})"


def _needs_parens(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return any(ch in body for ch in "+-/")


# -- gcd machinery ----------------------------------------------------------


def content(f: Poly, i: int) -> Poly:
    """Gcd of the coefficients of ``f`` viewed as univariate in generator i."""
    g = Poly.zero(f.field, f.gens)
    for c in f.coeffs_in(i).values():
        g = poly_gcd(g, c)
        if g.is_constant() and not g.is_zero():
            return g
    return g


def primitive_part(f: Poly, i: int) -> Poly:
    if f.is_zero():
        return f
    return f.exquo(content(f, i))


def prem(a: Poly, b: Poly, i: int) -> Poly:
    """Pseudo-remainder of a by b in generator i."""
    db = b.degree(i)
    cb = b.coeffs_in(i)
    lcb = cb[db]
    r = a
    while not r.is_zero() and r.degree(i) >= db:
        dr = r.degree(i)
        lcr = r.coeffs_in(i)[dr]
        shift = [0] * r.nvars
        shift[i] = dr - db
        r = lcb * r - (lcr * b).mul_monomial(tuple(shift), r.field.one)
    return r


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic (graded-lex) greatest common divisor."""
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_constant() or g.is_constant():
        return Poly.one(f.field, f.gens)
    present = f.variables() | g.variables()
    i = min(present)
    cf, cg = content(f, i), content(g, i)
    c = poly_gcd(cf, cg)
    a, b = f.exquo(cf), g.exquo(cg)
    if a.degree(i) < b.degree(i):
        a, b = b, a
    while not b.is_zero():
        r = prem(a, b, i)
        a, b = b, primitive_part(r, i)
    h = primitive_part(a, i)
    return (c * h).monic()


# -- univariate helpers (resultants, discriminants) ---------------------------


def sylvester_resultant(f: Poly, g: Poly, i: int):
    """Resultant of f and g with respect to generator i.

    The coefficients are themselves polynomials in the other generators; the
    determinant is computed by fraction-free (Bareiss) elimination so the
    result is again such a polynomial.
    """
    m, n = f.degree(i), g.degree(i)
    cf, cg = f.coeffs_in(i), g.coeffs_in(i)
    zero = Poly.zero(f.field, f.gens)
    fc = [cf.get(k, zero) for k in range(m, -1, -1)]
    gc = [cg.get(k, zero) for k in range(n, -1, -1)]
    size = m + n
    if size == 0:
        return Poly.one(f.field, f.gens)
    rows = []
    for r in range(n):
        rows.append([zero] * r + fc + [zero] * (size - r - m - 1))
    for r in range(m):
        rows.append([zero] * r + gc + [zero] * (size - r - n - 1))
    return bareiss_det(rows)


def bareiss_det(rows):
    """Determinant of a square matrix with entries in an integral domain that
    supports exact division (Poly or field Element)."""
    M = [list(r) for r in rows]
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    sign = 1
    prev = None
    for k in range(n - 1):
        if M[k][k].is_zero():
            for j in range(k + 1, n):
                if not M[j][k].is_zero():
                    M[k], M[j] = M[j], M[k]
                    sign = -sign
                    break
            else:
                return M[0][0] * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                M[i][j] = num if prev is None else _exact_div(num, prev)
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return det if sign == 1 else -det


def _exact_div(a, b):
    if isinstance(a, Poly):
        return a.exquo(b)
    return a / b


def discriminant(f: Poly, i: int) -> Poly:
    """(-1)^(n(n-1)/2) Res(f, f') / lc(f) with respect to generator i."""
    n = f.degree(i)
    if n < 1:
        raise ValueError("discriminant needs positive degree")
    df = f.derivative(i)
    if df.is_zero():
        raise ZeroDerivative("derivative vanishes identically")
    res = sylvester_resultant(f, df, i)
    lc = f.coeffs_in(i)[n]
    out = res.exquo(lc)
    if (n * (n - 1) // 2) % 2:
        out = -out
    return out


def is_squarefree(f: Poly, i: int) -> bool:
    """True iff gcd(f, df/dx_i) is constant."""
    return poly_gcd(f, f.derivative(i)).is_constant()


def _gen_index(f: Poly, var) -> int:
    if isinstance(var, int):
        return var
    try:
        return f.gens.index(var)
    except ValueError:
        raise ValueError(f"{var!r} is not a generator of {f.gens}") from None


def _as_element(p: Poly, drop: int):
    """View p (free of generator ``drop``) in the field of its coefficients' remaining generators."""
    from .fields import Element, RationalFunctionField

    rest = [g for k, g in enumerate(p.gens) if k != drop]
    if not rest:
        return Element(p.field, p.constant_coeff())
    terms = {e[:drop] + e[drop + 1:]: c for e, c in p.terms.items()}
    R = RationalFunctionField(p.field, rest)
    return R.from_poly(Poly(p.field, rest, terms))


def poly_discriminant(f: Poly, var=0):
    """Discriminant of f in ``var`` (name or index) as an element of the coefficient field."""
    i = _gen_index(f, var)
    return _as_element(discriminant(f, i), i)


def squarefree_check(f: Poly, var=0) -> bool:
    if f.is_zero():
        raise ValueError("the zero polynomial has no squarefree test")
    return is_squarefree(f, _gen_index(f, var))


def monomials(nvars: int, max_degree: int) -> Iterable[Exp]:
    """All exponent vectors of total degree <= max_degree, graded-lex ascending."""
    out = [e for e in product(range(max_degree + 1), repeat=nvars) if sum(e) <= max_degree]
    out.sort(key=grlex_key)
    return out
