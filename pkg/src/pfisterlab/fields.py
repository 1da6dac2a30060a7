"""Exact arithmetic for the concrete fields the toolkit supports.

Field kinds:

* ``FiniteField(p, n)`` -- GF(p^n) as F_p[u]/(modulus); ``n == 1`` is the
  prime field.  Raw values are ints 0..q-1 encoding the coordinate vector
  c_0 + c_1 p + ... + c_{n-1} p^{n-1} of c_0 + c_1 u + ... .
* ``RationalField()`` -- Q, raw values are ``fractions.Fraction``.
* ``QuadraticExtension(base, d)`` -- base[sqrt(d)], raw values (x, y) for
  x + y sqrt(d).
* ``RationalFunctionField(base, vars)`` -- base(t_1, ..., t_r), raw values
  are reduced pairs (numerator, denominator) of :class:`Poly` with the
  denominator monic in graded-lex order.

Every field exposes the same raw-level API (``add``, ``mul``, ``inv``, ...)
used by the hot loops, and wraps raw values in :class:`Element` for the
public API.

Descriptor grammar (whitespace ignored)::

    field   := base suffix*
    base    := "Q" | "GF(" size ["," modulus] ")"
    size    := INT | INT "^" INT          -- a prime power
    modulus := polynomial in u over F_p   -- monic irreducible of degree n
    suffix  := "(" NAME ("," NAME)* ")"   -- rational function field
             | "[sqrt(" element ")]"      -- quadratic extension
    "Q(i)" is read as Q[sqrt(-1)].
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Tuple

from .errors import (DescriptorError, FieldMismatch, InfiniteField, NotPrime,
                     ReducibleModulus, SquareAdjunction, UnsupportedField)
from .poly import Poly, poly_gcd

TABLE_LIMIT = 1 << 20
ADD_TABLE_LIMIT = 729


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    f = 3
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> Tuple[int, int]:
    """(p, n) with q = p^n, or NotPrime."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            n = 0
            while q % p == 0:
                q //= p
                n += 1
            if q != 1 or not is_prime(p):
                raise NotPrime(f"{p ** n * q} is not a prime power")
            return p, n
    raise NotPrime(str(q))


def prime_factors(n: int):
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- dense univariate helpers over F_p (lists, low degree first) ---------------


def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = _ptrim(list(a))
    inv = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _ptrim(a)
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, e, m, p):
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        e >>= 1
        if e:
            base = _pmod(_pmul(base, base, p), m, p)
    return result


def is_irreducible_fp(coeffs, p: int) -> bool:
    """Ben-Or irreducibility test for a polynomial over F_p (low degree first)."""
    f = _ptrim(list(coeffs))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(n // 2):
        xp = _ppowmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(f, _ptrim(diff), p)
        if len(g) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def canonical_modulus(p: int, n: int) -> Tuple[int, ...]:
    """Lexicographically least monic irreducible of degree n over F_p.

    Candidates u^n + c_{n-1} u^{n-1} + ... + c_0 are ordered by the integer
    sum c_i p^i, i.e. lexicographically with c_{n-1} most significant.
    """
    for k in range(p ** n):
        c = [(k // p ** i) % p for i in range(n)] + [1]
        if is_irreducible_fp(c, p):
            return tuple(c)
    raise ReducibleModulus(f"no irreducible polynomial of degree {n} over F_{p}")


# -- element wrapper ---------------------------------------------------------------


class Element:
    """Immutable field element: a raw canonical value plus its owning field."""

    __slots__ = ("field", "value")

    def __init__(self, field: "Field", value):
        self.field = field
        self.value = value

    def _other(self, other):
        if isinstance(other, Element):
            if other.field is self.field or other.field == self.field:
                return other.value
            return self.field.convert(other).value
        if isinstance(other, (int, Fraction)):
            return self.field.convert(other).value
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Element(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Element(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Element(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Element(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Element(self.field, self.field.mul(self.value, self.field.inv(o)))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Element(self.field, self.field.mul(o, self.field.inv(self.value)))

    def __neg__(self):
        return Element(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        return Element(self.field, self.field.pow(self.value, k))

    def __eq__(self, other):
        o = self._other(other) if not isinstance(other, Element) or other.field == self.field else NotImplemented
        if o is NotImplemented:
            return False
        return self.value == o

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return not self.field.is_zero(self.value)

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def inverse(self) -> "Element":
        return Element(self.field, self.field.inv(self.value))

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"<{self.field.descriptor}: {self}>"


# -- fields ------------------------------------------------------------------------


class Field:
    """Common interface.  Subclasses implement the raw-value operations."""

    characteristic: int
    order: Optional[int] = None
    kind: str = "Field"

    # raw API ------------------------------------------------------------
    zero = None
    one = None

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def from_int(self, k: int):
        raise NotImplementedError

    def pow(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        result = self.one
        while k:
            if k & 1:
                result = self.mul(result, a)
            k >>= 1
            if k:
                a = self.mul(a, a)
        return result

    def sqrt_raw(self, a):
        """A square root of ``a`` (canonical choice) or None."""
        raise UnsupportedField(f"square roots not implemented over {self.descriptor}")

    def format(self, a) -> str:
        raise NotImplementedError

    def raw_elements(self) -> Iterator:
        raise InfiniteField(f"{self.descriptor} is infinite")

    # element API ---------------------------------------------------------
    def __call__(self, x) -> Element:
        return self.convert(x)

    def convert(self, x) -> Element:
        if isinstance(x, Element):
            if x.field == self:
                return x
            raise FieldMismatch(f"cannot coerce {x!r} into {self.descriptor}")
        if isinstance(x, int):
            return Element(self, self.from_int(x))
        if isinstance(x, str):
            return parse_element(self, x)
        raise FieldMismatch(f"cannot coerce {x!r} into {self.descriptor}")

    def elem(self, raw) -> Element:
        return Element(self, raw)

    def lookup(self, name: str) -> Optional[Element]:
        return None

    def enumerate(self) -> Iterator[Element]:
        for r in self.raw_elements():
            yield Element(self, r)

    @property
    def descriptor(self) -> str:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __repr__(self):
        return f"Field({self.descriptor})"

    def __str__(self):
        return self.descriptor

    @property
    def is_finite(self) -> bool:
        return self.order is not None


class FiniteField(Field):
    """GF(p^n) with raw ints as coordinate vectors in base p."""

    def __new__(cls, p: int, n: int = 1, modulus: Optional[Sequence[int]] = None):
        key = (p, n, tuple(modulus) if modulus is not None else None)
        return _finite_field(cls, *key)

    def _init(self, p, n, modulus):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if n < 1:
            raise DescriptorError("extension degree must be positive")
        self.p, self.n, self.q = p, n, p ** n
        self.characteristic = p
        self.order = self.q
        self.kind = "PrimeField" if n == 1 else "FiniteField"
        if n == 1:
            self.modulus = (0, 1)
        else:
            if modulus is None:
                modulus = canonical_modulus(p, n)
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise ReducibleModulus("modulus must be monic of degree n")
            if not is_irreducible_fp(list(modulus), p):
                raise ReducibleModulus(f"modulus {modulus} is reducible over F_{p}")
            self.modulus = modulus
        self.zero, self.one = 0, 1
        self._exp = self._log = None
        self._addt = self._negt = None
        if n > 1:
            self._build_tables()
            if p != 2 and self.q <= ADD_TABLE_LIMIT:
                self._addt = [[self._add_digits(a, b) for b in range(self.q)] for a in range(self.q)]
            if p != 2:
                self._negt = [self._neg_digits(a) for a in range(self.q)] if self.q <= TABLE_LIMIT else None

    # digit-level helpers
    def digits(self, a: int):
        p = self.p
        return [(a // p ** i) % p for i in range(self.n)]

    def from_digits(self, ds) -> int:
        p = self.p
        return sum((d % p) * p ** i for i, d in enumerate(ds))

    def _add_digits(self, a, b):
        p, out, base = self.p, 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * base
            a //= p
            b //= p
            base *= p
        return out

    def _neg_digits(self, a):
        p, out, base = self.p, 0, 1
        while a:
            out += ((-(a % p)) % p) * base
            a //= p
            base *= p
        return out

    def _slow_mul(self, a, b):
        prod = _pmul(self.digits(a), self.digits(b), self.p)
        return self.from_digits(_pmod(prod, list(self.modulus), self.p))

    def _build_tables(self):
        q = self.q
        if q > TABLE_LIMIT:
            raise UnsupportedField(f"GF({q}) is too large for table arithmetic")
        factors = prime_factors(q - 1)
        mul = self._slow_mul if self.n > 1 else (lambda a, b: a * b % self.p)

        def power(a, k):
            r = 1
            while k:
                if k & 1:
                    r = mul(r, a)
                k >>= 1
                a = mul(a, a)
            return r

        for g in range(1, q):
            if all(power(g, (q - 1) // f) != 1 for f in factors) or q == 2:
                break
        exp = [0] * (q - 1)
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = mul(x, g)
        self.generator = g
        self._exp, self._log = exp, log

    def _ensure_tables(self):
        if self._exp is None:
            self._build_tables()

    # raw API
    def add(self, a, b):
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._addt is not None:
            return self._addt[a][b]
        return self._add_digits(a, b)

    def neg(self, a):
        if self.n == 1:
            return -a % self.p
        if self.p == 2:
            return a
        if self._negt is not None:
            return self._negt[a]
        return self._neg_digits(a)

    def sub(self, a, b):
        if self.n == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.n == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        log = self._log
        return self._exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.n == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow(self, a, k):
        if self.n == 1:
            if k < 0:
                a, k = self.inv(a), -k
            return pow(a, k, self.p)
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 if k == 0 else 0
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def from_int(self, k):
        return k % self.p

    def log(self, a) -> int:
        """Discrete log to the field's fixed generator."""
        self._ensure_tables()
        return self._log[a]

    def exp(self, k) -> int:
        self._ensure_tables()
        return self._exp[k % (self.q - 1)]

    def is_square_raw(self, a) -> bool:
        if a == 0 or self.p == 2:
            return True
        if self.n == 1:
            return pow(a, (self.p - 1) // 2, self.p) == 1
        return self._log[a] % 2 == 0

    def sqrt_raw(self, a):
        if a == 0:
            return 0
        if self.q > TABLE_LIMIT:
            return _tonelli_shanks(self, a)
        self._ensure_tables()
        k = self._log[a]
        if k % 2:
            if self.p != 2:
                return None
            k += self.q - 1
        r = self._exp[k // 2]
        return min(r, self.neg(r))

    def raw_elements(self):
        return iter(range(self.q))

    def format(self, a) -> str:
        if self.n == 1:
            return str(a)
        ds = self.digits(a)
        parts = []
        for i in range(self.n - 1, -1, -1):
            c = ds[i]
            if not c:
                continue
            mono = "" if i == 0 else ("u" if i == 1 else f"u^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return "+".join(parts) if parts else "0"

    def lookup(self, name):
        if name == "u" and self.n > 1:
            return Element(self, self.p)
        return None

    @property
    def descriptor(self) -> str:
        if self.n == 1:
            return f"GF({self.p})"
        if tuple(self.modulus) == canonical_modulus(self.p, self.n):
            return f"GF({self.q})"
        mod = Poly(FiniteField(self.p), ("u",), {(i,): c for i, c in enumerate(self.modulus)})
        return f"GF({self.q},{mod})"

    def __eq__(self, other):
        return self is other or (isinstance(other, FiniteField) and self.q == other.q
                                 and tuple(self.modulus) == tuple(other.modulus))

    def __hash__(self):
        return hash((self.q, tuple(self.modulus)))

    # structure
    @property
    def prime_field(self) -> "FiniteField":
        return FiniteField(self.p)

    def extension(self, d: int) -> "FiniteField":
        """The canonical GF(q^d) (as an extension of the prime field)."""
        return FiniteField(self.p, self.n * d)

    def frobenius_degree(self, a, base_q: int) -> int:
        """Smallest e >= 1 with a^(base_q^e) = a (degree over GF(base_q))."""
        e, x = 1, self.pow(a, base_q)
        while x != a:
            x = self.pow(x, base_q)
            e += 1
        return e


_FF_CACHE = {}


def _finite_field(cls, p, n, modulus):
    if modulus is None and n > 1 and is_prime(p):
        modulus = canonical_modulus(p, n)
    key = (p, n, tuple(modulus) if modulus is not None and n > 1 else None)
    f = _FF_CACHE.get(key)
    if f is None:
        f = object.__new__(cls)
        f._init(p, n, modulus if n > 1 else None)
        _FF_CACHE[key] = f
    return f


def _tonelli_shanks(F: FiniteField, a):
    """Square root in a large prime field (q odd)."""
    if F.n != 1:
        raise UnsupportedField("Tonelli-Shanks only wired for prime fields beyond table size")
    p = F.p
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return min(r, p - r)


class RationalField(Field):
    """The rationals, with arbitrary-precision reduced fractions."""

    characteristic = 0
    kind = "Rationals"

    def __init__(self):
        self.zero, self.one = Fraction(0), Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def pow(self, a, k):
        return a ** k

    def from_int(self, k):
        return Fraction(k)

    def sqrt_raw(self, a):
        if a < 0:
            return None
        n, d = math.isqrt(a.numerator), math.isqrt(a.denominator)
        if n * n == a.numerator and d * d == a.denominator:
            return Fraction(n, d)
        return None

    def convert(self, x):
        if isinstance(x, Fraction):
            return Element(self, x)
        return super().convert(x)

    def format(self, a):
        return str(a)

    @property
    def descriptor(self):
        return "Q"


QQ = RationalField()


class QuadraticExtension(Field):
    """base[sqrt(d)] for a non-square d of the base field."""

    kind = "QuadraticExtension"

    def __init__(self, base: Field, d):
        d = base.convert(d).value if not _is_raw_of(base, d) else d
        if base.characteristic == 2:
            raise UnsupportedField("quadratic extensions are only supported in odd characteristic or 0")
        if base.is_zero(d) or base.sqrt_raw(d) is not None:
            raise SquareAdjunction(f"{base.format(d)} is already a square in {base.descriptor}")
        self.base, self.d = base, d
        self.characteristic = base.characteristic
        self.order = base.order ** 2 if base.order else None
        self.zero = (base.zero, base.zero)
        self.one = (base.one, base.zero)
        is_i = isinstance(base, RationalField) and d == Fraction(-1)
        self.gen_name = "i" if is_i else "w"

    def add(self, a, b):
        B = self.base
        return (B.add(a[0], b[0]), B.add(a[1], b[1]))

    def neg(self, a):
        B = self.base
        return (B.neg(a[0]), B.neg(a[1]))

    def sub(self, a, b):
        B = self.base
        return (B.sub(a[0], b[0]), B.sub(a[1], b[1]))

    def mul(self, a, b):
        B = self.base
        x = B.add(B.mul(a[0], b[0]), B.mul(self.d, B.mul(a[1], b[1])))
        y = B.add(B.mul(a[0], b[1]), B.mul(a[1], b[0]))
        return (x, y)

    def norm(self, a):
        B = self.base
        return B.sub(B.mul(a[0], a[0]), B.mul(self.d, B.mul(a[1], a[1])))

    def inv(self, a):
        B = self.base
        n = self.norm(a)
        if B.is_zero(n):
            raise ZeroDivisionError("inverse of zero")
        ni = B.inv(n)
        return (B.mul(a[0], ni), B.neg(B.mul(a[1], ni)))

    def is_zero(self, a):
        return self.base.is_zero(a[0]) and self.base.is_zero(a[1])

    def from_int(self, k):
        return (self.base.from_int(k), self.base.zero)

    def sqrt_raw(self, a):
        B = self.base
        u, v = a
        if B.is_zero(v):
            r = B.sqrt_raw(u)
            if r is not None:
                return (r, B.zero)
            r = B.sqrt_raw(B.mul(u, B.inv(self.d)))
            return None if r is None else (B.zero, r)
        n = B.sqrt_raw(self.norm(a))
        if n is None:
            return None
        half = B.inv(B.from_int(2))
        for sgn_n in (n, B.neg(n)):
            t = B.mul(B.add(u, sgn_n), half)
            x = B.sqrt_raw(t)
            if x is not None and not B.is_zero(x):
                y = B.mul(v, B.inv(B.add(x, x)))
                return (x, y)
        return None

    def convert(self, x):
        if isinstance(x, Element) and x.field != self:
            return Element(self, (self.base.convert(x).value, self.base.zero))
        if isinstance(x, Fraction):
            return Element(self, (self.base.convert(x).value, self.base.zero))
        return super().convert(x)

    def raw_elements(self):
        if self.order is None:
            raise InfiniteField(f"{self.descriptor} is infinite")
        elems = list(self.base.raw_elements())
        return ((x, y) for x in elems for y in elems)

    def format(self, a):
        return str(Poly(self.base, (self.gen_name,), {(0,): a[0], (1,): a[1]}))

    def lookup(self, name):
        if name == self.gen_name:
            return Element(self, (self.base.zero, self.base.one))
        b = self.base.lookup(name)
        return None if b is None else self.convert(b)

    @property
    def descriptor(self):
        if self.gen_name == "i":
            return "Q(i)"
        return f"{self.base.descriptor}[sqrt({self.base.format(self.d)})]"


def _is_raw_of(field, x) -> bool:
    if isinstance(x, Element):
        return False
    if isinstance(field, FiniteField):
        return isinstance(x, int)
    if isinstance(field, RationalField):
        return isinstance(x, Fraction)
    return isinstance(x, tuple)


class RationalFunctionField(Field):
    """base(t_1, ..., t_r) with reduced fractions of polynomials."""

    kind = "RationalFunctionField"

    def __init__(self, base: Field, vars: Sequence[str]):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise DescriptorError("variable names must be distinct")
        for v in vars:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise DescriptorError(f"bad variable name {v!r}")
            if base.lookup(v) is not None:
                raise DescriptorError(f"variable {v!r} shadows a name of the base field")
        self.base, self.vars = base, vars
        self.characteristic = base.characteristic
        self.order = None
        one = Poly.one(base, vars)
        self.zero = (Poly.zero(base, vars), one)
        self.one = (one, one)

    @property
    def nvars(self):
        return len(self.vars)

    # polynomial helpers
    def poly(self, terms) -> Poly:
        return Poly(self.base, self.vars, terms)

    def gen(self, i: int) -> Element:
        return Element(self, (Poly.var(self.base, self.vars, i), self.one[1]))

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def from_poly(self, p: Poly) -> Element:
        return Element(self, self.normalize(p, self.one[1]))

    def from_fraction(self, num: Poly, den: Poly) -> Element:
        return Element(self, self.normalize(num, den))

    def normalize(self, n: Poly, d: Poly):
        if d.is_zero():
            raise ZeroDivisionError("zero denominator")
        if n.is_zero():
            return self.zero
        if not d.is_constant():
            g = poly_gcd(n, d)
            if not g.is_constant():
                n, d = n.exquo(g), d.exquo(g)
        _, lc = d.leading()
        if lc != self.base.one:
            inv = self.base.inv(lc)
            n, d = n.scale(inv), d.scale(inv)
        return (n, d)

    # raw API
    def add(self, a, b):
        if a[1] == b[1]:
            if a[1].is_constant():
                return (a[0] + b[0], a[1])
            return self.normalize(a[0] + b[0], a[1])
        return self.normalize(a[0] * b[1] + b[0] * a[1], a[1] * b[1])

    def neg(self, a):
        return (-a[0], a[1])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a[1].is_constant() and b[1].is_constant():
            return (a[0] * b[0], a[1])
        return self.normalize(a[0] * b[0], a[1] * b[1])

    def inv(self, a):
        if a[0].is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self.normalize(a[1], a[0])

    def is_zero(self, a):
        return a[0].is_zero()

    def from_int(self, k):
        return (Poly.const(self.base, self.vars, self.base.from_int(k)), self.one[1])

    def sqrt_raw(self, a):
        n, d = a
        r = (n * d).sqrt()
        if r is None:
            return None
        return self.normalize(r, d)

    def derivative(self, a, i: int):
        n, d = a
        num = n.derivative(i) * d - n * d.derivative(i)
        return self.normalize(num, d * d)

    def evaluate(self, a, point):
        """Value at a point of base raws; ZeroDivisionError on a pole."""
        B = self.base
        dv = a[1].evaluate(point)
        if B.is_zero(dv):
            raise ZeroDivisionError("pole at point")
        return B.mul(a[0].evaluate(point), B.inv(dv))

    def convert(self, x):
        if isinstance(x, Element) and x.field != self:
            b = self.base.convert(x)
            return Element(self, (Poly.const(self.base, self.vars, b.value), self.one[1]))
        if isinstance(x, Fraction):
            return self.convert(self.base.convert(x))
        if isinstance(x, Poly):
            return self.from_poly(x)
        return super().convert(x)

    def lookup(self, name):
        if name in self.vars:
            return self.gen(self.vars.index(name))
        b = self.base.lookup(name)
        return None if b is None else self.convert(b)

    def format(self, a):
        n, d = a
        if d == self.one[1]:
            return str(n)
        return f"({n})/({d})"

    @property
    def descriptor(self):
        return f"{self.base.descriptor}({','.join(self.vars)})"

    def numerator(self, x: Element) -> Poly:
        return x.value[0]

    def denominator(self, x: Element) -> Poly:
        return x.value[1]


# -- element text parsing ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            out.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        else:
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _ElementParser:
    def __init__(self, field: Field, text: str):
        self.field, self.text = field, text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[1] != op:
            raise DescriptorError(f"expected {op!r} at position {t[2]} in {self.text!r}")

    def parse(self) -> Element:
        v = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise DescriptorError(f"unexpected {t[1]!r} at position {t[2]} in {self.text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            w = self.unary()
            v = v * w if op == "*" else v / w
        return v

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            t = self.take()
            if t[0] != "num":
                raise DescriptorError(f"integer exponent expected at position {t[2]}")
            v = v ** (sign * int(t[1]))
        return v

    def atom(self):
        t = self.take()
        if t[0] == "num":
            return Element(self.field, self.field.from_int(int(t[1])))
        if t[0] == "name":
            e = self.field.lookup(t[1])
            if e is None:
                raise DescriptorError(f"unknown name {t[1]!r} in {self.field.descriptor}")
            return e
        if t[1] == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise DescriptorError(f"unexpected {t[1]!r} at position {t[2]} in {self.text!r}")


def parse_element(field: Field, text: str) -> Element:
    """Parse an arithmetic expression (numbers, generator names, + - * / ^)."""
    try:
        return _ElementParser(field, text).parse()
    except ZeroDivisionError as exc:
        raise DescriptorError(f"division by zero in {text!r}") from exc


# -- descriptors -------------------------------------------------------------------


@lru_cache(maxsize=256)
def field_make(text: str) -> Field:
    """Build a validated field from its descriptor text (see module docstring)."""
    s = re.sub(r"\s+", "", text)
    if not s:
        raise DescriptorError("empty field descriptor")
    pos = 0
    if s.startswith("GF("):
        depth, j = 0, 3
        while j < len(s):
            if s[j] == "(":
                depth += 1
            elif s[j] == ")":
                if depth == 0:
                    break
                depth -= 1
            j += 1
        if j >= len(s):
            raise DescriptorError(f"unbalanced parentheses in {text!r}")
        inner = s[3:j]
        size, _, mod_text = inner.partition(",")
        m = re.fullmatch(r"(\d+)(?:\^(\d+))?", size)
        if not m:
            raise DescriptorError(f"bad field size {size!r}")
        if m.group(2):
            p, n = int(m.group(1)), int(m.group(2))
            if not is_prime(p):
                raise NotPrime(f"{p} is not prime")
        else:
            p, n = prime_power(int(m.group(1)))
        modulus = None
        if mod_text:
            ring = RationalFunctionField(FiniteField(p), ("u",))
            f = parse_element(ring, mod_text)
            num, den = f.value
            if not den.is_constant() or num.total_degree() != n:
                raise ReducibleModulus(f"modulus must be a polynomial of degree {n} in u")
            lc = num.terms[(n,)]
            if lc != 1:
                raise ReducibleModulus("modulus must be monic")
            modulus = tuple(num.terms.get((i,), 0) for i in range(n + 1))
        if n == 1 and modulus is not None:
            raise DescriptorError("prime fields take no modulus")
        field: Field = FiniteField(p, n, modulus)
        pos = j + 1
    elif s.startswith("Q"):
        field = QQ
        pos = 1
    else:
        raise DescriptorError(f"unknown base field in {text!r}")

    while pos < len(s):
        if s.startswith("[sqrt(", pos):
            end = s.find(")]", pos)
            if end < 0:
                raise DescriptorError(f"unterminated sqrt in {text!r}")
            d = parse_element(field, s[pos + 6:end])
            field = QuadraticExtension(field, d.value)
            pos = end + 2
        elif s[pos] == "(":
            end = s.find(")", pos)
            if end < 0:
                raise DescriptorError(f"unbalanced parentheses in {text!r}")
            names = s[pos + 1:end].split(",")
            if field is QQ and names == ["i"]:
                field = QuadraticExtension(QQ, Fraction(-1))
            else:
                field = RationalFunctionField(field, names)
            pos = end + 1
        else:
            raise DescriptorError(f"unexpected {s[pos]!r} at position {pos} in {text!r}")
    return field


def enumerate_field(field: Field) -> Iterator[Element]:
    """Each element of a finite field exactly once, in raw order."""
    if not field.is_finite:
        raise InfiniteField(f"{field.descriptor} is infinite")
    return field.enumerate()


def is_square(x: Element) -> Tuple[bool, Optional[Element]]:
    """(True, root) when x is a square, else (False, None)."""
    r = x.field.sqrt_raw(x.value)
    if r is None:
        return False, None
    return True, Element(x.field, r)


# -- embeddings between finite fields -------------------------------------------------


@lru_cache(maxsize=None)
def _embedding_table(k: FiniteField, l: FiniteField):
    if k.p != l.p or l.n % k.n:
        raise FieldMismatch(f"{k.descriptor} does not embed in {l.descriptor}")
    if k.n == 1:
        return None
    mod = k.modulus
    root = None
    for x in range(l.q):
        acc = 0
        for c in reversed(mod):
            acc = l.add(l.mul(acc, x), l.from_int(c))
        if acc == 0:
            root = x
            break
    if root is None:
        raise FieldMismatch("no root of the modulus found")
    powers = [l.pow(root, i) for i in range(k.n)]
    table = []
    for a in range(k.q):
        v = 0
        for c, pw in zip(k.digits(a), powers):
            if c:
                v = l.add(v, l.mul(l.from_int(c), pw))
        table.append(v)
    return tuple(table)


def embedding(k: FiniteField, l: FiniteField):
    """Raw-value field embedding k -> l (l must contain a copy of k)."""
    if k == l:
        return lambda a: a
    table = _embedding_table(k, l)
    if table is None:
        return lambda a: a
    return table.__getitem__


def extend_scalars(K: RationalFunctionField, l: FiniteField) -> RationalFunctionField:
    """k(t_1..t_r) -> l(t_1..t_r) for a finite extension l of the finite base k."""
    if K.base == l:
        return K
    return RationalFunctionField(l, K.vars)


def coerce_rf(x: Element, L: RationalFunctionField) -> Element:
    """Image of an element of k(t) in l(t) under the scalar extension."""
    K = x.field
    if K == L:
        return x
    emb = embedding(K.base, L.base)
    n, d = x.value
    return L.from_fraction(n.map_coeffs(emb, L.base), d.map_coeffs(emb, L.base))
