"""The curve families C_a, their point sets over finite fields, and S_a / S_a'.

Templates, chosen by characteristic:

=============  ====================  =========  =====
name           equation              char       genus
=============  ====================  =========  =====
quintic        y^2 = x^5 + a x + 1   not 2, 5   2
septic         y^2 = x^7 + a x + 1   5          3
artin-schreier y^2 + y = x^5 + a x   2          2
=============  ====================  =========  =====

Each smooth member has exactly one point at infinity (odd-degree models),
so projective counts are affine counts plus one.

Ratio sets are computed in discrete-log coordinates: with X* the nonzero
x-coordinates, S_a \\ {0} = {g^(i-j) : g^i, g^j in X*}, a cyclic difference
set obtained from big-integer bit rotations.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import gcd, isqrt, sqrt
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .errors import BasePointMissing, CharMismatch, NotFound, ScanCeilingExceeded
from .fields import (Element, Field, FiniteField, QQ, RationalField, RationalFunctionField,
                     field_make, is_prime)
from .linalg import rank
from .poly import Poly, discriminant, is_squarefree, poly_gcd

TEMPLATES = ("quintic", "septic", "artin-schreier")
GENUS = {"quintic": 2, "septic": 3, "artin-schreier": 2}
DEGREE = {"quintic": 5, "septic": 7, "artin-schreier": 5}
# genus of the fiber product Y over x1 = c x2 is at most the sum of the genera
# of the three intermediate double covers of the x2-line
Y_GENUS_BOUND = {"quintic": 8, "septic": 12, "artin-schreier": 6}
# affine points of Y lost to infinity, to x2 = 0, and to singular fibers
Y_DEFECT = {"quintic": 8 + 2 * 5, "septic": 8 + 2 * 7, "artin-schreier": 8 + 2 * 5}


def template_for(characteristic: int) -> str:
    if characteristic == 2:
        return "artin-schreier"
    if characteristic == 5:
        return "septic"
    return "quintic"


def _char_ok(template: str, p: int) -> bool:
    if template == "artin-schreier":
        return p == 2
    if template == "septic":
        return p == 5
    return p not in (2, 5)


@dataclass(frozen=True)
class CurveFamily:
    """A template and a parameter a (any value coercible into the field used)."""

    template: str
    a: object = 0

    def __post_init__(self):
        if self.template not in TEMPLATES:
            raise ValueError(f"unknown template {self.template!r}")

    @classmethod
    def auto(cls, field: Field, a=0) -> "CurveFamily":
        return cls(template_for(field.characteristic), a)

    @property
    def genus(self) -> int:
        return GENUS[self.template]

    @property
    def degree(self) -> int:
        return DEGREE[self.template]

    def check(self, field: Field):
        if not _char_ok(self.template, field.characteristic):
            raise CharMismatch(f"{self.template} family does not apply in characteristic {field.characteristic}")

    def param(self, field: Field):
        return field.convert(self.a).value

    def equation(self) -> str:
        if self.template == "artin-schreier":
            return "y^2+y = x^5+a*x"
        return f"y^2 = x^{self.degree}+a*x+1"

    def rhs(self, F, a, x):
        v = F.add(F.pow(x, self.degree), F.mul(a, x))
        return v if self.template == "artin-schreier" else F.add(v, F.one)

    def rhs_derivative(self, F, a, x):
        return F.add(F.mul(F.from_int(self.degree), F.pow(x, self.degree - 1)), a)

    def on_curve(self, F, a, x, y) -> bool:
        lhs = F.mul(y, y)
        if self.template == "artin-schreier":
            lhs = F.add(lhs, y)
        return lhs == self.rhs(F, a, x)


@dataclass
class PointSet:
    field: Field
    points: List[Tuple]
    smooth: List[bool]

    def __len__(self):
        return len(self.points)

    @property
    def xs(self) -> Set:
        return {x for x, _ in self.points}


# -- per-field tables -------------------------------------------------------------------


@lru_cache(maxsize=64)
def _y_table(F: FiniteField, artin_schreier: bool) -> Dict:
    """value -> list of y with y^2 = value (or y^2 + y = value)."""
    out: Dict = {}
    for y in F.raw_elements():
        v = F.mul(y, y)
        if artin_schreier:
            v = F.add(v, y)
        out.setdefault(v, []).append(y)
    return out


@lru_cache(maxsize=64)
def _power_table(F: FiniteField, k: int) -> Tuple:
    return tuple(F.pow(x, k) for x in F.raw_elements())


def _fiber_sizes(fam: CurveFamily, F: FiniteField, a) -> List[int]:
    """Number of points above each x (indexed by raw x)."""
    table = _y_table(F, fam.template == "artin-schreier")
    pw = _power_table(F, fam.degree)
    one = F.zero if fam.template == "artin-schreier" else F.one
    out = []
    for x in F.raw_elements():
        v = F.add(F.add(pw[x], F.mul(a, x)), one)
        out.append(len(table.get(v, ())))
    return out


def enumerate_points(fam: CurveFamily, field: FiniteField) -> PointSet:
    fam.check(field)
    F = field
    a = fam.param(F)
    table = _y_table(F, fam.template == "artin-schreier")
    pts, smooth = [], []
    for x in F.raw_elements():
        v = fam.rhs(F, a, x)
        for y in table.get(v, ()):
            pts.append((Element(F, x), Element(F, y)))
            if fam.template == "artin-schreier":
                smooth.append(True)
            else:
                smooth.append(not (F.is_zero(y) and F.is_zero(fam.rhs_derivative(F, a, x))))
    return PointSet(F, pts, smooth)


def _x_support(fam: CurveFamily, F: FiniteField, a) -> List[int]:
    sizes = _fiber_sizes(fam, F, a)
    return [x for x, n in zip(F.raw_elements(), sizes) if n]


def ratio_set_raw(F: FiniteField, xs: Sequence[int]) -> Set[int]:
    """{x1/x2 : x1, x2 in xs, x2 != 0} as raw values."""
    nz = [x for x in xs if x]
    if not nz:
        return set()
    out = {F.zero} if F.zero in xs else set()
    n = F.q - 1
    full = (1 << n) - 1
    mask = 0
    logs = [F.log(x) for x in nz]
    for k in logs:
        mask |= 1 << k
    acc = 0
    for k in logs:
        acc |= ((mask >> k) | (mask << (n - k))) & full
        if acc == full:
            break
    d = 0
    while acc:
        if acc & 1:
            out.add(F.exp(d))
        acc >>= 1
        d += 1
    return out


def compute_Sa(fam: CurveFamily, field: FiniteField) -> Set[Element]:
    fam.check(field)
    F = field
    raw = ratio_set_raw(F, _x_support(fam, F, fam.param(F)))
    return {Element(F, v) for v in raw}


def multiplicative_order(F: FiniteField, x) -> int:
    n = F.q - 1
    return n // gcd(n, F.log(x))


def frobenius_roots(F: FiniteField, m: int) -> Set:
    """Raw zeros of x^j - x for 2 <= j <= m: 0 and every x with ord(x) + 1 <= m."""
    out = {F.zero}
    for x in F.raw_elements():
        if x and multiplicative_order(F, x) + 1 <= m:
            out.add(x)
    return out


def compute_Sa_prime(fam: CurveFamily, field: FiniteField, m: int) -> Set[Element]:
    if m < 2:
        raise ValueError("m must be at least 2")
    F = field
    raw = {e.value for e in compute_Sa(fam, F)} | frobenius_roots(F, m)
    return {Element(F, v) for v in raw}


# -- fiber variety Y ------------------------------------------------------------------------


@dataclass
class FiberReport:
    count: int
    base_point: Tuple
    base_smooth: bool
    off_base: int  # points with x2 != 0

    def to_json(self):
        return {"count": self.count, "base_point": [str(v) for v in self.base_point],
                "base_smooth": self.base_smooth, "off_base": self.off_base}


def fiber_variety_count(fam: CurveFamily, field: FiniteField, c) -> FiberReport:
    """Points of Y = {(P1, P2) in C_a x C_a : x1 = c x2} and smoothness at (0,1,0,1)."""
    fam.check(field)
    F = field
    a = fam.param(F)
    c = F.convert(c).value
    if not fam.on_curve(F, a, F.zero, F.one):
        raise BasePointMissing("(0, 1) is not on the curve")
    sizes = _fiber_sizes(fam, F, a)
    total = off = 0
    for x2 in F.raw_elements():
        n2 = sizes[x2]
        if n2:
            k = n2 * sizes[F.mul(c, x2)]
            total += k
            if x2:
                off += k
    # rows: y1-equation, y2-equation, x1 - c x2; columns x1, y1, x2, y2
    dy = F.add(F.one, F.one) if fam.template != "artin-schreier" else F.one
    fx = F.neg(fam.rhs_derivative(F, a, F.zero))
    jac = [[fx, dy, F.zero, F.zero],
           [F.zero, F.zero, fx, dy],
           [F.one, F.zero, F.neg(c), F.zero]]
    base = tuple(Element(F, v) for v in (F.zero, F.one, F.zero, F.one))
    return FiberReport(total, base, rank(F, jac) == 3, off)


def weil_lower_bound(fam: CurveFamily, q: int) -> float:
    """q + 1 - B sqrt(q) - E with B = 2 g_Y, E the documented defect constant."""
    return q + 1 - 2 * Y_GENUS_BOUND[fam.template] * sqrt(q) - Y_DEFECT[fam.template]


def proof_threshold(fam: CurveFamily) -> int:
    """Smallest q beyond which the bound forces an affine point of Y with x2 != 0."""
    q = 2
    while True:
        if all(weil_lower_bound(fam, r) > 0 for r in range(q + 1, q + 200)):
            return q
        q += 1


# -- census cells ------------------------------------------------------------------------------


def census_cell(template: str, q: int, a_raw: int) -> dict:
    """One (family, q, a) record for the census store."""
    F = FiniteField(*_pp(q))
    fam = CurveFamily(template, 0)
    a = a_raw
    sizes = _fiber_sizes(fam, F, a)
    xs = [x for x in F.raw_elements() if sizes[x]]
    sa = ratio_set_raw(F, xs)
    missing = [x for x in F.raw_elements() if x not in sa]
    covers = all(x in (F.zero, F.one) for x in missing)
    min_m = 2
    for x in missing:
        if x:
            min_m = max(min_m, multiplicative_order(F, x) + 1)
    return {"family": template, "q": q, "a": F.format(a), "n_points": sum(sizes),
            "S_a_size": len(sa), "S_a_prime_covers_field": covers, "min_m": min_m}


def _pp(q: int) -> Tuple[int, int]:
    from .fields import prime_power
    return prime_power(q)


def prime_powers(lo: int, hi: int) -> List[int]:
    out = []
    for q in range(max(lo, 2), hi + 1):
        try:
            _pp(q)
        except ValueError:
            continue
        out.append(q)
    return out


def census_q(template: str, q: int) -> List[dict]:
    F = FiniteField(*_pp(q))
    return [census_cell(template, q, a) for a in F.raw_elements()]


def family_qs(family: str, qmax: int) -> List[Tuple[str, int]]:
    """(template, q) work units for a family name or "auto"."""
    out = []
    for q in prime_powers(2, qmax):
        p, _ = _pp(q)
        t = template_for(p) if family == "auto" else family
        if _char_ok(t, p):
            out.append((t, q))
    return out


@dataclass
class ThresholdReport:
    family: str
    ceiling: int
    m: int
    m_prime: int
    scanned: List[int]
    failures: List[dict] = dc_field(default_factory=list)
    need: Dict[int, int] = dc_field(default_factory=dict)

    def to_json(self):
        return {"family": self.family, "ceiling": self.ceiling, "m": self.m, "m_prime": self.m_prime,
                "scanned": self.scanned, "failures": self.failures,
                "need": {str(k): v for k, v in sorted(self.need.items())}}


def threshold_from_records(family: str, records: Sequence[dict], ceiling: int) -> ThresholdReport:
    """m: least m >= 2 such that every cell with q > m has S_a = F_q (up to 0, 1).
    m_prime: least m >= 2 such that every cell with q > m has S_a' (built with m) = F_q."""
    by_q: Dict[int, List[dict]] = {}
    for r in records:
        by_q.setdefault(r["q"], []).append(r)
    qs = sorted(by_q)
    failures = [{"q": r["q"], "a": r["a"], "S_a_size": r["S_a_size"], "min_m": r["min_m"]}
                for q in qs for r in by_q[q] if not r["S_a_prime_covers_field"]]
    bad = [q for q in qs if any(not r["S_a_prime_covers_field"] for r in by_q[q])]
    need = {q: max(r["min_m"] for r in by_q[q]) for q in qs}
    m = max(bad, default=1)
    m = max(m, 2)
    if qs and m >= qs[-1] and bad:
        raise ScanCeilingExceeded(f"coverage still fails at q = {m}; no threshold below {ceiling}")
    m_prime = 2
    for cand in range(2, ceiling + 1):
        if all(need[q] <= cand for q in qs if q > cand):
            m_prime = cand
            break
    return ThresholdReport(family, ceiling, m, m_prime, qs, failures, need)


def derive_weil_threshold(family: str = "auto", ceiling: int = 101, store=None, jobs: int = 1) -> ThresholdReport:
    """Empirical threshold from an exhaustive census up to ``ceiling``."""
    from .census import CensusStore, run_census
    if store is None:
        records = [r for t, q in family_qs(family, ceiling) for r in census_q(t, q)]
    else:
        records = run_census(family, ceiling, store if isinstance(store, CensusStore) else CensusStore(store), jobs)
    return threshold_from_records(family, records, ceiling)


# -- supersingular curves ------------------------------------------------------------------------


@dataclass
class SupersingularReport:
    p: int
    A: int
    B: int
    points: int
    splits_over_p2: bool
    roots: List[str]

    def equation(self) -> str:
        parts = ["x^3"]
        if self.A:
            parts.append("x" if self.A == 1 else f"{self.A}*x")
        if self.B:
            parts.append(str(self.B))
        return "y^2 = " + "+".join(parts)

    def to_json(self):
        return {"p": self.p, "equation": self.equation(), "points": self.points,
                "splits_over_p2": self.splits_over_p2, "roots": self.roots}


def elliptic_count(p: int, A: int, B: int) -> int:
    """Projective points of y^2 = x^3 + A x + B over F_p."""
    F = FiniteField(p)
    total = 1
    for x in range(p):
        v = (x * x * x + A * x + B) % p
        total += 1 if v == 0 else (2 if F.sqrt_raw(v) is not None else 0)
    return total


def find_supersingular(p: int, bound: int = 200) -> SupersingularReport:
    if p == 2 or not is_prime(p) or p > bound:
        raise ValueError(f"p must be an odd prime <= {bound}")
    for A in range(p):
        for B in range(p):
            if (4 * A ** 3 + 27 * B ** 2) % p == 0:
                continue
            if elliptic_count(p, A, B) == p + 1:
                L = FiniteField(p, 2)
                a, b = L.from_int(A), L.from_int(B)
                roots = [x for x in L.raw_elements()
                         if L.add(L.add(L.pow(x, 3), L.mul(a, x)), b) == 0]
                return SupersingularReport(p, A, B, p + 1, len(roots) == 3, [L.format(r) for r in roots])
    raise NotFound(f"no supersingular curve found over F_{p}")


# -- non-isotriviality evidence ----------------------------------------------------------------------


@dataclass
class EvidenceReport:
    template: str
    base: str
    discriminant: str
    squarefree: bool
    nonconstant: bool
    singular_parameters: List[str]
    holds: bool

    def to_json(self):
        return dict(self.__dict__)


def family_discriminant(template: str, base: Field) -> Poly:
    """Discriminant of the x-polynomial as a polynomial in a over ``base``."""
    if template == "artin-schreier":
        raise CharMismatch("the Artin-Schreier family has no discriminant-based evidence check")
    deg = DEGREE[template]
    ring = RationalFunctionField(base, ("a",))
    a = ring.gen(0)
    f = Poly(ring, ("x",), {(deg,): ring.one, (1,): a.value, (0,): ring.one})
    d = discriminant(f, 0).constant_coeff()
    num, den = d
    return num.scale(base.inv(den.constant_coeff()))


def family_nonisotriviality_evidence(template: str, base: Field = QQ) -> EvidenceReport:
    fam = CurveFamily(template)
    fam.check(base)
    disc = family_discriminant(template, base)
    sqf = is_squarefree(disc, 0)
    nonconst = disc.total_degree() > 0
    if isinstance(base, FiniteField):
        sing = [base.format(a) for a in base.raw_elements() if base.is_zero(disc.evaluate((a,)))]
    else:
        sing = [str(r) for r in _rational_roots(disc)]
    return EvidenceReport(template, base.descriptor, str(disc), sqf, nonconst, sing, sqf and nonconst)


def _rational_roots(f: Poly):
    """Rational roots of a univariate polynomial over Q (rational root test)."""
    from fractions import Fraction
    from math import lcm
    den = 1
    for c in f.terms.values():
        den = lcm(den, c.denominator)
    coeffs = {e[0]: int(c * den) for e, c in f.terms.items()}
    lo = min(coeffs)
    c0, cn = coeffs[lo], coeffs[max(coeffs)]
    roots = [Fraction(0)] if lo > 0 else []

    def divisors(n):
        n = abs(n)
        return [d for d in range(1, n + 1) if n % d == 0] if n < 10 ** 6 else [1]

    for pn in divisors(c0):
        for qd in divisors(cn):
            for s in (1, -1):
                r = Fraction(s * pn, qd)
                if r not in roots and sum(c * r ** e for e, c in coeffs.items()) == 0:
                    roots.append(r)
    return sorted(roots)
