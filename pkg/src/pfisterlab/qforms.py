"""Diagonal quadratic forms, Pfister forms and the local-parameter certificate.

Characteristic 2 is excluded throughout; degree-ell forms live in
:mod:`pfisterlab.genforms`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import List, Optional, Sequence, Tuple

from .errors import (CharacteristicTwo, DimensionMismatch, EvenDegree, InfiniteField,
                     InternalDisagreement, NotAZero, NotVanishing, RankDeficient,
                     ResidueIsotropic, ZeroSlot)
from .fields import (Element, Field, FiniteField, RationalFunctionField, embedding,
                     field_make)
from .linalg import complete_to_basis, rank
from .search import SearchResult, bounded_zero_search
from .valuations import Center, first_order_coeffs, is_regular_at, lex_val


@dataclass(frozen=True)
class DiagonalForm:
    field: Field
    coeffs: Tuple[Element, ...]

    def __post_init__(self):
        if self.field.characteristic == 2:
            raise CharacteristicTwo("quadratic forms are not supported in characteristic 2")
        if not self.coeffs:
            raise DimensionMismatch("a form needs at least one coefficient")
        for c in self.coeffs:
            if c.is_zero():
                raise ZeroSlot("diagonal coefficients must be nonzero")

    @classmethod
    def of(cls, field: Field, coeffs) -> "DiagonalForm":
        return cls(field, tuple(field.convert(c) for c in coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coeffs) + ")"

    def to_json(self):
        return [str(c) for c in self.coeffs]

    def tensor(self, other: "DiagonalForm") -> "DiagonalForm":
        return DiagonalForm(self.field, tuple(b * a for b in other.coeffs for a in self.coeffs))

    def change_field(self, target: Field, fn=None) -> "DiagonalForm":
        fn = fn or target.convert
        return DiagonalForm(target, tuple(fn(c) for c in self.coeffs))


@dataclass(frozen=True)
class PfisterSpec:
    field: Field
    slots: Tuple[Element, ...]

    @classmethod
    def of(cls, field: Field, slots) -> "PfisterSpec":
        return cls(field, tuple(field.convert(s) for s in slots))


def pfister_expand(spec: PfisterSpec) -> DiagonalForm:
    """Coefficients in subset-mask order: entry k is the product of slots whose bit is set in k."""
    for s in spec.slots:
        if s.is_zero():
            raise ZeroSlot("Pfister slots must be nonzero")
    out = []
    one = spec.field(1)
    for mask in range(1 << len(spec.slots)):
        v = one
        for i, s in enumerate(spec.slots):
            if mask >> i & 1:
                v = v * s
        out.append(v)
    return DiagonalForm(spec.field, tuple(out))


def pfister(field: Field, slots) -> DiagonalForm:
    return pfister_expand(PfisterSpec.of(field, slots))


def form_eval(q: DiagonalForm, x: Sequence) -> Element:
    if len(x) != q.dim:
        raise DimensionMismatch(f"form has dimension {q.dim}, vector has length {len(x)}")
    total = q.field(0)
    for c, xi in zip(q.coeffs, x):
        xi = q.field.convert(xi)
        total = total + c * xi * xi
    return total


@dataclass(frozen=True)
class Anisotropic:
    form: DiagonalForm

    found = False
    witness = None


@dataclass(frozen=True)
class Witness:
    form: DiagonalForm
    vector: Tuple[Element, ...]

    found = True

    @property
    def witness(self):
        return self.vector


def isotropy_finite(q: DiagonalForm, exhaustive: bool = False):
    """Projective search with the first nonzero coordinate equal to 1.

    Candidates are visited by position of the leading 1, then lexicographically
    in raw order, with the last coordinate solved from a square root (the
    smaller root wins).  Unless ``exhaustive``, forms of dimension >= 3 over
    odd q search only their first three coordinates, which always contain a
    zero by Chevalley-Warning.
    """
    F = q.field
    if not isinstance(F, FiniteField):
        raise InfiniteField(f"{F.descriptor} is not finite")
    d = [c.value for c in q.coeffs]
    n = len(d)
    if n >= 3 and not exhaustive:
        found = _projective_zero(F, d[:3])
        if found is not None:
            vec = found + [F.zero] * (n - 3)
            return Witness(q, tuple(Element(F, v) for v in vec))
        raise InternalDisagreement("Chevalley-Warning fast path found no zero")
    found = _projective_zero(F, d)
    if found is None:
        return Anisotropic(q)
    return Witness(q, tuple(Element(F, v) for v in found))


def _projective_zero(F: FiniteField, d: Sequence) -> Optional[List]:
    n = len(d)
    if n == 1:
        return None
    last_inv = F.inv(d[-1])
    elems = list(F.raw_elements())
    sq_cache = {}
    for lead in range(n - 1):
        free = n - lead - 2
        for mid in product(elems, repeat=free):
            partial = d[lead]
            for c, x in zip(d[lead + 1:-1], mid):
                if x:
                    partial = F.add(partial, F.mul(c, F.mul(x, x)))
            target = F.mul(F.neg(partial), last_inv)
            if target not in sq_cache:
                sq_cache[target] = F.sqrt_raw(target)
            r = sq_cache[target]
            if r is not None:
                return [F.zero] * lead + [F.one] + list(mid) + [r]
    return None


def isotropy_bounded_search(q: DiagonalForm, D: int, hint=None) -> SearchResult:
    """Exhaustive search for polynomial zeros of degree <= D (see :mod:`search`).

    ``hint`` may be an :class:`AnisotropyCertificate`; its center is then used
    as the search chart, which changes visiting order only.
    """
    chart = chart_from_certificate(hint) if hint is not None else None
    return bounded_zero_search(list(q.coeffs), 2, D, chart=chart)


def springer_descend(q: DiagonalForm, L: Field, witness: Sequence) -> dict:
    """Check a zero over an odd-degree extension and report the implied zero over K."""
    K = q.field
    if isinstance(K, FiniteField) and isinstance(L, FiniteField):
        if L.p != K.p or L.n % K.n:
            raise InfiniteField(f"{L.descriptor} is not a finite extension of {K.descriptor}")
        degree = L.n // K.n
        emb = embedding(K, L)
        lift = lambda c: Element(L, emb(c.value))
    elif isinstance(K, RationalFunctionField) and isinstance(L, RationalFunctionField):
        degree = L.base.n // K.base.n
        from .fields import coerce_rf
        lift = lambda c: coerce_rf(c, L)
    else:
        raise InfiniteField("Springer descent is implemented for finite fields and their function fields")
    if degree % 2 == 0:
        raise EvenDegree(f"[L:K] = {degree} is even")
    w = [L.convert(x) for x in witness]
    qL = DiagonalForm(L, tuple(lift(c) for c in q.coeffs))
    if all(x.is_zero() for x in w) or not form_eval(qL, w).is_zero():
        raise NotAZero("witness is not a nontrivial zero over L")
    report = {"degree": degree, "isotropic_over_K": True, "K_witness": None}
    if isinstance(K, FiniteField):
        res = isotropy_finite(q, exhaustive=True)
        if not res.found:
            raise InternalDisagreement("zero over odd-degree extension but none over K")
        report["K_witness"] = [str(x) for x in res.vector]
    return report


# -- certificates ---------------------------------------------------------------


@dataclass(frozen=True)
class AnisotropyCertificate:
    """Claims q0 (x) <<g_1..g_m>> is anisotropic over K."""

    K: RationalFunctionField
    center: Center
    residue_form: DiagonalForm
    parameters: Tuple[Element, ...]
    jacobian: Optional[Tuple[Tuple, ...]] = None

    def form(self) -> DiagonalForm:
        """q0 (x) <<g_1..g_m>> over K (q0 coefficients must lie in k)."""
        K = self.K
        base = DiagonalForm(K, tuple(_residue_to_K(K, self.center.l, c) for c in self.residue_form.coeffs))
        return base.tensor(pfister(K, self.parameters))

    def form_over_L(self) -> DiagonalForm:
        """The same form over l(t_1..t_r), where the seed always lives."""
        L = self.center.L
        base = DiagonalForm(L, tuple(L.convert(c) for c in self.residue_form.coeffs))
        return base.tensor(pfister(L, [self.center.lift(g) for g in self.parameters]))

    def to_json(self, verdict=None):
        l = self.center.l
        jac = self.jacobian
        return {
            "field": self.K.descriptor,
            "center": self.center.to_json(),
            "residue_form": {"field": l.descriptor, "coeffs": self.residue_form.to_json()},
            "parameters": [str(g) for g in self.parameters],
            "jacobian_residues": None if jac is None else [[l.format(x) for x in row] for row in jac],
            "verdict": verdict,
        }

    def dumps(self, verdict=None) -> str:
        return json.dumps(self.to_json(verdict), sort_keys=True)

    @classmethod
    def from_json(cls, doc) -> "AnisotropyCertificate":
        if isinstance(doc, str):
            doc = json.loads(doc)
        K = field_make(doc["field"])
        l = field_make(doc["center"]["residue_field"])
        center = Center.make(K, [l(x) for x in doc["center"]["point"]], l)
        q0 = DiagonalForm.of(l, doc["residue_form"]["coeffs"])
        params = tuple(K(g) for g in doc["parameters"])
        jac = doc.get("jacobian_residues")
        if jac is not None:
            jac = tuple(tuple(l(x).value for x in row) for row in jac)
        return cls(K, center, q0, params, jac)


def _residue_to_K(K, l, c: Element) -> Element:
    if l == K.base:
        return K.convert(c)
    raise ValueError("residue form has coefficients outside k; use form_over_L")


@dataclass
class Validation:
    valid: bool
    failures: List[Tuple[str, str]] = dc_field(default_factory=list)
    lex_values: List[Tuple[int, ...]] = dc_field(default_factory=list)
    jacobian: Optional[List[list]] = None

    def __bool__(self):
        return self.valid

    def raise_if_invalid(self):
        errors = {"ResidueIsotropic": ResidueIsotropic, "NotVanishing": NotVanishing,
                  "RankDeficient": RankDeficient}
        if not self.valid:
            code, msg = self.failures[0]
            raise errors[code](msg)


def certificate_validate(cert: AnisotropyCertificate) -> Validation:
    """Check (i) residue anisotropy, (ii) vanishing of each g_j at the center,
    (iii) full rank of the residue Jacobian of the g_j."""
    c = cert.center
    l = c.l
    failures = []
    if cert.residue_form.dim == 1:
        res = Anisotropic(cert.residue_form)
    else:
        res = isotropy_finite(cert.residue_form, exhaustive=True)
    if res.found:
        failures.append(("ResidueIsotropic",
                         "residue form has zero " + ",".join(str(x) for x in res.vector)))
    vals = []
    vanish_ok = True
    for j, g in enumerate(cert.parameters):
        if g.is_zero() or not is_regular_at(g, c):
            failures.append(("NotVanishing", f"parameter {j + 1} is zero or has a pole at the center"))
            vanish_ok = False
            continue
        v = lex_val(g, c)
        vals.append(v)
        if not any(v) or v < tuple(0 for _ in v):
            failures.append(("NotVanishing", f"parameter {j + 1} has valuation {v}"))
            vanish_ok = False
    jac = None
    if vanish_ok:
        jac = [first_order_coeffs(g, c) for g in cert.parameters]
        if rank(l, jac) < len(cert.parameters):
            failures.append(("RankDeficient", "residue Jacobian of the parameters is rank deficient"))
    return Validation(not failures, failures, vals, jac)


def chart_from_certificate(cert: AnisotropyCertificate):
    """(l, point, N) with N's first rows the residue Jacobian of the parameters."""
    c = cert.center
    jac = [first_order_coeffs(g, c) for g in cert.parameters]
    N = complete_to_basis(c.l, jac) if jac else complete_to_basis(c.l, [[c.l.one] + [c.l.zero] * (c.K.nvars - 1)])
    return (c.l, c.point, N)


def seed_nonsquare(l: FiniteField):
    """First nonsquare of l in enumeration order."""
    for a in l.raw_elements():
        if a and l.sqrt_raw(a) is None:
            return Element(l, a)
    raise CharacteristicTwo("every element is a square")


def anisotropic_seed(l: FiniteField) -> DiagonalForm:
    """<<-alpha>> for the first nonsquare alpha; anisotropic over any finite l of odd order."""
    return pfister(l, [-seed_nonsquare(l)])
