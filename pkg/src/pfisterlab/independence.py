"""Algebraic independence of rational functions over k(t_1..t_r).

Two routes decide independence: the symbolic Jacobian rank, and a
certificate route that finds a point b where the residue Jacobian has full
rank and issues a Pfister (odd characteristic, char 0) or degree-ell
(characteristic 2) anisotropy certificate there.  :func:`independent` runs
both and refuses to paper over a disagreement.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from math import lcm
from typing import List, Optional, Sequence, Tuple

from .errors import (BadGenerators, CharacteristicTwo, CharDivides, Inconclusive,
                     InternalDisagreement, NoCenterFound, NoEtalePointFound,
                     NotIndependent, NotWellBehaved, PartialSupport, UnsupportedField)
from .fields import (Element, Field, FiniteField, RationalField, RationalFunctionField,
                     coerce_rf, embedding, extend_scalars)
from .genforms import GenForm, GenFormValidation, genform_certificate
from .linalg import nonzero_minor, rank
from .qforms import (AnisotropyCertificate, DiagonalForm, anisotropic_seed,
                     certificate_validate, isotropy_finite, pfister)
from .valuations import Center

INDEPENDENT, DEPENDENT, INCONCLUSIVE = "Independent", "Dependent", "Inconclusive"


# -- base-field profiles -------------------------------------------------------------


@dataclass(frozen=True)
class BaseFieldProfile:
    field: Field
    e: Optional[int]
    well_behaved: bool
    name: str

    def seed_form(self, l: Field) -> DiagonalForm:
        """An anisotropic e-fold Pfister form over l."""
        if self.e == 0:
            return DiagonalForm.of(l, [1])
        if self.e == 1 and isinstance(l, FiniteField) and l.p != 2:
            return anisotropic_seed(l)
        raise UnsupportedField(f"no seed form for profile {self.name}")


def profile_for(k: Field) -> BaseFieldProfile:
    """Finite fields: e = 1 (odd characteristic).  Characteristic 2 goes through
    degree-3 forms and is not well behaved for the quadratic route."""
    if isinstance(k, FiniteField):
        if k.p == 2:
            return BaseFieldProfile(k, None, False, "finite-char2")
        return BaseFieldProfile(k, 1, True, "finite")
    raise UnsupportedField(f"no default profile for {k.descriptor}; use surrogate_profile")


def surrogate_profile(k: Field) -> BaseFieldProfile:
    """e = 0 with seed <1>: stands in for separably or real closed base fields."""
    return BaseFieldProfile(k, 0, True, "surrogate")


def number_field_profile(k: Field) -> BaseFieldProfile:
    raise NotWellBehaved("number-field profiles (e = 2) are disabled: no verified 2-fold seed ships")


def vcd_of_function_field(profile: BaseFieldProfile, d: int) -> int:
    if not profile.well_behaved or profile.e is None:
        raise NotWellBehaved(f"profile {profile.name} is not well behaved")
    return profile.e + d


def empirical_e(field: FiniteField, max_fold: int) -> int:
    """Largest n <= max_fold with an anisotropic n-fold Pfister form over field."""
    if not isinstance(field, FiniteField) or field.p == 2:
        raise UnsupportedField("empirical_e needs a finite field of odd characteristic")
    if field.sqrt_raw(field.from_int(-1)) is None:
        raise UnsupportedField(f"{field.descriptor} does not contain a square root of -1")
    nonsq = next(a for a in field.raw_elements() if a and field.sqrt_raw(a) is None)
    reps = [field.one, nonsq]
    best = 0
    for n in range(1, max_fold + 1):
        for slots in product(reps, repeat=n):
            q = pfister(field, [Element(field, s) for s in slots])
            if not isotropy_finite(q, exhaustive=True).found:
                best = n
                break
    return best


# -- Jacobian oracle -------------------------------------------------------------------


@dataclass
class JacobianResult:
    verdict: str
    rank: int
    size: Tuple[int, int]
    minor: Optional[Tuple[Tuple[int, ...], str]] = None
    reason: str = ""

    @property
    def conclusive(self) -> bool:
        return self.verdict != INCONCLUSIVE

    def to_json(self):
        return {"verdict": self.verdict, "rank": self.rank, "size": list(self.size),
                "minor": None if self.minor is None else {"columns": list(self.minor[0]), "value": self.minor[1]},
                "reason": self.reason}


def jacobian_matrix(u: Sequence[Element]):
    K = u[0].field
    return [[K.derivative(x.value, i) for i in range(K.nvars)] for x in u]


def jacobian_rank(u: Sequence[Element]) -> JacobianResult:
    """Symbolic rank of (du_j/dt_i); never raises for inconclusive cases."""
    K = _ambient(u)
    s, r = len(u), K.nvars
    if s > r:
        return JacobianResult(DEPENDENT, -1, (s, r), reason="more elements than the transcendence degree")
    J = jacobian_matrix(u)
    rk = rank(K, J)
    if rk == s:
        cols, val = nonzero_minor(K, J)
        return JacobianResult(INDEPENDENT, rk, (s, r), (cols, K.format(val)))
    if K.characteristic == 0:
        return JacobianResult(DEPENDENT, rk, (s, r), reason="rank deficient in characteristic 0")
    return JacobianResult(INCONCLUSIVE, rk, (s, r),
                          reason="rank deficient in positive characteristic (dependence or inseparability)")


def jacobian_independent(u: Sequence[Element]) -> JacobianResult:
    res = jacobian_rank(u)
    if not res.conclusive:
        raise Inconclusive(res.reason)
    return res


def _ambient(u) -> RationalFunctionField:
    if not u:
        raise ValueError("empty tuple")
    K = u[0].field
    if not isinstance(K, RationalFunctionField):
        raise UnsupportedField("elements must lie in a rational function field")
    for x in u:
        if x.field != K:
            raise UnsupportedField("elements must share one field")
    return K


# -- point search ----------------------------------------------------------------------


@dataclass
class EtalePoint:
    l: Field
    point: Tuple
    values: Tuple
    jacobian: List[list]
    degree: int


def _points(k: Field, r: int, max_degree: int):
    """(l, degree, point) in search order: degree 1, 2, ...; enumeration order within."""
    if isinstance(k, FiniteField):
        for d in range(1, max_degree + 1):
            l = k.extension(d)
            elems = list(l.raw_elements())
            for pt in product(elems, repeat=r):
                deg = 1
                for b in pt:
                    deg = lcm(deg, l.frobenius_degree(b, k.q))
                if deg == d:
                    yield l, d, pt
    elif isinstance(k, RationalField):
        radius = max_degree
        vals = [Fraction(0)]
        for n in range(1, radius + 1):
            vals += [Fraction(n), Fraction(-n)]
        for pt in product(vals, repeat=r):
            yield k, 1, pt
    else:
        raise UnsupportedField(f"no point search over {k.descriptor}")


def find_etale_point(u: Sequence[Element], max_degree: int = 3) -> EtalePoint:
    """First point where every u_j is regular and the residue Jacobian has rank s."""
    K = _ambient(u)
    k, r, s = K.base, K.nvars, len(u)
    derivs = jacobian_matrix(u)
    cache = {}
    for l, d, pt in _points(k, r, max_degree):
        if l not in cache:
            emb = embedding(k, l) if isinstance(k, FiniteField) else (lambda a: a)
            lift = lambda raw: (raw[0].map_coeffs(emb, l), raw[1].map_coeffs(emb, l))
            cache[l] = ([lift(x.value) for x in u], [[lift(e) for e in row] for row in derivs])
        us, ds = cache[l]
        vals = []
        ok = True
        for num, den in us:
            dv = den.evaluate(pt)
            if l.is_zero(dv):
                ok = False
                break
            vals.append(l.mul(num.evaluate(pt), l.inv(dv)))
        if not ok:
            continue
        jac = []
        for row in ds:
            jrow = []
            for num, den in row:
                dv = den.evaluate(pt)
                if l.is_zero(dv):
                    ok = False
                    break
                jrow.append(l.mul(num.evaluate(pt), l.inv(dv)))
            if not ok:
                break
            jac.append(jrow)
        if not ok or rank(l, jac) < s:
            continue
        return EtalePoint(l, pt, tuple(vals), jac, d)
    raise NoEtalePointFound(f"no etale point of degree <= {max_degree}")


def build_pfister_certificate(u: Sequence[Element], profile: BaseFieldProfile,
                              max_degree: int = 3, check_jacobian: bool = True) -> AnisotropyCertificate:
    """Certificate that seed (x) <<u_1 - c_1, ..., u_s - c_s>> is anisotropic over Kl."""
    K = _ambient(u)
    if K.characteristic == 2:
        raise CharacteristicTwo("Pfister certificates need characteristic != 2")
    if check_jacobian:
        jr = jacobian_rank(u)
        if jr.verdict == DEPENDENT:
            raise NotIndependent(jr.reason)
        if jr.verdict == INCONCLUSIVE:
            raise Inconclusive(jr.reason)
    pt = find_etale_point(u, max_degree)
    l = pt.l
    L = extend_scalars(K, l) if isinstance(l, FiniteField) else K
    center = Center.make(L, pt.point, l)
    params = []
    for x, c in zip(u, pt.values):
        xl = coerce_rf(x, L) if L != K else x
        params.append(xl - L.convert(Element(l, c)))
    cert = AnisotropyCertificate(L, center, profile.seed_form(l), tuple(params),
                                 tuple(tuple(row) for row in pt.jacobian))
    v = certificate_validate(cert)
    if not v.valid:
        raise InternalDisagreement(f"constructed certificate failed validation: {v.failures}")
    return cert


# -- degree-ell certificates ----------------------------------------------------------------


@dataclass
class GenFormCertificate:
    K: RationalFunctionField
    form: GenForm
    center: Center
    validation: GenFormValidation

    def to_json(self):
        return {"field": self.K.descriptor, "form": self.form.to_json(), "center": self.center.to_json(),
                "values": [list(v) for v in self.validation.values],
                "verdict": "Valid" if self.validation.valid else "Invalid"}


def coordinate_substitution(u: Sequence[Element]) -> Optional[Tuple[Tuple[int, ...], Tuple]]:
    """If u_j = t_sigma(j) + c_j with constants c_j and sigma injective, return (sigma, c)."""
    K = _ambient(u)
    sigma, consts = [], []
    for x in u:
        num, den = x.value
        if not den.is_constant() or num.total_degree() != 1:
            return None
        lin = [e for e in num.terms if sum(e) == 1]
        if len(lin) != 1 or num.terms[lin[0]] != K.base.one:
            return None
        i = lin[0].index(1)
        if i in sigma:
            return None
        sigma.append(i)
        consts.append(num.constant_coeff())
    return tuple(sigma), tuple(consts)


def build_genform_certificate(u: Sequence[Element], ell: int = 3, max_degree: int = 3) -> GenFormCertificate:
    K = _ambient(u)
    k = K.base
    p = K.characteristic
    if p and ell % p == 0:
        raise CharDivides(f"degree {ell} is divisible by the characteristic {p}")
    sub = coordinate_substitution(u)
    if sub is None:
        raise PartialSupport("degree-ell certificates are issued only for shifted coordinate tuples")
    sigma, _ = sub
    for l, d, pt in _points(k, K.nvars, max_degree):
        center = Center.make(K, pt, l)
        gens = [x - K.convert(Element(l, _value_at(x, pt, l))) for x in u]
        try:
            g = GenForm(K, ell, tuple(gens))
            v = genform_certificate(g, center)
        except BadGenerators:
            continue
        if v.valid:
            return GenFormCertificate(K, g, center, v)
    raise NoCenterFound(f"no center of degree <= {max_degree} certifies the form")


def _value_at(x: Element, pt, l):
    num, den = x.value
    return l.mul(num.evaluate(pt), l.inv(den.evaluate(pt)))


# -- dispatch --------------------------------------------------------------------------------


@dataclass
class IndependenceReport:
    verdict: str
    method: str
    methods: Tuple[str, ...]
    witness: dict = dc_field(default_factory=dict)

    def to_json(self):
        return {"verdict": self.verdict, "method": self.method, "methods": list(self.methods),
                "witness": self.witness}


def independent(u: Sequence[Element], profile: Optional[BaseFieldProfile] = None,
                max_degree: int = 3, ell: int = 3) -> IndependenceReport:
    K = _ambient(u)
    profile = profile or profile_for(K.base)
    jr = jacobian_rank(u)
    if K.characteristic != 2:
        try:
            cert = build_pfister_certificate(u, profile, max_degree, check_jacobian=False)
        except NoEtalePointFound:
            cert = None
        if cert is not None:
            if jr.verdict == DEPENDENT:
                raise InternalDisagreement("Jacobian says dependent but a certificate was built")
            v = certificate_validate(cert)
            return IndependenceReport(INDEPENDENT, "PfisterCertificate", ("Jacobian", "PfisterCertificate"),
                                      {"certificate": cert.to_json("Valid" if v.valid else "Invalid"),
                                       "jacobian": jr.to_json()})
        if jr.verdict == INDEPENDENT:
            raise Inconclusive(f"Jacobian has full rank but no etale point of degree <= {max_degree}")
        if jr.verdict == DEPENDENT:
            return IndependenceReport(DEPENDENT, "Jacobian", ("Jacobian", "PfisterCertificate"),
                                      {"jacobian": jr.to_json(),
                                       "certificate_search": f"no etale point of degree <= {max_degree}"})
        raise Inconclusive(jr.reason)

    try:
        gcert = build_genform_certificate(u, ell, max_degree)
    except PartialSupport:
        gcert = None
    if gcert is not None:
        if jr.verdict == DEPENDENT:
            raise InternalDisagreement("Jacobian says dependent but a degree-ell certificate was built")
        return IndependenceReport(INDEPENDENT, "GenFormCertificate", ("Jacobian", "GenFormCertificate"),
                                  {"certificate": gcert.to_json(), "jacobian": jr.to_json()})
    if jr.conclusive:
        return IndependenceReport(jr.verdict, "Jacobian", ("Jacobian",),
                                  {"jacobian": jr.to_json(), "certificate_search": "partial support"})
    raise Inconclusive(jr.reason)
