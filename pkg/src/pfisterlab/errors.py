"""Exception hierarchy shared by every module of the toolkit."""


class PfisterLabError(Exception):
    """Base class for all toolkit errors."""


# field_core

class FieldError(PfisterLabError):
    pass


class DescriptorError(FieldError, ValueError):
    """Malformed field descriptor or element text."""


class NotPrime(FieldError, ValueError):
    pass


class ReducibleModulus(FieldError, ValueError):
    pass


class SquareAdjunction(FieldError, ValueError):
    """The adjoined element is already a square in the base field."""


class UnsupportedField(FieldError):
    pass


class InfiniteField(FieldError):
    pass


class ZeroDerivative(FieldError, ValueError):
    pass


class FieldMismatch(FieldError, TypeError):
    pass


# valuations

class ValuationError(PfisterLabError):
    pass


class ZeroInput(ValuationError, ValueError):
    pass


class NotAUnit(ValuationError, ValueError):
    pass


class BadCenter(ValuationError, ValueError):
    pass


# qforms / genforms

class FormError(PfisterLabError):
    pass


class ZeroSlot(FormError, ValueError):
    pass


class DimensionMismatch(FormError, ValueError):
    pass


class EvenDegree(FormError, ValueError):
    pass


class NotAZero(FormError, ValueError):
    pass


class CharDivides(FormError, ValueError):
    pass


class BadGenerators(FormError, ValueError):
    pass


class CertificateFailure(FormError):
    """A certificate check did not pass."""


class ResidueIsotropic(CertificateFailure):
    pass


class NotVanishing(CertificateFailure):
    pass


class RankDeficient(CertificateFailure):
    pass


class CharacteristicTwo(FormError, ValueError):
    """Quadratic-form operations are not defined in characteristic 2."""


# independence

class IndependenceError(PfisterLabError):
    pass


class NotWellBehaved(IndependenceError):
    pass


class Inconclusive(IndependenceError):
    pass


class NoEtalePointFound(IndependenceError):
    pass


class NotIndependent(IndependenceError):
    pass


class NoCenterFound(IndependenceError):
    pass


class PartialSupport(IndependenceError):
    pass


class InternalDisagreement(IndependenceError):
    pass


# curves

class CurveError(PfisterLabError):
    pass


class CharMismatch(CurveError, ValueError):
    pass


class BasePointMissing(CurveError):
    pass


class ScanCeilingExceeded(CurveError):
    pass


class NotFound(CurveError):
    pass


# formula_dsl

class FormulaError(PfisterLabError):
    pass


class BudgetExceeded(FormulaError):
    pass


class UnboundVariable(FormulaError, NameError):
    pass


class FoldCeiling(FormulaError, ValueError):
    pass


class FormulaSyntaxError(FormulaError, SyntaxError):
    """Parse failure; ``position`` is the 0-based character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position
