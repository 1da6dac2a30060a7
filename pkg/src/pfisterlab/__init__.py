"""Quadratic and generalized Pfister forms over function fields, with certificates.

Subpackages and modules:

* ``fields``, ``poly``: exact arithmetic (finite fields, Q, Q(i), rational function fields).
* ``valuations``: lexicographic valuations at a rational center.
* ``qforms``, ``genforms``: diagonal and generalized Pfister forms, isotropy, certificates.
* ``independence``: algebraic independence verdicts backed by certificates.
* ``curves``, ``census``: the curve families, S_a and S_a', and the threshold census.
* ``formula``: first-order sentences, their ASCII syntax, and a finite-field evaluator.
"""

__version__ = "0.1.0"

from .fields import (Element, Field, FiniteField, QQ, QuadraticExtension, RationalField,
                     RationalFunctionField, enumerate_field, field_make, is_square, parse_element)
from .poly import Poly, poly_discriminant, squarefree_check
