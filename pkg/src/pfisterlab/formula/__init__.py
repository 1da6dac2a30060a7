"""First-order formulas over finite fields: syntax, generators and evaluation."""

from .ast import (Add, And, Const, Eq, Exists, Forall, Formula, Implies, InSub, Mul, Neg, Not, Or,
                  Sub, Term, Var, canonical, free_vars, from_json, is_sentence, quantifier_count,
                  quantifier_depth, size, to_json)
from .evaluator import DEFAULT_BUDGET, Evaluator, estimate_cost, evaluate
from .generators import (FOLD_CEILING, gen_constants_formula, gen_finite_or_antimordellic_sentence,
                         gen_Sa_membership, gen_Sa_prime_membership, gen_trdeg_sentence)
from .parser import parse, parse_term, pretty_print

__all__ = [
    "Add", "And", "Const", "Eq", "Exists", "Forall", "Formula", "Implies", "InSub", "Mul", "Neg",
    "Not", "Or", "Sub", "Term", "Var", "canonical", "free_vars", "from_json", "is_sentence",
    "quantifier_count", "quantifier_depth", "size", "to_json", "DEFAULT_BUDGET", "Evaluator",
    "estimate_cost", "evaluate", "FOLD_CEILING", "gen_constants_formula",
    "gen_finite_or_antimordellic_sentence", "gen_Sa_membership", "gen_Sa_prime_membership",
    "gen_trdeg_sentence", "parse", "parse_term", "pretty_print",
]
