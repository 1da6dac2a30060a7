"""First-order formulas over the language of rings with a subfield predicate."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Dict, FrozenSet, Iterable, Sequence, Union


class Term:
    __slots__ = ()


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Term):
    value: int  # 0 or 1

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError("only the constants 0 and 1 exist in the language")


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Sub(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Neg(Term):
    arg: Term


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class InSub(Formula):
    arg: Term


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


Node = Union[Term, Formula]
ZERO, ONE = Const(0), Const(1)
BINARY_TERMS = (Add, Sub, Mul)
BINARY_FORMULAS = (And, Or, Implies)
QUANTIFIERS = (Exists, Forall)


# -- construction helpers ----------------------------------------------------------------


def var(name: str) -> Var:
    return Var(name)


def numeral(n: int) -> Term:
    """n as 1+1+...+1 (left associated); 0 and 1 are constants."""
    if n < 0:
        return Neg(numeral(-n))
    if n <= 1:
        return Const(n)
    t: Term = ONE
    for _ in range(n - 1):
        t = Add(t, ONE)
    return t


def power(t: Term, k: int) -> Term:
    if k < 1:
        raise ValueError("exponent must be positive")
    out = t
    for _ in range(k - 1):
        out = Mul(out, t)
    return out


def conj(parts: Sequence[Formula]) -> Formula:
    if not parts:
        return Eq(ZERO, ZERO)
    return reduce(And, parts)


def disj(parts: Sequence[Formula]) -> Formula:
    if not parts:
        return Not(Eq(ZERO, ZERO))
    return reduce(Or, parts)


def exists(names: Iterable[str], body: Formula) -> Formula:
    for n in reversed(list(names)):
        body = Exists(n, body)
    return body


def forall(names: Iterable[str], body: Formula) -> Formula:
    for n in reversed(list(names)):
        body = Forall(n, body)
    return body


def neq(a: Term, b: Term) -> Formula:
    return Not(Eq(a, b))


# -- queries -------------------------------------------------------------------------------


def children(node: Node):
    if isinstance(node, (Const, Var)):
        return ()
    if isinstance(node, (Neg, Not, InSub)):
        return (node.arg,)
    if isinstance(node, QUANTIFIERS):
        return (node.body,)
    return (node.left, node.right)


def free_vars(node: Node) -> FrozenSet[str]:
    cache: Dict[int, FrozenSet[str]] = {}

    def go(n):
        k = id(n)
        if k in cache:
            return cache[k]
        if isinstance(n, Var):
            out = frozenset((n.name,))
        elif isinstance(n, QUANTIFIERS):
            out = go(n.body) - {n.var}
        else:
            out = frozenset().union(*(go(c) for c in children(n))) if children(n) else frozenset()
        cache[k] = out
        return out

    return go(node)


def size(node: Node) -> int:
    return 1 + sum(size(c) for c in children(node))


def quantifier_count(node: Node) -> int:
    own = 1 if isinstance(node, QUANTIFIERS) else 0
    return own + sum(quantifier_count(c) for c in children(node))


def quantifier_depth(node: Node) -> int:
    own = 1 if isinstance(node, QUANTIFIERS) else 0
    return own + max((quantifier_depth(c) for c in children(node)), default=0)


def is_sentence(node: Formula) -> bool:
    return not free_vars(node)


def canonical(node: Node) -> Node:
    """Rename bound variables to _0, _1, ... in order of binding."""
    counter = [0]

    def go(n, env):
        if isinstance(n, Var):
            return Var(env.get(n.name, n.name))
        if isinstance(n, Const):
            return n
        if isinstance(n, QUANTIFIERS):
            fresh = f"_{counter[0]}"
            counter[0] += 1
            return type(n)(fresh, go(n.body, {**env, n.var: fresh}))
        return type(n)(*(go(c, env) for c in children(n)))

    return go(node, {})


def to_json(node: Node):
    if isinstance(node, Const):
        return {"op": "const", "value": node.value}
    if isinstance(node, Var):
        return {"op": "var", "name": node.name}
    if isinstance(node, QUANTIFIERS):
        return {"op": type(node).__name__.lower(), "var": node.var, "body": to_json(node.body)}
    return {"op": type(node).__name__.lower(), "args": [to_json(c) for c in children(node)]}


_OPS = {"add": Add, "sub": Sub, "neg": Neg, "mul": Mul, "eq": Eq, "insub": InSub, "not": Not,
        "and": And, "or": Or, "implies": Implies}


def from_json(doc) -> Node:
    op = doc["op"]
    if op == "const":
        return Const(doc["value"])
    if op == "var":
        return Var(doc["name"])
    if op in ("exists", "forall"):
        return (Exists if op == "exists" else Forall)(doc["var"], from_json(doc["body"]))
    return _OPS[op](*(from_json(a) for a in doc["args"]))
