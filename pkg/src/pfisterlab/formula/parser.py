"""ASCII syntax for formulas.

Grammar (whitespace is insignificant)::

    formula  := implies
    implies  := or [ "->" implies ]                     right associative
    or       := and { "|" and }
    and      := unary { "&" unary }
    unary    := "~" unary | quant | atom
    quant    := ("A" | "E") name "." formula            scope extends as far right as possible
    atom     := "InSub" "(" term ")"
              | "(" formula ")"
              | term ("=" | "!=") term
    term     := product { ("+" | "-") product }
    product  := factor { "*" factor }
    factor   := "-" factor | primary [ "^" digits ]
    primary  := digits | name | "(" term ")"
    name     := [a-z][a-z0-9_']*

Numerals n >= 2 expand to 1+1+...+1 and x^k to x*x*...*x, so the printer
never emits them. ``a != b`` is read as ``~(a=b)``.
"""

from __future__ import annotations

import re
from typing import List, Tuple

from ..errors import FormulaSyntaxError
from .ast import (Add, And, Const, Eq, Exists, Forall, Implies, InSub, Mul, Neg, Node, Not, Or,
                  Sub, Var, numeral, power)

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<quant>[AE](?=[a-z]))|(?P<insub>InSub)|(?P<name>[a-z][a-z0-9_']*)"
                    r"|(?P<op>->|!=|[-+*^=~&|().]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.lastgroup is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value) -> bool:
        kind, text, _ = self.peek()
        return kind == "op" and text == value

    def expect(self, value):
        kind, text, pos = self.peek()
        if kind == "op" and text == value:
            self.i += 1
            return
        raise FormulaSyntaxError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def fail(self, what):
        _, text, pos = self.peek()
        raise FormulaSyntaxError(f"expected {what}, found {text or 'end of input'!r}", pos)

    # formulas

    def formula(self):
        left = self.disjunction()
        if self.at("->"):
            self.i += 1
            return Implies(left, self.formula())
        return left

    def disjunction(self):
        node = self.conjunction()
        while self.at("|"):
            self.i += 1
            node = Or(node, self.conjunction())
        return node

    def conjunction(self):
        node = self.unary()
        while self.at("&"):
            self.i += 1
            node = And(node, self.unary())
        return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "~":
            self.i += 1
            return Not(self.unary())
        if kind == "quant":
            self.i += 1
            nk, name, npos = self.peek()
            if nk != "name":
                self.fail("a variable name")
            self.i += 1
            self.expect(".")
            return (Forall if text == "A" else Exists)(name, self.formula())
        return self.atom()

    def atom(self):
        kind, text, pos = self.peek()
        if kind == "insub":
            self.i += 1
            self.expect("(")
            t = self.term()
            self.expect(")")
            return InSub(t)
        if kind == "op" and text == "(":
            save = self.i
            try:
                self.i += 1
                f = self.formula()
                self.expect(")")
                if not (self.at("=") or self.at("!=") or self.at("*") or self.at("+")
                        or self.at("-") or self.at("^")):
                    return f
            except FormulaSyntaxError:
                pass
            self.i = save
        left = self.term()
        if self.at("="):
            self.i += 1
            return Eq(left, self.term())
        if self.at("!="):
            self.i += 1
            return Not(Eq(left, self.term()))
        self.fail("'=' or '!='")

    # terms

    def term(self):
        node = self.product()
        while self.at("+") or self.at("-"):
            op = self.peek()[1]
            self.i += 1
            right = self.product()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def product(self):
        node = self.factor()
        while self.at("*"):
            self.i += 1
            node = Mul(node, self.factor())
        return node

    def factor(self):
        if self.at("-"):
            self.i += 1
            return Neg(self.factor())
        base = self.primary()
        if self.at("^"):
            self.i += 1
            kind, text, pos = self.peek()
            if kind != "num" or int(text) < 1:
                self.fail("a positive exponent")
            self.i += 1
            return power(base, int(text))
        return base

    def primary(self):
        kind, text, pos = self.peek()
        if kind == "num":
            self.i += 1
            return numeral(int(text))
        if kind == "name":
            self.i += 1
            return Var(text)
        if kind == "op" and text == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        self.fail("a term")


def parse(text: str) -> Node:
    p = _Parser(text)
    node = p.formula()
    kind, tok, pos = p.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected {tok!r}", pos)
    return node


def parse_term(text: str) -> Node:
    p = _Parser(text)
    node = p.term()
    kind, tok, pos = p.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected {tok!r}", pos)
    return node


# -- printing -------------------------------------------------------------------------------

_TERM_LEVEL = {Add: 1, Sub: 1, Mul: 2, Neg: 3}
_FORM_LEVEL = {Implies: 1, Or: 2, And: 3, Not: 4}
_QUANT = (Exists, Forall)


def _term(t) -> str:
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Neg):
        inner = _term(t.arg)
        return "-" + (f"({inner})" if _TERM_LEVEL.get(type(t.arg), 4) < 3 else inner)
    lvl = _TERM_LEVEL[type(t)]
    op = {Add: "+", Sub: "-", Mul: "*"}[type(t)]
    left, right = _term(t.left), _term(t.right)
    if _TERM_LEVEL.get(type(t.left), 4) < lvl:
        left = f"({left})"
    if _TERM_LEVEL.get(type(t.right), 4) <= lvl:
        right = f"({right})"
    return left + op + right


def _child(f, ok) -> str:
    s = _formula(f)
    if isinstance(f, _QUANT) or not ok(_FORM_LEVEL.get(type(f), 5)):
        return f"({s})"
    return s


def _formula(f) -> str:
    if isinstance(f, Eq):
        return f"{_term(f.left)}={_term(f.right)}"
    if isinstance(f, InSub):
        return f"InSub({_term(f.arg)})"
    if isinstance(f, _QUANT):
        return f"{'A' if isinstance(f, Forall) else 'E'}{f.var}.{_formula(f.body)}"
    if isinstance(f, Not):
        if isinstance(f.arg, Eq):
            return f"~({_formula(f.arg)})"
        return "~" + _child(f.arg, lambda lv: lv >= 4)
    lvl = _FORM_LEVEL[type(f)]
    op = {Implies: "->", Or: "|", And: "&"}[type(f)]
    if isinstance(f, Implies):
        left = _child(f.left, lambda lv: lv > lvl)
        right = _child(f.right, lambda lv: lv >= lvl)
    else:
        left = _child(f.left, lambda lv: lv >= lvl)
        right = _child(f.right, lambda lv: lv > lvl)
    return f"{left} {op} {right}"


def pretty_print(node: Node) -> str:
    from .ast import Term

    if isinstance(node, Term):
        return _term(node)
    return _formula(node)
