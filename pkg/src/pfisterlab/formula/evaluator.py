"""Exhaustive model checking of formulas over finite fields.

The formula is put in negation normal form (Forall as not-Exists-not, with
negations pushed onto atoms and existential blocks). Each existential block
is compiled to a plan:

* conjuncts are checked as soon as their variables are bound, cheapest first;
* a conjunct ``v = t`` with ``t`` already computable binds ``v`` directly;
* variables that no longer share a conjunct are searched independently;
* the remaining variables are enumerated over the field.

Every plan carries a cost, an upper bound on the enumeration work that
ignores short-circuiting and memoization. Blocks with at most three free
variables are memoized on their values. Closed subformulas whose own cost is
at most ``GUARD_LIMIT`` are decided while compiling, so a branch guarded by a
false closed condition contributes nothing to the estimate. ``evaluate``
refuses formulas whose estimate exceeds the budget and also stops when the
number of enumerated assignments passes it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Tuple

from ..errors import BudgetExceeded, InfiniteField, UnboundVariable
from ..fields import Element, Field, FiniteField, field_make
from .ast import (Add, And, Const, Eq, Exists, Forall, Implies, InSub, Mul, Neg, Node, Not, Or,
                  Sub, Var)

DEFAULT_BUDGET = 10 ** 14
GUARD_LIMIT = 10 ** 6
MEMO_MAX_FREE = 3
TABLE_MAX_Q = 256

_MISSING = object()


# -- normal form --------------------------------------------------------------------------------


class _Atom:
    __slots__ = ("kind", "left", "right", "positive", "fv")

    def __init__(self, kind, left, right, positive):
        self.kind, self.left, self.right, self.positive = kind, left, right, positive
        self.fv = _term_vars(left) | (_term_vars(right) if right is not None else frozenset())


class _Junct:
    __slots__ = ("conj", "items", "fv")

    def __init__(self, conj: bool, items):
        flat = []
        for it in items:
            if isinstance(it, _Junct) and it.conj == conj:
                flat.extend(it.items)
            else:
                flat.append(it)
        self.conj, self.items = conj, flat
        self.fv = frozenset().union(*(i.fv for i in flat))


class _Block:
    """``exists vars . and(body)`` when positive, its negation otherwise."""

    __slots__ = ("vars", "body", "positive", "fv")

    def __init__(self, vars_, body, positive):
        self.vars, self.body, self.positive = tuple(vars_), list(body), positive
        self.fv = frozenset().union(*(b.fv for b in body)) - set(vars_) if body else frozenset()


_TV_CACHE: Dict[int, Tuple[Node, FrozenSet[str]]] = {}


def _term_vars(t) -> FrozenSet[str]:
    if t is None:
        return frozenset()
    hit = _TV_CACHE.get(id(t))
    if hit is not None and hit[0] is t:
        return hit[1]
    if isinstance(t, Var):
        out = frozenset((t.name,))
    elif isinstance(t, Const):
        out = frozenset()
    elif isinstance(t, Neg):
        out = _term_vars(t.arg)
    else:
        out = _term_vars(t.left) | _term_vars(t.right)
    if len(_TV_CACHE) > 200000:
        _TV_CACHE.clear()
    _TV_CACHE[id(t)] = (t, out)
    return out


def _term_size(t) -> int:
    if isinstance(t, (Var, Const)):
        return 1
    if isinstance(t, Neg):
        return 1 + _term_size(t.arg)
    return 1 + _term_size(t.left) + _term_size(t.right)


class _Normalizer:
    def __init__(self):
        self.cache: Dict[Tuple[int, bool], Tuple[Node, object]] = {}

    def __call__(self, node, positive=True):
        key = (id(node), positive)
        hit = self.cache.get(key)
        if hit is not None and hit[0] is node:
            return hit[1]
        out = self._norm(node, positive)
        self.cache[key] = (node, out)
        return out

    def _conjuncts(self, node, positive):
        n = self(node, positive)
        return n.items if isinstance(n, _Junct) and n.conj else [n]

    def _norm(self, f, pos):
        if isinstance(f, Eq):
            return _Atom("eq", f.left, f.right, pos)
        if isinstance(f, InSub):
            return _Atom("in", f.arg, None, pos)
        if isinstance(f, Not):
            return self(f.arg, not pos)
        if isinstance(f, (And, Or)):
            conj = isinstance(f, And) == pos
            return _Junct(conj, [self(f.left, pos), self(f.right, pos)])
        if isinstance(f, Implies):
            return _Junct(not pos, [self(f.left, not pos), self(f.right, pos)])
        if isinstance(f, (Exists, Forall)):
            kind = type(f)
            names, body = [f.var], f.body
            while isinstance(body, kind) and body.var not in names:
                names.append(body.var)
                body = body.body
            if kind is Exists:
                return _Block(names, self._conjuncts(body, True), pos)
            return _Block(names, self._conjuncts(body, False), not pos)
        raise TypeError(f"not a formula: {f!r}")


# -- compilation ----------------------------------------------------------------------------------


@dataclass
class Compiled:
    run: Callable[[dict], bool]
    cost: float
    fv: FrozenSet[str]


def _and_chain(fns):
    if not fns:
        return lambda env: True
    out = fns[-1]
    for f in reversed(fns[:-1]):
        out = (lambda a, b: lambda env: a(env) and b(env))(f, out)
    return out


def _or_chain(fns):
    if not fns:
        return lambda env: False
    out = fns[-1]
    for f in reversed(fns[:-1]):
        out = (lambda a, b: lambda env: a(env) or b(env))(f, out)
    return out


class Evaluator:
    """Compiles and evaluates formulas over one finite field."""

    def __init__(self, structure, subfield=None, budget: float = DEFAULT_BUDGET):
        F = field_make(structure) if isinstance(structure, str) else structure
        if not isinstance(F, Field) or not F.is_finite:
            raise InfiniteField(f"formulas are evaluated over finite fields only, not {F}")
        self.F = F
        self.q = F.order
        self.elements = tuple(F.raw_elements())
        self.budget = budget
        self.work = 0
        self.subfield = self._subfield(subfield)
        self._ops()
        self._norm = _Normalizer()
        self._compiled: Dict[int, Tuple[object, Compiled]] = {}

    # field plumbing

    def _subfield(self, spec) -> FrozenSet:
        F = self.F
        if spec is None:
            return frozenset(F.from_int(k) for k in range(F.characteristic))
        if isinstance(spec, int):
            if not isinstance(F, FiniteField) or F.n % spec:
                raise ValueError(f"GF(p^{spec}) is not a subfield of {F}")
            qd = F.p ** spec
            return frozenset(x for x in self.elements if F.pow(x, qd) == x)
        return frozenset(F.convert(v).value for v in spec)

    def _ops(self):
        F = self.F
        if isinstance(F, FiniteField) and F.n == 1:
            p = F.p
            self.add = lambda a, b: (a + b) % p
            self.sub = lambda a, b: (a - b) % p
            self.mul = lambda a, b: (a * b) % p
            self.neg = lambda a: (-a) % p
        elif self.q <= TABLE_MAX_Q:
            els = self.elements
            A = [[F.add(x, y) for y in els] for x in els]
            S = [[F.sub(x, y) for y in els] for x in els]
            M = [[F.mul(x, y) for y in els] for x in els]
            N = [F.neg(x) for x in els]
            self.add = lambda a, b: A[a][b]
            self.sub = lambda a, b: S[a][b]
            self.mul = lambda a, b: M[a][b]
            self.neg = lambda a: N[a]
        else:
            self.add, self.sub, self.mul, self.neg = F.add, F.sub, F.mul, F.neg

    def _count(self, n):
        self.work += n
        if self.work > self.budget:
            raise BudgetExceeded(f"enumeration passed the budget of {self.budget:.3g} assignments")

    # terms

    def term(self, t):
        """(fn, cost, constant-or-None)."""
        if isinstance(t, Const):
            v = self.F.from_int(t.value)
            return (lambda env: v), 1, v
        if isinstance(t, Var):
            name = t.name
            return (lambda env: env[name]), 1, None
        if isinstance(t, Neg):
            f, c, k = self.term(t.arg)
            if k is not None:
                v = self.neg(k)
                return (lambda env: v), 1, v
            neg = self.neg
            return (lambda env: neg(f(env))), c + 1, None
        op = {Add: self.add, Sub: self.sub, Mul: self.mul}[type(t)]
        lf, lc, lk = self.term(t.left)
        rf, rc, rk = self.term(t.right)
        if lk is not None and rk is not None:
            v = op(lk, rk)
            return (lambda env: v), 1, v
        if lk is not None:
            return (lambda env: op(lk, rf(env))), lc + rc + 1, None
        if rk is not None:
            return (lambda env: op(lf(env), rk)), lc + rc + 1, None
        return (lambda env: op(lf(env), rf(env))), lc + rc + 1, None

    # formulas

    def compile(self, node) -> Compiled:
        """Compile a formula (AST or normal form) without running it."""
        if isinstance(node, Node.__args__):
            node = self._norm(node)
        hit = self._compiled.get(id(node))
        if hit is not None and hit[0] is node:
            return hit[1]
        if isinstance(node, _Atom):
            out = self._atom(node)
        elif isinstance(node, _Junct):
            out = self._junct(node)
        else:
            out = self._block(node)
        self._compiled[id(node)] = (node, out)
        return out

    def _atom(self, a: _Atom) -> Compiled:
        pos = a.positive
        if a.kind == "in":
            f, c, k = self.term(a.left)
            S = self.subfield
            if k is not None:
                v = (k in S) == pos
                return Compiled(lambda env: v, 1, frozenset())
            if pos:
                return Compiled(lambda env: f(env) in S, c + 1, a.fv)
            return Compiled(lambda env: f(env) not in S, c + 1, a.fv)
        lf, lc, lk = self.term(a.left)
        rf, rc, rk = self.term(a.right)
        cost = lc + rc + 1
        if lk is not None and rk is not None:
            v = (lk == rk) == pos
            return Compiled(lambda env: v, 1, frozenset())
        if rk is not None:
            fn = (lambda env: lf(env) == rk) if pos else (lambda env: lf(env) != rk)
        elif lk is not None:
            fn = (lambda env: rf(env) == lk) if pos else (lambda env: rf(env) != lk)
        elif pos:
            fn = lambda env: lf(env) == rf(env)
        else:
            fn = lambda env: lf(env) != rf(env)
        return Compiled(fn, cost, a.fv)

    def _guard(self, c: Compiled) -> Optional[bool]:
        if c.fv or c.cost > GUARD_LIMIT:
            return None
        return bool(c.run({}))

    def _junct(self, j: _Junct) -> Compiled:
        parts = [self.compile(i) for i in j.items]
        spent = 0.0
        live = []
        for c in parts:
            g = self._guard(c)
            if g is None:
                live.append(c)
                continue
            spent += c.cost
            if g != j.conj:
                return Compiled(lambda env, v=g: v, spent, frozenset())
        live.sort(key=lambda c: c.cost)
        fns = [c.run for c in live]
        run = _and_chain(fns) if j.conj else _or_chain(fns)
        return Compiled(run, spent + sum(c.cost for c in live), j.fv)

    def _block(self, b: _Block) -> Compiled:
        conj = [(item, self.compile(item)) for item in b.body]
        run, cost = self._plan(list(b.vars), conj, b.fv)
        if len(b.fv) <= MEMO_MAX_FREE:
            run = self._memo(run, sorted(b.fv))
        if not b.positive:
            inner = run
            run = lambda env: not inner(env)
        return Compiled(run, cost, b.fv)

    @staticmethod
    def _memo(run, keys):
        memo: Dict = {}
        if not keys:
            def go(env):
                if () not in memo:
                    memo[()] = run(env)
                return memo[()]
            return go
        if len(keys) == 1:
            (k0,) = keys

            def go(env):
                key = env[k0]
                r = memo.get(key)
                if r is None:
                    r = memo[key] = run(env)
                return r
            return go

        def go(env):
            key = tuple(env[k] for k in keys)
            r = memo.get(key)
            if r is None:
                r = memo[key] = run(env)
            return r
        return go

    # existential planning

    def _plan(self, V: List[str], conj, bound: FrozenSet[str]):
        R = set(V)
        checks = [c for item, c in conj if not (item.fv & R)]
        rest = [(item, c) for item, c in conj if item.fv & R]
        checks.sort(key=lambda c: c.cost)
        check_cost = sum(c.cost for c in checks)
        if not rest:
            return _and_chain([c.run for c in checks]), check_cost
        live = [v for v in V if any(v in item.fv for item, _ in rest)]
        comps = self._components(live, rest)
        if len(comps) > 1:
            subs = [self._plan(cv, cc, bound) for cv, cc in comps]
            tail = _and_chain([s[0] for s in sorted(subs, key=lambda s: s[1])])
            tail_cost = sum(s[1] for s in subs)
        else:
            tail, tail_cost = self._step(live, rest, bound)
        return _and_chain([c.run for c in checks] + [tail]), check_cost + tail_cost

    @staticmethod
    def _components(V, rest):
        parent = {v: v for v in V}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        Vs = set(V)
        for item, _ in rest:
            vs = [v for v in item.fv if v in Vs]
            for v in vs[1:]:
                parent[find(v)] = find(vs[0])
        groups: Dict[str, List[str]] = {}
        for v in V:
            groups.setdefault(find(v), []).append(v)
        out = []
        for root, vs in groups.items():
            s = set(vs)
            out.append((vs, [(i, c) for i, c in rest if i.fv & s]))
        return out

    @staticmethod
    def _let_of(item, R):
        if not (isinstance(item, _Atom) and item.kind == "eq" and item.positive):
            return None
        for side, other in ((item.left, item.right), (item.right, item.left)):
            if isinstance(side, Var) and side.name in R and not (_term_vars(other) & R):
                return side.name, other
        return None

    def _step(self, V, rest, bound):
        R = set(V)
        for idx, (item, _) in enumerate(rest):
            let = self._let_of(item, R)
            if let is None:
                continue
            v, t = let
            tf, tc, _ = self.term(t)
            nxt, ncost = self._plan([x for x in V if x != v], rest[:idx] + rest[idx + 1:], bound | {v})
            return self._let(v, tf, nxt), tc + 1 + ncost
        v = self._choose(V, rest)
        nxt, ncost = self._plan([x for x in V if x != v], rest, bound | {v})
        return self._loop(v, nxt), self.q * (1 + ncost)

    def _choose(self, V, rest):
        R = set(V)
        best, best_key = None, None
        for order, v in enumerate(V):
            left = R - {v}
            ready = sum(1 for item, _ in rest if v in item.fv and not (item.fv & left))
            lets = sum(1 for item, _ in rest if v in item.fv and self._let_of(item, left) is not None)
            uses = sum(1 for item, _ in rest if v in item.fv)
            key = (ready + lets, uses, -order)
            if best_key is None or key > best_key:
                best, best_key = v, key
        return best

    @staticmethod
    def _let(v, tf, nxt):
        def go(env):
            old = env.get(v, _MISSING)
            env[v] = tf(env)
            r = nxt(env)
            if old is _MISSING:
                del env[v]
            else:
                env[v] = old
            return r
        return go

    def _loop(self, v, nxt):
        elements = self.elements
        count = self._count

        def go(env):
            old = env.get(v, _MISSING)
            n = 0
            found = False
            for x in elements:
                n += 1
                env[v] = x
                if nxt(env):
                    found = True
                    break
            if old is _MISSING:
                del env[v]
            else:
                env[v] = old
            count(n)
            return found
        return go

    # entry points

    def estimate(self, phi: Node) -> float:
        return self.compile(phi).cost

    def evaluate(self, phi: Node, assignment: Optional[Mapping[str, object]] = None) -> bool:
        env = {k: self.F.convert(v).value if not isinstance(v, int) or isinstance(v, bool)
               else self.F.from_int(v) for k, v in (assignment or {}).items()}
        norm = self._norm(phi)
        missing = sorted(norm.fv - set(env))
        if missing:
            raise UnboundVariable(f"free variables without a value: {', '.join(missing)}")
        c = self.compile(norm)
        if c.cost > self.budget:
            raise BudgetExceeded(f"estimated cost {c.cost:.3g} exceeds the budget of {self.budget:.3g}")
        return bool(c.run(env))


def evaluate(phi: Node, structure, assignment: Optional[Mapping[str, object]] = None,
             budget: float = DEFAULT_BUDGET, subfield=None) -> bool:
    """Truth value of ``phi`` over a finite field under ``assignment``."""
    return Evaluator(structure, subfield=subfield, budget=budget).evaluate(phi, assignment)


def estimate_cost(phi: Node, structure, subfield=None) -> float:
    return Evaluator(structure, subfield=subfield, budget=float("inf")).estimate(phi)
