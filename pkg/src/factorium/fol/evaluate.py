"""Truth of first-order formulas in finite algebras.

Formulas are compiled to closures over a flat slot array; quantified
subformulas cache their value keyed by the values of their free variables.
"""
from __future__ import annotations

import itertools
from typing import Mapping, Sequence

from ..terms import compile_term, variables
from .formula import And, Eq, Exists, Forall, Formula, Implies, Not, Or, free_vars, to_text

DEFAULT_BUDGET = 10**9


class EvaluationError(ValueError):
    pass


class BudgetExceeded(EvaluationError):
    def __init__(self, estimate, budget, subformula=None, what="work"):
        self.estimate = estimate
        self.budget = budget
        self.subformula = subformula
        if subformula is not None:
            text = to_text(subformula)
            if len(text) > 200:
                text = text[:197] + "..."
            where = f" at {text}"
        else:
            where = f" ({what})"
        super().__init__(f"estimated work {estimate:.3g} exceeds budget {budget:.3g}{where}")


def estimate(phi: Formula, size: int) -> float:
    """Upper bound on atomic evaluations without caching: size^depth growth."""
    if isinstance(phi, Eq):
        return 1.0
    if isinstance(phi, Not):
        return estimate(phi.body, size)
    if isinstance(phi, (And, Or)):
        return float(sum(estimate(p, size) for p in phi.parts)) or 1.0
    if isinstance(phi, Implies):
        return estimate(phi.lhs, size) + estimate(phi.rhs, size)
    return size * estimate(phi.body, size)


def _over_budget(phi: Formula, size: int, budget: float) -> Formula | None:
    """Smallest subformula whose estimate exceeds the budget, if any."""
    if estimate(phi, size) <= budget:
        return None
    children = ()
    if isinstance(phi, Not):
        children = (phi.body,)
    elif isinstance(phi, (And, Or)):
        children = phi.parts
    elif isinstance(phi, Implies):
        children = (phi.lhs, phi.rhs)
    elif isinstance(phi, (Forall, Exists)):
        children = (phi.body,)
    for c in children:
        sub = _over_budget(c, size, budget)
        if sub is not None:
            return sub
    return phi


def check_budget(phi: Formula, size: int, budget: float = DEFAULT_BUDGET):
    if budget is None:
        return
    bad = _over_budget(phi, size, budget)
    if bad is not None:
        raise BudgetExceeded(estimate(bad, size), budget, bad)


class _Compiler:
    def __init__(self, A, cache: bool):
        self.A = A
        self.cache = cache
        self.nslots = 0

    def new_slot(self) -> int:
        self.nslots += 1
        return self.nslots - 1

    def build(self, phi, scope):
        """Return (closure, set of slots the closure reads)."""
        if isinstance(phi, Eq):
            f = compile_term(self.A, phi.lhs, scope)
            g = compile_term(self.A, phi.rhs, scope)
            used = {scope[v] for v in variables(phi.lhs) | variables(phi.rhs)}
            return (lambda v: f(v) == g(v)), used
        if isinstance(phi, Not):
            f, used = self.build(phi.body, scope)
            return (lambda v: not f(v)), used
        if isinstance(phi, (And, Or)):
            built = [self.build(p, scope) for p in phi.parts]
            fs = [b[0] for b in built]
            used = set().union(*(b[1] for b in built)) if built else set()
            if isinstance(phi, And):
                return (lambda v: all(f(v) for f in fs)), used
            return (lambda v: any(f(v) for f in fs)), used
        if isinstance(phi, Implies):
            f, u1 = self.build(phi.lhs, scope)
            g, u2 = self.build(phi.rhs, scope)
            return (lambda v: not f(v) or g(v)), u1 | u2
        if isinstance(phi, (Forall, Exists)):
            s = self.new_slot()
            body, used = self.build(phi.body, {**scope, phi.var: s})
            used = used - {s}
            universe = range(self.A.size)
            want = isinstance(phi, Exists)

            def run(v):
                for a in universe:
                    v[s] = a
                    if body(v) == want:
                        return want
                return not want

            if not self.cache:
                return run, used
            key_slots = tuple(sorted(used))
            memo: dict = {}

            def cached(v):
                key = tuple([v[k] for k in key_slots])
                r = memo.get(key)
                if r is None:
                    r = memo[key] = run(v)
                return r

            return cached, used
        raise TypeError(f"not a formula: {phi!r}")


class CompiledFormula:
    """A formula bound to one algebra and an ordered list of free variables.

    Calls are pure; the cache of quantified subformulas is kept between calls.
    """

    def __init__(self, A, phi: Formula, order: Sequence[str] | None = None,
                 budget: float | None = DEFAULT_BUDGET, cache: bool = True):
        fv = free_vars(phi)
        order = sorted(fv) if order is None else list(order)
        missing = fv - set(order)
        if missing:
            raise EvaluationError(f"unbound free variables {sorted(missing)}")
        check_budget(phi, A.size, budget)
        self.A, self.phi, self.order = A, phi, order
        comp = _Compiler(A, cache)
        comp.nslots = len(order)
        self._fn, _ = comp.build(phi, {v: i for i, v in enumerate(order)})
        self._nslots = comp.nslots

    def __call__(self, *values) -> bool:
        if len(values) != len(self.order):
            raise EvaluationError(f"expected {len(self.order)} values, got {len(values)}")
        v = [0] * self._nslots
        for i, x in enumerate(values):
            x = int(x)
            if not 0 <= x < self.A.size:
                raise EvaluationError(f"element {x} out of range")
            v[i] = x
        return bool(self._fn(v))


def compile_formula(A, phi: Formula, order: Sequence[str] | None = None,
                    budget: float | None = DEFAULT_BUDGET) -> CompiledFormula:
    return CompiledFormula(A, phi, order, budget)


def eval_formula(A, phi: Formula, env: Mapping[str, int] | None = None,
                 budget: float | None = DEFAULT_BUDGET) -> bool:
    """Tarskian truth of phi in A under env (free variable -> element)."""
    env = dict(env or {})
    order = sorted(env)
    return CompiledFormula(A, phi, order, budget)(*[env[v] for v in order])


def satisfying_assignments(A, phi: Formula, order: Sequence[str], budget=DEFAULT_BUDGET):
    """All tuples (in the given variable order) that satisfy phi."""
    f = CompiledFormula(A, phi, order, budget)
    return [t for t in itertools.product(range(A.size), repeat=len(order)) if f(*t)]
