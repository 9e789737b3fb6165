"""Empirical checks that a formula is preserved by products and by factors."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from ..algebra import Algebra, direct_product
from .evaluate import DEFAULT_BUDGET, CompiledFormula
from .formula import Formula, free_vars


@dataclass
class PreservationReport:
    direction: str  # "product" or "factor"
    variables: list[str]
    checked: int
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self):
        return {"direction": self.direction, "variables": self.variables, "checked": self.checked,
                "ok": self.ok,
                "counterexamples": [{"a": list(a), "b": list(b), "A": ta, "B": tb, "AxB": tp}
                                    for a, b, ta, tb, tp in self.counterexamples]}


def _pairs(A, B, k, tuples):
    if tuples is not None:
        return [(tuple(a), tuple(b)) for a, b in tuples]
    return itertools.product(itertools.product(range(A.size), repeat=k),
                             itertools.product(range(B.size), repeat=k))


def _run(phi, A, B, order, tuples, budget, direction, limit):
    order = sorted(free_vars(phi)) if order is None else list(order)
    P = direct_product([A, B])
    fa = CompiledFormula(A, phi, order, budget)
    fb = CompiledFormula(B, phi, order, budget)
    fp = CompiledFormula(P, phi, order, budget)
    ta_cache, tb_cache = {}, {}
    bad, n = [], 0
    for a, b in _pairs(A, B, len(order), tuples):
        n += 1
        ta = ta_cache[a] if a in ta_cache else ta_cache.setdefault(a, fa(*a))
        tb = tb_cache[b] if b in tb_cache else tb_cache.setdefault(b, fb(*b))
        if direction == "product" and not (ta and tb):
            continue
        tp = fp(*[P.element(x, y) for x, y in zip(a, b)])
        if direction == "product" and not tp:
            bad.append((a, b, ta, tb, tp))
        elif direction == "factor" and tp and not (ta and tb):
            bad.append((a, b, ta, tb, tp))
        if limit is not None and len(bad) >= limit:
            break
    return PreservationReport(direction, order, n, bad)


def check_product_preservation(phi: Formula, A: Algebra, B: Algebra, order: Sequence[str] | None = None,
                               tuples=None, budget=DEFAULT_BUDGET, limit: int | None = None):
    """Counterexamples to A |= phi(a) and B |= phi(b) => AxB |= phi([a, b]).

    Exhaustive over A^k x B^k unless tuples (pairs (a, b)) are supplied.
    """
    return _run(phi, A, B, order, tuples, budget, "product", limit)


def check_factor_preservation(phi: Formula, A: Algebra, B: Algebra, order: Sequence[str] | None = None,
                              tuples=None, budget=DEFAULT_BUDGET, limit: int | None = None):
    """Counterexamples to AxB |= phi([a, b]) => A |= phi(a) and B |= phi(b)."""
    return _run(phi, A, B, order, tuples, budget, "factor", limit)
