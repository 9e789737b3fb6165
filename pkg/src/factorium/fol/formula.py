"""First-order formulas over equality and terms.

Text syntax (s-expressions whose atoms are terms in prefix syntax)::

    formula := '(' body ')' | 'forall' vars formula | 'exists' vars formula
             | 'true' | 'false'
    body    := 'forall' vars formula | 'exists' vars formula
             | 'and' formula* | 'or' formula* | 'not' formula
             | '->' formula formula | '=' term term
    vars    := name | '(' name+ ')'

Example: ``forall u (-> (and (= join(x,u) join(y,u))) (= x y))``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ..terms import (Term, TermSyntaxError, Var, _TermParser, substitute as term_subst, tokenize,
                     variables)


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple = ()


@dataclass(frozen=True)
class Or:
    parts: tuple = ()


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Eq | Not | And | Or | Implies | Forall | Exists
TRUE = And(())
FALSE = Or(())


def conj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else And(parts)


def disj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else Or(parts)


def forall(names: Sequence[str], body: Formula) -> Formula:
    for v in reversed(list(names)):
        body = Forall(v, body)
    return body


def exists(names: Sequence[str], body: Formula) -> Formula:
    for v in reversed(list(names)):
        body = Exists(v, body)
    return body


def eq(lhs, rhs) -> Eq:
    return Eq(_as_term(lhs), _as_term(rhs))


def _as_term(t):
    return Var(t) if isinstance(t, str) else t


def free_vars(phi: Formula) -> set[str]:
    if isinstance(phi, Eq):
        return variables(phi.lhs) | variables(phi.rhs)
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or)):
        out = set()
        for p in phi.parts:
            out |= free_vars(p)
        return out
    if isinstance(phi, Implies):
        return free_vars(phi.lhs) | free_vars(phi.rhs)
    if isinstance(phi, (Forall, Exists)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def all_vars(phi: Formula) -> set[str]:
    if isinstance(phi, Eq):
        return variables(phi.lhs) | variables(phi.rhs)
    if isinstance(phi, Not):
        return all_vars(phi.body)
    if isinstance(phi, (And, Or)):
        out = set()
        for p in phi.parts:
            out |= all_vars(p)
        return out
    if isinstance(phi, Implies):
        return all_vars(phi.lhs) | all_vars(phi.rhs)
    return all_vars(phi.body) | {phi.var}


def quantifier_depth(phi: Formula) -> int:
    if isinstance(phi, Eq):
        return 0
    if isinstance(phi, Not):
        return quantifier_depth(phi.body)
    if isinstance(phi, (And, Or)):
        return max((quantifier_depth(p) for p in phi.parts), default=0)
    if isinstance(phi, Implies):
        return max(quantifier_depth(phi.lhs), quantifier_depth(phi.rhs))
    return 1 + quantifier_depth(phi.body)


def size(phi: Formula) -> int:
    if isinstance(phi, Eq):
        return 1
    if isinstance(phi, Not):
        return 1 + size(phi.body)
    if isinstance(phi, (And, Or)):
        return 1 + sum(size(p) for p in phi.parts)
    if isinstance(phi, Implies):
        return 1 + size(phi.lhs) + size(phi.rhs)
    return 1 + size(phi.body)


def _fresh(base: str, avoid: set[str]) -> str:
    for i in itertools.count(1):
        cand = f"{base}_{i}"
        if cand not in avoid:
            return cand


def substitute(phi: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Capture-avoiding simultaneous substitution of terms for free variables."""
    mapping = {k: _as_term(v) for k, v in mapping.items()}
    if isinstance(phi, Eq):
        return Eq(term_subst(phi.lhs, mapping), term_subst(phi.rhs, mapping))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, mapping))
    if isinstance(phi, And):
        return And(tuple(substitute(p, mapping) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(substitute(p, mapping) for p in phi.parts))
    if isinstance(phi, Implies):
        return Implies(substitute(phi.lhs, mapping), substitute(phi.rhs, mapping))
    v = phi.var
    inner = {k: t for k, t in mapping.items() if k != v}
    fb = free_vars(phi.body)
    inner = {k: t for k, t in inner.items() if k in fb}
    if not inner:
        return phi
    incoming = set()
    for t in inner.values():
        incoming |= variables(t)
    if v in incoming:
        new = _fresh(v, incoming | all_vars(phi.body) | set(inner))
        body = substitute(phi.body, {v: Var(new)})
        v = new
    else:
        body = phi.body
    return type(phi)(v, substitute(body, inner))


def rename_free(phi: Formula, mapping: Mapping[str, str]) -> Formula:
    return substitute(phi, {k: Var(v) for k, v in mapping.items()})


def to_text(phi: Formula) -> str:
    if isinstance(phi, Eq):
        return f"(= {phi.lhs} {phi.rhs})"
    if isinstance(phi, Not):
        return f"(not {to_text(phi.body)})"
    if isinstance(phi, And):
        return "true" if not phi.parts else "(and " + " ".join(to_text(p) for p in phi.parts) + ")"
    if isinstance(phi, Or):
        return "false" if not phi.parts else "(or " + " ".join(to_text(p) for p in phi.parts) + ")"
    if isinstance(phi, Implies):
        return f"(-> {to_text(phi.lhs)} {to_text(phi.rhs)})"
    kw = "forall" if isinstance(phi, Forall) else "exists"
    names = [phi.var]
    body = phi.body
    while isinstance(body, type(phi)):
        names.append(body.var)
        body = body.body
    vs = names[0] if len(names) == 1 else "(" + " ".join(names) + ")"
    return f"({kw} {vs} {to_text(body)})"


def prefix_string(phi: Formula) -> str:
    """Leading quantifier prefix, e.g. 'EAEA' for exists-forall-exists-forall."""
    out = []
    while isinstance(phi, (Forall, Exists)):
        out.append("A" if isinstance(phi, Forall) else "E")
        phi = phi.body
    return "".join(out)


def classify(phi: Formula) -> dict:
    """Syntactic tags: positive (no negation / implication) and existential."""
    def positive(f):
        if isinstance(f, Eq):
            return True
        if isinstance(f, (Not, Implies)):
            return False
        if isinstance(f, (And, Or)):
            return all(positive(p) for p in f.parts)
        return positive(f.body)

    def existential(f, neg=False):
        # existential: in negation normal form, no universal quantifier
        if isinstance(f, Eq):
            return True
        if isinstance(f, Not):
            return existential(f.body, not neg)
        if isinstance(f, (And, Or)):
            return all(existential(p, neg) for p in f.parts)
        if isinstance(f, Implies):
            return existential(f.lhs, not neg) and existential(f.rhs, neg)
        universal = isinstance(f, Forall) != neg
        return not universal and existential(f.body, neg)

    return {"positive": positive(phi), "existential": existential(phi)}


# ---------------------------------------------------------------------------
# parsing

_KEYWORDS = {"forall", "exists", "and", "or", "not", "->", "=", "true", "false"}


class _FormulaParser(_TermParser):
    def formula(self) -> Formula:
        tok = self.peek()
        if tok in ("forall", "exists"):
            return self.quantified()
        if tok == "true":
            self.i += 1
            return TRUE
        if tok == "false":
            self.i += 1
            return FALSE
        if tok != "(":
            raise TermSyntaxError(f"expected a formula, found {tok!r}", self.where())
        self.i += 1
        kw = self.peek()
        if kw in ("forall", "exists"):
            out = self.quantified()
        elif kw in ("and", "or"):
            self.i += 1
            parts = []
            while self.peek() != ")":
                if self.peek() is None:
                    raise TermSyntaxError("unclosed parenthesis", self.where())
                parts.append(self.formula())
            out = And(tuple(parts)) if kw == "and" else Or(tuple(parts))
        elif kw == "not":
            self.i += 1
            out = Not(self.formula())
        elif kw == "->":
            self.i += 1
            a = self.formula()
            out = Implies(a, self.formula())
        elif kw == "=":
            self.i += 1
            a = self.term()
            out = Eq(a, self.term())
        else:
            raise TermSyntaxError(f"unknown connective {kw!r}", self.where())
        self.expect(")")
        return out

    def quantified(self) -> Formula:
        kw = self.peek()
        self.i += 1
        names = []
        if self.peek() == "(" and self.i + 1 < len(self.toks) and self.toks[self.i + 1][0] not in _KEYWORDS:
            self.i += 1
            while self.peek() not in (")", None):
                names.append(self.name())
            self.expect(")")
        else:
            names.append(self.name())
        if not names:
            raise TermSyntaxError("quantifier without variables", self.where())
        body = self.formula()
        return forall(names, body) if kw == "forall" else exists(names, body)

    def name(self) -> str:
        tok = self.peek()
        if tok is None or tok in "()," or tok in _KEYWORDS:
            raise TermSyntaxError(f"expected a variable name, found {tok!r}", self.where())
        if self.signature is not None and tok in self.signature:
            raise TermSyntaxError(f"{tok!r} is an operation symbol, not a variable", self.where())
        self.i += 1
        return tok


def parse_formula(text: str, signature=None) -> Formula:
    toks = tokenize(text)
    if not toks:
        raise TermSyntaxError("empty formula", 0)
    p = _FormulaParser(toks, signature)
    phi = p.formula()
    if p.i != len(toks):
        raise TermSyntaxError(f"trailing input {p.peek()!r}", p.where())
    return phi
