"""Terms over a finite signature: syntax trees, text parsing, evaluation.

Text syntax is prefix application with comma separated arguments::

    term   := name | name '(' term (',' term)* ')'
    name   := any run of characters other than whitespace, '(', ')', ','

A bare name that is a 0-ary symbol of the signature is a constant,
every other bare name is a variable.  ``+(x,0)`` and ``join(*(x,1),y)``
are typical terms.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np


class TermError(ValueError):
    pass


class TermSyntaxError(TermError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.op
        return f"{self.op}({','.join(str(a) for a in self.args)})"


Term = Var | App


def const(name: str) -> App:
    return App(name, ())


def variables(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    out = set()
    for a in t.args:
        out |= variables(a)
    return out


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


def substitute(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Simultaneous substitution of terms for variables."""
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if not t.args:
        return t
    return App(t.op, tuple(substitute(a, mapping) for a in t.args))


def check_term(t: Term, signature) -> None:
    """Raise TermError if t uses unknown symbols or wrong arities."""
    if isinstance(t, Var):
        return
    if t.op not in signature:
        raise TermError(f"unknown symbol {t.op!r}")
    if signature.arity(t.op) != len(t.args):
        raise TermError(
            f"symbol {t.op!r} has arity {signature.arity(t.op)}, got {len(t.args)} arguments"
        )
    for a in t.args:
        check_term(a, signature)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:([(),])|([^\s(),]+))")


def tokenize(text: str) -> list[tuple[str, int]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TermSyntaxError("unexpected character", pos)
        tok = m.group(1) or m.group(2)
        toks.append((tok, m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    return toks


class _TermParser:
    def __init__(self, toks, signature, pos=0):
        self.toks = toks
        self.i = pos
        self.signature = signature

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def where(self):
        if self.i < len(self.toks):
            return self.toks[self.i][1]
        return self.toks[-1][1] + len(self.toks[-1][0]) if self.toks else 0

    def expect(self, tok):
        if self.peek() != tok:
            raise TermSyntaxError(f"expected {tok!r}, found {self.peek()!r}", self.where())
        self.i += 1

    def term(self) -> Term:
        tok = self.peek()
        if tok is None or tok in "(),":
            raise TermSyntaxError(f"expected a term, found {tok!r}", self.where())
        start = self.where()
        self.i += 1
        sig = self.signature
        if self.peek() == "(":
            self.i += 1
            args = [self.term()]
            while self.peek() == ",":
                self.i += 1
                args.append(self.term())
            self.expect(")")
            if sig is not None:
                if tok not in sig:
                    raise TermError(f"unknown symbol {tok!r} at position {start}")
                if sig.arity(tok) != len(args):
                    raise TermError(
                        f"arity mismatch for {tok!r} at position {start}: "
                        f"expected {sig.arity(tok)}, got {len(args)}"
                    )
            return App(tok, tuple(args))
        if sig is not None and tok in sig:
            if sig.arity(tok) != 0:
                raise TermError(
                    f"arity mismatch for {tok!r} at position {start}: "
                    f"expected {sig.arity(tok)}, got 0"
                )
            return App(tok, ())
        return Var(tok)


def parse_term(text: str, signature=None) -> Term:
    """Parse a term.  Without a signature every bare name is a variable."""
    toks = tokenize(text)
    if not toks:
        raise TermSyntaxError("empty term", 0)
    p = _TermParser(toks, signature)
    t = p.term()
    if p.i != len(toks):
        raise TermSyntaxError(f"trailing input {p.peek()!r}", p.where())
    return t


# ---------------------------------------------------------------------------
# evaluation

def eval_term(A, t: Term, env: Mapping[str, object]):
    """Value of t in algebra A under env.

    env values may be element indices or integer numpy arrays (evaluated
    pointwise with broadcasting).
    """
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise TermError(f"unbound variable {t.name!r}") from None
    if t.op not in A.signature:
        raise TermError(f"unknown symbol {t.op!r}")
    if A.signature.arity(t.op) != len(t.args):
        raise TermError(f"arity mismatch for {t.op!r}")
    table = A.tables[t.op]
    if not t.args:
        return int(table)
    vals = tuple(eval_term(A, a, env) for a in t.args)
    out = table[vals]
    return int(out) if np.ndim(out) == 0 else out


def compile_term(A, t: Term, slots: Mapping[str, int]):
    """Compile t to a function of a value sequence (plain ints).

    slots maps variable names to positions in the sequence.  Much faster
    than eval_term in inner loops.
    """
    if isinstance(t, Var):
        try:
            k = slots[t.name]
        except KeyError:
            raise TermError(f"unbound variable {t.name!r}") from None
        return lambda v: v[k]
    check_term(t, A.signature)
    if not t.args:
        c = int(A.tables[t.op])
        return lambda v: c
    tab = A.lists[t.op]
    subs = [compile_term(A, a, slots) for a in t.args]
    if len(subs) == 1:
        (f,) = subs
        return lambda v: tab[f(v)]
    if len(subs) == 2:
        f, g = subs
        return lambda v: tab[f(v)][g(v)]
    if len(subs) == 3:
        f, g, h = subs
        return lambda v: tab[f(v)][g(v)][h(v)]

    def run(v):
        row = tab
        for s in subs:
            row = row[s(v)]
        return row

    return run


# ---------------------------------------------------------------------------
# enumeration

def enumerate_terms(signature, names: Iterable[str], max_depth: int) -> Iterator[Term]:
    """All terms over names up to max_depth, shallowest first (no dedup)."""
    seen = [Var(v) for v in names] + [const(s) for s, m in signature.items() if m == 0]
    yield from seen
    fresh_from = 0
    for _ in range(max_depth):
        new = []
        for s, m in signature.items():
            if m == 0:
                continue
            for idx in itertools.product(range(len(seen)), repeat=m):
                # at least one argument from the newest layer
                if max(idx) >= fresh_from:
                    new.append(App(s, tuple(seen[i] for i in idx)))
        yield from new
        fresh_from = len(seen)
        seen = seen + new
