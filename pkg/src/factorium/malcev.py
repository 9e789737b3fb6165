"""Term transformers sigma, sigma*, rho, rho*, the Mal'cev identity system
for the Left Determining Property, and u-chains witnessing Cg(0, 1) = nabla.

Slot convention: a transform tuple is (x, y, z..., x1, y1, ..., xn, yn).
The z slots are named "z" when l = 1 and z1..zl otherwise.  s_i and t_i
may use the first 2 + l + 2(i-1) slot names.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .algebra import Algebra
from .congruence import Cg, Cg_tuples, Congruence, compose, delta, join
from .factorization import ZeroOneSpec
from .terms import App, Term, Var, check_term, eval_term, parse_term, substitute, variables

KINDS = ("sigma", "sigma*", "rho", "rho*")
_KIND_ALIASES = {"σ": "sigma", "σ*": "sigma*", "ρ": "rho", "ρ*": "rho*",
                 "sigma_star": "sigma*", "rho_star": "rho*"}


class MalcevError(ValueError):
    pass


def z_names(l: int) -> list[str]:
    return ["z"] if l == 1 else [f"z{i}" for i in range(1, l + 1)]


def slot_names(n: int, l: int) -> list[str]:
    out = ["x", "y"] + z_names(l)
    for j in range(1, n + 1):
        out += [f"x{j}", f"y{j}"]
    return out


def words(N: int, max_len: int | None = None, min_len: int = 0) -> list[tuple[int, ...]]:
    """Words over {1..N} of length min_len..max_len (default N), shortlex order."""
    max_len = N if max_len is None else max_len
    out = []
    for k in range(min_len, max_len + 1):
        out.extend(itertools.product(range(1, N + 1), repeat=k))
    return out


def word_str(w: Sequence[int]) -> str:
    return ".".join(str(a) for a in w)


def parse_word(s: str) -> tuple[int, ...]:
    s = s.strip()
    return tuple(int(p) for p in s.split(".")) if s else ()


@dataclass
class MalcevFamily:
    """The data N, n, s_i, t_i, L_alpha, R_alpha of the Mal'cev condition."""

    N: int
    n: int
    z: ZeroOneSpec
    s: tuple[Term, ...]
    t: tuple[Term, ...]
    L: dict = field(default_factory=dict)
    R: dict = field(default_factory=dict)

    def __post_init__(self):
        self.s, self.t = tuple(self.s), tuple(self.t)
        self.validate()

    @property
    def l(self) -> int:
        return self.z.l

    @property
    def k(self) -> int:
        return self.N // 2

    @property
    def names(self) -> list[str]:
        return slot_names(self.n, self.l)

    def validate(self):
        if self.N < 2 or self.N % 2:
            raise MalcevError(f"N must be a positive even integer, got {self.N}")
        if self.n < 0 or len(self.s) != self.n or len(self.t) != self.n:
            raise MalcevError(f"need exactly n = {self.n} terms s_i and t_i")
        names = self.names
        for i in range(1, self.n + 1):
            allowed = set(names[:2 + self.l + 2 * (i - 1)])
            for nm, term in (("s", self.s[i - 1]), ("t", self.t[i - 1])):
                extra = variables(term) - allowed
                if extra:
                    raise MalcevError(f"{nm}_{i} has arity {2 + self.l + 2 * (i - 1)} "
                                      f"but uses {sorted(extra)}")
        allowed = set(names)
        for w in words(self.N):
            for side, table in (("L", self.L), ("R", self.R)):
                if w not in table:
                    raise MalcevError(f"missing {side}_{word_str(w) or 'eps'}")
                extra = variables(table[w]) - allowed
                if extra:
                    raise MalcevError(f"{side}_{word_str(w) or 'eps'} uses {sorted(extra)}")

    def check_signature(self, signature):
        for term in itertools.chain(self.s, self.t, self.L.values(), self.R.values()):
            check_term(term, signature)
        for term in self.z.zeros + self.z.ones:
            check_term(term, signature)

    @classmethod
    def uniform(cls, N: int, n: int, z: ZeroOneSpec, s=(), t=(), L=None, R=None,
                L_default="x", R_default="y", signature=None):
        """Family where unspecified L_alpha/R_alpha take the given defaults.

        String terms are parsed with the signature, so constants need it."""
        p = lambda x: _term(x, signature)
        L = {tuple(k): p(v) for k, v in (L or {}).items()}
        R = {tuple(k): p(v) for k, v in (R or {}).items()}
        for w in words(N):
            L.setdefault(w, p(L_default))
            R.setdefault(w, p(R_default))
        return cls(N, n, z, tuple(p(x) for x in s), tuple(p(x) for x in t), L, R)

    def to_json(self) -> dict:
        return {"N": self.N, "n": self.n, "zero_one": self.z.to_json(),
                "s": [str(x) for x in self.s], "t": [str(x) for x in self.t],
                "L": {word_str(w): str(x) for w, x in self.L.items()},
                "R": {word_str(w): str(x) for w, x in self.R.items()}}

    @classmethod
    def from_json(cls, d: Mapping, signature=None) -> "MalcevFamily":
        try:
            z = ZeroOneSpec.parse(d["zero_one"]["zeros"], d["zero_one"]["ones"], signature)
            p = lambda x: parse_term(x, signature)
            return cls(int(d["N"]), int(d["n"]), z, tuple(p(x) for x in d.get("s", [])),
                       tuple(p(x) for x in d.get("t", [])),
                       {parse_word(k): p(v) for k, v in d["L"].items()},
                       {parse_word(k): p(v) for k, v in d["R"].items()})
        except KeyError as e:
            raise MalcevError(f"family JSON missing field {e}") from None


def _term(x, signature=None) -> Term:
    return parse_term(x, signature) if isinstance(x, str) else x


def load_family(path, signature=None) -> MalcevFamily:
    with open(path) as fh:
        return MalcevFamily.from_json(json.load(fh), signature)


# ---------------------------------------------------------------------------
# transformers

def _kind(kind: str) -> str:
    kind = _KIND_ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise MalcevError(f"unknown transform {kind!r}")
    return kind


def transform(kind: str, fam: MalcevFamily, tup: Sequence, algebra: Algebra | None = None) -> tuple:
    """Apply sigma / sigma* / rho / rho* to a tuple of terms or of elements.

    With algebra=None the entries are terms (strings are read as variables)
    and s_j/t_j are substituted; otherwise entries are elements of algebra.
    """
    kind = _kind(kind)
    l, n = fam.l, fam.n
    if len(tup) != 2 * n + l + 2:
        raise MalcevError(f"tuple has length {len(tup)}, expected {2 * n + l + 2}")
    names = fam.names
    if algebra is None:
        tup = [Var(x) if isinstance(x, str) else x for x in tup]
        zeros, ones = fam.z.zeros, fam.z.ones

        def apply(term, prefix):
            return substitute(term, dict(zip(names, prefix)))
    else:
        tup = [int(x) for x in tup]
        zeros, ones = fam.z.zero_values(algebra), fam.z.one_values(algebra)

        def apply(term, prefix):
            return eval_term(algebra, term, dict(zip(names, prefix)))

    c, d = tup[0], tup[1]
    zs = zeros if kind in ("sigma", "rho") else ones
    out = [c, c if kind == "sigma" else d, *zs]
    for j in range(n):
        a, b = tup[2 + l + 2 * j], tup[3 + l + 2 * j]
        if kind == "sigma":
            out += [apply(fam.s[j], out), b]
        elif kind == "sigma*":
            out += [apply(fam.t[j], out), b]
        elif kind == "rho":
            out += [a, apply(fam.s[j], out)]
        else:
            out += [a, apply(fam.t[j], out)]
    return tuple(out)


def identity_tuple(fam: MalcevFamily) -> tuple[Term, ...]:
    return tuple(Var(v) for v in fam.names)


# ---------------------------------------------------------------------------
# the four congruence identities

@dataclass
class IdentityCheck:
    kind: str
    join_equal: bool
    composition_equal: bool
    rhs: Congruence
    lhs_join: Congruence

    def to_json(self):
        return {"kind": self.kind, "join_reading": self.join_equal,
                "composition_reading": self.composition_equal,
                "rhs": self.rhs.to_json(), "lhs_join": self.lhs_join.to_json()}


@dataclass
class Lemma21Report:
    tuple: tuple[int, ...]
    checks: list[IdentityCheck]

    @property
    def join_holds(self) -> bool:
        return all(c.join_equal for c in self.checks)

    @property
    def composition_holds(self) -> bool:
        return all(c.composition_equal for c in self.checks)

    def to_json(self):
        return {"tuple": list(self.tuple), "join_reading": self.join_holds,
                "composition_reading": self.composition_holds,
                "checks": [c.to_json() for c in self.checks]}


def check_lemma21(A: Algebra, fam: MalcevFamily, tup: Sequence[int]) -> Lemma21Report:
    """Compare Cg(X, T(X)) with the displayed left-hand sides for T in
    sigma, sigma*, rho, rho*, reading the small circle both as relational
    composition and as join.  The big join over i is always a join.
    """
    fam.check_signature(A.signature)
    l, n = fam.l, fam.n
    tup = tuple(int(x) for x in tup)
    if len(tup) != 2 * n + l + 2:
        raise MalcevError("tuple length does not match the family")
    names = fam.names
    c, d, e = tup[0], tup[1], tup[2:2 + l]
    a = [tup[2 + l + 2 * j] for j in range(n)]
    b = [tup[3 + l + 2 * j] for j in range(n)]
    zeros, ones = fam.z.zero_values(A), fam.z.one_values(A)

    def prefix_val(term, i):
        return eval_term(A, term, dict(zip(names[:2 + l + 2 * i], tup)))

    sv = [prefix_val(fam.s[i], i) for i in range(n)]
    tv = [prefix_val(fam.t[i], i) for i in range(n)]

    def big_join(xs, ys):
        out = delta(A)
        for x, y in zip(xs, ys):
            out = join(out, Cg(A, (x, y)))
        return out

    parts = {
        "sigma": [Cg(A, (c, d)), Cg_tuples(A, e, zeros), big_join(a, sv)],
        "sigma*": [Cg_tuples(A, e, ones), big_join(a, tv)],
        "rho": [Cg_tuples(A, e, zeros), big_join(b, sv)],
        "rho*": [Cg_tuples(A, e, ones), big_join(b, tv)],
    }
    checks = []
    for kind in KINDS:
        rhs = Cg_tuples(A, tup, transform(kind, fam, tup, A))
        lhs_join = parts[kind][0]
        for p in parts[kind][1:]:
            lhs_join = join(lhs_join, p)
        comp = compose(*parts[kind])
        checks.append(IdentityCheck(kind, lhs_join == rhs, bool((comp == rhs.matrix()).all()),
                                    rhs, lhs_join))
    return Lemma21Report(tup, checks)


# ---------------------------------------------------------------------------
# term-sandwich checks on a test set of terms

@dataclass
class CorollaryReport:
    ok: bool
    sandwich_ok: bool
    a: tuple[int, ...] | None
    b: tuple[int, ...] | None
    terms_checked: int
    max_depth: int
    failures: list = field(default_factory=list)
    message: str = ""

    def to_json(self):
        return {"ok": self.ok, "sandwich_ok": self.sandwich_ok,
                "a": None if self.a is None else list(self.a),
                "b": None if self.b is None else list(self.b),
                "terms_checked": self.terms_checked, "max_depth": self.max_depth,
                "failures": [[str(t), which] for t, which in self.failures], "message": self.message}


def _sandwich(A, fam, theta, theta_star, c, d, e, other, given, which):
    """Check (given) or solve (given=None) s_i theta v_i theta* t_i in order.

    The v_i are the a_i when which == "a", else the b_i; `other` holds the
    remaining side of the tuple.
    """
    vals: list[int] = []
    for i in range(fam.n):
        pre = [c, d, *e]
        for j in range(i):
            pre += [vals[j], other[j]] if which == "a" else [other[j], vals[j]]
        env = dict(zip(fam.names, pre))
        lo, hi = eval_term(A, fam.s[i], env), eval_term(A, fam.t[i], env)
        sols = [x for x in range(A.size) if theta.related(lo, x) and theta_star.related(x, hi)]
        if given is not None:
            if given[i] not in sols:
                return None
            vals.append(int(given[i]))
        elif sols:
            vals.append(sols[0])
        else:
            return None
    return tuple(vals)


def _value_closure(A, seeds: dict, max_depth: int, budget: int = 200_000):
    """Depth-bounded term closure, deduplicated by value vector.

    seeds maps a term to its value vector (tuple over the evaluation points).
    Returns {value_vector: representative term}.
    """
    reps = {}
    for t, v in seeds.items():
        reps.setdefault(v, t)
    layer = dict(reps)
    for _ in range(max_depth):
        new = {}
        items = list(reps.items())
        fresh = set(layer)
        for s, m in A.signature.items():
            if m == 0:
                continue
            tab = A.tables[s]
            for combo in itertools.product(items, repeat=m):
                if not any(v in fresh for v, _ in combo):
                    continue
                vals = np.stack([np.asarray(v) for v, _ in combo])
                out = tuple(int(x) for x in tab[tuple(vals)])
                if out not in reps and out not in new:
                    new[out] = App(s, tuple(t for _, t in combo))
                    if len(new) > budget:
                        raise MalcevError("term test set exceeds its budget")
        if not new:
            break
        reps.update(new)
        layer = new
    return reps


def check_corollaries(A: Algebra, fam: MalcevFamily, theta: Congruence, theta_star: Congruence,
                      c: int, d: int, e: Sequence[int], a: Sequence[int] | None = None,
                      b: Sequence[int] | None = None, which: str = "a",
                      terms: Sequence[Term] | None = None, max_depth: int = 2) -> CorollaryReport:
    """Check t(T(X)) theta t(X) theta* t(T*(X)) on a finite set of terms.

    which="a" uses (sigma, sigma*) and requires the a_i sandwich conditions,
    which="b" uses (rho, rho*) and the b_i conditions.  The free side of
    the tuple (b for "a", a for "b") may be given or is filled with c.
    When the constrained side is None it is solved in A.  By default the
    test set is every L_alpha, R_alpha together with every term of depth
    <= max_depth (enumerated up to equal values at the three points).
    """
    fam.check_signature(A.signature)
    if theta.algebra is not A or theta_star.algebra is not A:
        raise MalcevError("congruences belong to another algebra")
    from .factorization import is_factor_pair
    if not is_factor_pair(theta, theta_star):
        return CorollaryReport(False, False, None, None, 0, max_depth,
                               message="(theta, theta*) is not a complementary factor pair")
    e = tuple(int(x) for x in e)
    zeros, ones = fam.z.zero_values(A), fam.z.one_values(A)
    if not all(theta.related(z, x) and theta_star.related(x, o) for z, x, o in zip(zeros, e, ones)):
        return CorollaryReport(False, False, None, None, 0, max_depth,
                               message="e is not related to 0 by theta and to 1 by theta*")
    if which == "a" and not theta.related(c, d):
        return CorollaryReport(False, False, None, None, 0, max_depth, message="c theta d fails")
    free_default = tuple([c] * fam.n)
    if which == "a":
        b = tuple(b) if b is not None else free_default
        a = _sandwich(A, fam, theta, theta_star, c, d, e, b, a, "a")
        if a is None:
            return CorollaryReport(False, False, None, b, 0, max_depth,
                                   message="sandwich conditions for a_i unsatisfied")
    else:
        a = tuple(a) if a is not None else free_default
        b = _sandwich(A, fam, theta, theta_star, c, d, e, a, b, "b")
        if b is None:
            return CorollaryReport(False, False, a, None, 0, max_depth,
                                   message="sandwich conditions for b_i unsatisfied")
    tup = [c, d, *e]
    for j in range(fam.n):
        tup += [a[j], b[j]]
    lo_kind, hi_kind = ("sigma", "sigma*") if which == "a" else ("rho", "rho*")
    points = [transform(lo_kind, fam, tup, A), tuple(tup), transform(hi_kind, fam, tup, A)]
    names = fam.names
    cols = {nm: tuple(p[i] for p in points) for i, nm in enumerate(names)}
    seeds = {Var(nm): v for nm, v in cols.items()}
    for s_, m in A.signature.items():
        if m == 0:
            seeds[App(s_, ())] = (A.const(s_),) * 3
    if terms is None:
        reps = _value_closure(A, seeds, max_depth)
        tests = list(reps.items())
        for term in itertools.chain(fam.L.values(), fam.R.values()):
            tests.append((tuple(eval_term(A, term, dict(zip(names, p))) for p in points), term))
    else:
        tests = [(tuple(eval_term(A, term, dict(zip(names, p))) for p in points), term)
                 for term in terms]
    failures = []
    for (lo, mid, hi), term in tests:
        if not theta.related(lo, mid):
            failures.append((term, "theta"))
        elif not theta_star.related(mid, hi):
            failures.append((term, "theta*"))
    return CorollaryReport(not failures, True, tuple(a), tuple(b), len(tests), max_depth, failures)


# ---------------------------------------------------------------------------
# the identity system

def malcev_identities(fam: MalcevFamily) -> list[tuple[str, Term, Term]]:
    """All identities of the system as (label, lhs, rhs) over the slot variables."""
    X = identity_tuple(fam)
    names = fam.names
    T = {k: dict(zip(names, transform(k, fam, X))) for k in KINDS}
    L, R, N, k = fam.L, fam.R, fam.N, fam.k

    def at(table, w, kind=None):
        term = table[w]
        return term if kind is None else substitute(term, T[kind])

    out = []
    for w in words(N, N, N):
        ws = word_str(w)
        out.append((f"|a|=N rho: L_{ws} = R_{ws}", at(L, w, "rho"), at(R, w, "rho")))
        out.append((f"|a|=N rho*: L_{ws} = R_{ws}", at(L, w, "rho*"), at(R, w, "rho*")))
    eps = ()
    out.append(("|a|=0: x = L_eps", Var("x"), L[eps]))
    out.append(("|a|=0: R_eps = y", R[eps], Var("y")))
    out.append(("|a|=0 rho: L_eps = L_1", at(L, eps, "rho"), at(L, (1,), "rho")))
    for j in range(1, N):
        out.append((f"|a|=0 rho: R_{j} = L_{j + 1}", at(R, (j,), "rho"), at(L, (j + 1,), "rho")))
    out.append((f"|a|=0 rho: R_{N} = R_eps", at(R, (N,), "rho"), at(R, eps, "rho")))
    for w in words(N, N - 1, 1):
        ws = word_str(w)
        if len(w) % 2 == 0:
            lo, hi = "rho", "rho*"
        else:
            lo, hi = "sigma", "sigma*"
        out.append((f"{lo}: L_{ws} = L_{ws}.1", at(L, w, lo), at(L, w + (1,), lo)))
        for j in range(1, k):
            out.append((f"{lo}: R_{ws}.{j} = L_{ws}.{j + 1}", at(R, w + (j,), lo),
                        at(L, w + (j + 1,), lo)))
        out.append((f"{lo}: R_{ws}.{k} = R_{ws}", at(R, w + (k,), lo), at(R, w, lo)))
        out.append((f"{hi}: L_{ws} = L_{ws}.{k + 1}", at(L, w, hi), at(L, w + (k + 1,), hi)))
        for j in range(k + 1, N):
            out.append((f"{hi}: R_{ws}.{j} = L_{ws}.{j + 1}", at(R, w + (j,), hi),
                        at(L, w + (j + 1,), hi)))
        out.append((f"{hi}: R_{ws}.{N} = R_{ws}", at(R, w + (N,), hi), at(R, w, hi)))
    return out


@dataclass
class IdentityResult:
    label: str
    lhs: Term
    rhs: Term
    holds: bool
    counter: dict | None = None

    def to_json(self):
        return {"label": self.label, "lhs": str(self.lhs), "rhs": str(self.rhs),
                "holds": self.holds, "counter_assignment": self.counter}


@dataclass
class IdentityReport:
    algebras: list[str]
    results: list[IdentityResult]
    scope: str = ("identities verified only on the listed algebras; "
                  "this is a necessary condition, not a proof for the variety")

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.results)

    def failures(self) -> list[IdentityResult]:
        return [r for r in self.results if not r.holds]

    def to_json(self):
        return {"algebras": self.algebras, "holds": self.holds, "scope": self.scope,
                "results": [r.to_json() for r in self.results]}


def check_identity(A: Algebra, lhs: Term, rhs: Term, names: Sequence[str],
                   budget: int = 10**7) -> dict | None:
    """None if lhs = rhs under every assignment, else a counter-assignment."""
    names = list(names)
    if A.size ** len(names) > budget:
        raise MalcevError(f"{A.size}^{len(names)} assignments exceed the budget {budget}")
    if A.size == 1:
        return None
    grids = np.meshgrid(*[np.arange(A.size)] * len(names), indexing="ij")
    env = {v: g.ravel() for v, g in zip(names, grids)}
    lv = np.broadcast_to(eval_term(A, lhs, env), (A.size ** len(names),))
    rv = np.broadcast_to(eval_term(A, rhs, env), (A.size ** len(names),))
    bad = np.flatnonzero(lv != rv)
    if not len(bad):
        return None
    i = int(bad[0])
    return {v: int(env[v][i]) for v in names}


def check_malcev_identities(A: Algebra | Sequence[Algebra], fam: MalcevFamily,
                            budget: int = 10**7) -> IdentityReport:
    algebras = [A] if isinstance(A, Algebra) else list(A)
    results = []
    names = fam.names
    for lbl, lhs, rhs in malcev_identities(fam):
        holds, counter = True, None
        for B in algebras:
            fam.check_signature(B.signature)
            ce = check_identity(B, lhs, rhs, names, budget)
            if ce is not None:
                holds, counter = False, {"algebra": B.name, **ce}
                break
        results.append(IdentityResult(lbl, lhs, rhs, holds, counter))
    return IdentityReport([B.name or f"algebra#{i}" for i, B in enumerate(algebras)], results)


# ---------------------------------------------------------------------------
# u-chains

@dataclass
class UChain:
    """Terms u_1..u_k in x, y, z (or z1..zl) with k odd."""

    terms: tuple[Term, ...]
    z: ZeroOneSpec
    validated_on: tuple[str, ...] = ()

    def __post_init__(self):
        self.terms = tuple(_term(t) for t in self.terms)
        if not self.terms or len(self.terms) % 2 == 0:
            raise MalcevError(f"a u-chain needs an odd number of terms, got {len(self.terms)}")
        allowed = {"x", "y", *z_names(self.z.l)}
        for t in self.terms:
            extra = variables(t) - allowed
            if extra:
                raise MalcevError(f"u-chain term {t} uses {sorted(extra)}")

    @property
    def k(self) -> int:
        return len(self.terms)

    @property
    def validated(self) -> bool:
        return bool(self.validated_on)

    def identities(self) -> list[tuple[str, Term, Term]]:
        zn = z_names(self.z.l)
        zero = dict(zip(zn, self.z.zeros))
        one = dict(zip(zn, self.z.ones))
        u = self.terms
        out = [("1: x = u1(x,y,0)", Var("x"), substitute(u[0], zero))]
        for i in range(1, self.k):
            sub, tag = (one, "1") if i % 2 == 1 else (zero, "0")
            out.append((f"{i + 1}: u{i}(x,y,{tag}) = u{i + 1}(x,y,{tag})",
                        substitute(u[i - 1], sub), substitute(u[i], sub)))
        out.append((f"{self.k + 1}: u{self.k}(x,y,1) = y", substitute(u[-1], one), Var("y")))
        return out

    def to_json(self):
        return {"terms": [str(t) for t in self.terms], "zero_one": self.z.to_json(),
                "validated_on": list(self.validated_on)}

    @classmethod
    def from_json(cls, d, signature=None) -> "UChain":
        z = ZeroOneSpec.parse(d["zero_one"]["zeros"], d["zero_one"]["ones"], signature)
        return cls(tuple(parse_term(t, signature) for t in d["terms"]), z)


@dataclass
class UChainReport:
    ok: bool
    algebras: list[str]
    failures: list = field(default_factory=list)

    def to_json(self):
        return {"ok": self.ok, "algebras": self.algebras,
                "failures": [{"identity": lbl, "algebra": name, "assignment": ce}
                             for lbl, name, ce in self.failures]}


def validate_u_chain(algebras: Sequence[Algebra], u: UChain) -> UChainReport:
    """Replay all k+1 identities on every algebra; on success u is marked validated."""
    failures = []
    for A in algebras:
        for t in u.terms:
            check_term(t, A.signature)
        for lbl, lhs, rhs in u.identities():
            ce = check_identity(A, lhs, rhs, ["x", "y"])
            if ce is not None:
                failures.append((lbl, A.name, ce))
    names = tuple(A.name or f"algebra#{i}" for i, A in enumerate(algebras))
    if not failures:
        u.validated_on = tuple(dict.fromkeys(u.validated_on + names))
    return UChainReport(not failures, list(names), failures)


def find_u_chain(algebras: Sequence[Algebra], max_depth: int = 2, z: ZeroOneSpec | None = None,
                 max_k: int = 7) -> UChain | None:
    """Shortest u-chain among terms of depth <= max_depth, or None.

    Terms in x, y, z are enumerated layer by layer and deduplicated by their
    fingerprint: the values at z = 0 and at z = 1 for every pair x, y in
    every supplied algebra.  A chain is a shortest path x -> u1 -> ... -> uk
    -> y whose links agree at z = 1 after odd positions and at z = 0 after
    even positions.
    """
    from collections import deque
    z = z or ZeroOneSpec.default()
    algebras = list(algebras)
    sig = algebras[0].signature
    for A in algebras[1:]:
        if A.signature != sig:
            raise MalcevError("algebras do not share a signature")
    zn = z_names(z.l)
    # per algebra: values over the (x, y) grid, first with z = 0 then z = 1
    leaves: dict[Term, list] = {Var("x"): [], Var("y"): []}
    for v in zn:
        leaves[Var(v)] = []
    for s_, m in sig.items():
        if m == 0:
            leaves[App(s_, ())] = []
    for A in algebras:
        xs, ys = np.meshgrid(np.arange(A.size), np.arange(A.size), indexing="ij")
        xs, ys = xs.ravel(), ys.ravel()
        cells = xs.size
        leaves[Var("x")].append(np.concatenate([xs, xs]))
        leaves[Var("y")].append(np.concatenate([ys, ys]))
        for v, zt, ot in zip(zn, z.zeros, z.ones):
            leaves[Var(v)].append(np.repeat([eval_term(A, zt, {}), eval_term(A, ot, {})], cells))
        for s_, m in sig.items():
            if m == 0:
                leaves[App(s_, ())].append(np.full(2 * cells, A.const(s_)))

    def key(vecs):
        halves0 = tuple(v[:v.size // 2].tobytes() for v in vecs)
        halves1 = tuple(v[v.size // 2:].tobytes() for v in vecs)
        return halves0, halves1

    reps: dict = {}
    vals: list = []
    for t, vecs in leaves.items():
        k = key(vecs)
        if k not in reps:
            reps[k] = t
            vals.append((k, t, vecs))
    fresh_from = 0
    for _ in range(max_depth):
        new = []
        for s_, m in sig.items():
            if m == 0:
                continue
            tabs = [A.tables[s_] for A in algebras]
            for idx in itertools.product(range(len(vals)), repeat=m):
                if max(idx) < fresh_from:
                    continue
                args = [vals[i] for i in idx]
                vecs = [tabs[a][tuple(arg[2][a] for arg in args)] for a in range(len(algebras))]
                k = key(vecs)
                if k not in reps:
                    t = App(s_, tuple(arg[1] for arg in args))
                    reps[k] = t
                    new.append((k, t, vecs))
        fresh_from = len(vals)
        vals.extend(new)
        if not new:
            break
    x_key = key(leaves[Var("x")])
    y_key = key(leaves[Var("y")])
    by0: dict = {}
    by1: dict = {}
    for k in reps:
        by0.setdefault(k[0], []).append(k)
        by1.setdefault(k[1], []).append(k)
    prev = {}
    q = deque()
    for k in by0.get(x_key[0], []):
        prev[(k, 1)] = None
        q.append((k, 1))
    while q:
        k, i = q.popleft()
        if i % 2 == 1 and k[1] == y_key[1]:
            chain = []
            node = (k, i)
            while node is not None:
                chain.append(reps[node[0]])
                node = prev[node]
            return UChain(tuple(reversed(chain)), z)
        if i >= max_k:
            continue
        # u_i and u_{i+1} agree at z = 1 for odd i, at z = 0 for even i
        for k2 in (by1.get(k[1], []) if i % 2 == 1 else by0.get(k[0], [])):
            if (k2, i + 1) not in prev:
                prev[(k2, i + 1)] = (k, i)
                q.append((k2, i + 1))
    return None
