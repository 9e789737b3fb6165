"""Factor congruences, direct decompositions, central elements and BFC."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Algebra, ElementMap, check_homomorphism, direct_product, quotient
from .congruence import (DEFAULT_MAX_SIZE, Congruence, all_congruences, join, meet)
from .terms import Term, check_term, eval_term, parse_term


@dataclass(frozen=True)
class ZeroOneSpec:
    """Closed term tuples 0_1..0_l and 1_1..1_l."""

    zeros: tuple[Term, ...]
    ones: tuple[Term, ...]

    def __post_init__(self):
        if len(self.zeros) != len(self.ones) or not self.zeros:
            raise ValueError("zeros and ones must be nonempty and of equal length")
        from .terms import variables
        for t in self.zeros + self.ones:
            if variables(t):
                raise ValueError(f"term {t} is not closed")

    @property
    def l(self) -> int:
        return len(self.zeros)

    @classmethod
    def parse(cls, zeros: Sequence[str], ones: Sequence[str], signature=None):
        return cls(tuple(parse_term(z, signature) for z in zeros),
                   tuple(parse_term(o, signature) for o in ones))

    @classmethod
    def default(cls):
        """The single pair of constants named "0" and "1"."""
        return cls.parse(["0"], ["1"], _ZeroOneSig())

    def zero_values(self, A: Algebra) -> tuple[int, ...]:
        return tuple(eval_term(A, t, {}) for t in self.zeros)

    def one_values(self, A: Algebra) -> tuple[int, ...]:
        return tuple(eval_term(A, t, {}) for t in self.ones)

    def check(self, A: Algebra):
        for t in self.zeros + self.ones:
            check_term(t, A.signature)

    def to_json(self):
        return {"zeros": [str(t) for t in self.zeros], "ones": [str(t) for t in self.ones]}


class _ZeroOneSig:
    def __contains__(self, s):
        return s in ("0", "1")

    def arity(self, s):
        return 0


@dataclass(frozen=True)
class FactorPair:
    theta: Congruence
    theta_star: Congruence

    def swapped(self) -> "FactorPair":
        return FactorPair(self.theta_star, self.theta)

    def is_trivial(self) -> bool:
        return self.theta.is_delta() or self.theta.is_nabla()

    def to_json(self):
        return {"theta": self.theta.to_json(), "theta_star": self.theta_star.to_json()}


def is_factor_pair(theta: Congruence, theta_star: Congruence) -> bool:
    """theta meet theta* = Delta and theta o theta* = nabla.

    For finite algebras this is equivalent to: every theta-block meets every
    theta*-block in exactly one element.
    """
    n = theta.algebra.size
    if theta.num_blocks * theta_star.num_blocks != n:
        return False
    return len(set(zip(theta.blocks, theta_star.blocks))) == n


def factor_pairs(A: Algebra, max_size: int = DEFAULT_MAX_SIZE,
                 congruences: Sequence[Congruence] | None = None) -> list[FactorPair]:
    """All ordered complementary pairs (theta, theta*)."""
    cons = all_congruences(A, max_size) if congruences is None else congruences
    by_count: dict[int, list[Congruence]] = {}
    for c in cons:
        by_count.setdefault(c.num_blocks, []).append(c)
    out = []
    for c in cons:
        k = c.num_blocks
        if A.size % k:
            continue
        for d in by_count.get(A.size // k, []):
            if is_factor_pair(c, d):
                out.append(FactorPair(c, d))
    return out


def factor_congruences(A: Algebra, max_size: int = DEFAULT_MAX_SIZE, pairs=None) -> list[Congruence]:
    pairs = factor_pairs(A, max_size) if pairs is None else pairs
    seen = []
    for p in pairs:
        if p.theta not in seen:
            seen.append(p.theta)
    return seen


@dataclass
class DecompositionReport:
    pair: FactorPair
    left: Algebra
    right: Algebra
    product: Algebra
    reconstruction: ElementMap

    def verify(self) -> bool:
        return (len(set(self.reconstruction.mapping.values())) == self.product.size
                and check_homomorphism(self.pair.theta.algebra, self.product,
                                       self.reconstruction, total=True))

    def to_json(self):
        return {"pair": self.pair.to_json(), "sizes": [self.left.size, self.right.size],
                "reconstruction": self.reconstruction.as_list()}


def decompose(A: Algebra, max_size: int = DEFAULT_MAX_SIZE) -> list[DecompositionReport]:
    """One report per nontrivial factor pair, up to swapping theta/theta*."""
    reports = []
    done = set()
    for p in factor_pairs(A, max_size):
        if p.is_trivial():
            continue
        key = frozenset((p.theta.blocks, p.theta_star.blocks))
        if key in done:
            continue
        done.add(key)
        Q1, nat1 = quotient(A, p.theta.blocks)
        Q2, nat2 = quotient(A, p.theta_star.blocks)
        P = direct_product([Q1, Q2])
        rec = ElementMap({a: P.element(nat1[a], nat2[a]) for a in range(A.size)}, A.size, P.size)
        reports.append(DecompositionReport(p, Q1, Q2, P, rec))
    return reports


def is_directly_indecomposable(A: Algebra, max_size: int = DEFAULT_MAX_SIZE) -> bool:
    if A.size < 2:
        return False
    return all(p.is_trivial() for p in factor_pairs(A, max_size))


# ---------------------------------------------------------------------------
# central elements

def _solve(cong_a: Congruence, a: int, cong_b: Congruence, b: int) -> list[int]:
    """Elements x with a cong_a x cong_b b."""
    ra, rb = cong_a.blocks[a], cong_b.blocks[b]
    return [x for x in range(cong_a.algebra.size)
            if cong_a.blocks[x] == ra and cong_b.blocks[x] == rb]


def solve_tuple(theta, theta_star, lo: Sequence[int], hi: Sequence[int]) -> list[tuple[int, ...]]:
    """All tuples e with lo theta e theta* hi componentwise."""
    cols = [_solve(theta, a, theta_star, b) for a, b in zip(lo, hi)]
    return [tuple(t) for t in itertools.product(*cols)]


@dataclass(frozen=True)
class CentralElement:
    value: tuple[int, ...]
    witness: FactorPair


@dataclass
class CentralReport:
    elements: list[CentralElement]
    unsolved: list[FactorPair]
    ambiguous: list[tuple[FactorPair, list[tuple[int, ...]]]]

    def values(self) -> list[tuple[int, ...]]:
        out = []
        for c in self.elements:
            if c.value not in out:
                out.append(c.value)
        return out


def central_report(A: Algebra, z: ZeroOneSpec, max_size: int = DEFAULT_MAX_SIZE,
                   pairs=None) -> CentralReport:
    z.check(A)
    zeros, ones = z.zero_values(A), z.one_values(A)
    pairs = factor_pairs(A, max_size) if pairs is None else pairs
    elems, unsolved, ambiguous = [], [], []
    for p in pairs:
        sols = solve_tuple(p.theta, p.theta_star, zeros, ones)
        if not sols:
            unsolved.append(p)
        if len(sols) > 1:
            ambiguous.append((p, sols))
        elems.extend(CentralElement(e, p) for e in sols)
    return CentralReport(elems, unsolved, ambiguous)


def central_elements(A: Algebra, z: ZeroOneSpec, max_size: int = DEFAULT_MAX_SIZE) -> list[CentralElement]:
    """Every solution of 0 theta e theta* 1, one entry per factor pair and solution."""
    return central_report(A, z, max_size).elements


def complementary_pairs(A: Algebra, z: ZeroOneSpec, max_size: int = DEFAULT_MAX_SIZE,
                        pairs=None) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Pairs (e, f) with 0 theta e theta* 1 and 1 theta f theta* 0 for a common pair."""
    z.check(A)
    zeros, ones = z.zero_values(A), z.one_values(A)
    pairs = factor_pairs(A, max_size) if pairs is None else pairs
    out = []
    for p in pairs:
        for e in solve_tuple(p.theta, p.theta_star, zeros, ones):
            for f in solve_tuple(p.theta, p.theta_star, ones, zeros):
                if (e, f) not in out:
                    out.append((e, f))
    return out


# ---------------------------------------------------------------------------
# BFC and the determining properties

@dataclass
class BFCReport:
    holds: bool
    factor_congruences: list[Congruence]
    meet_failure: tuple | None = None
    join_failure: tuple | None = None
    distributivity_failure: tuple | None = None

    def to_json(self):
        def enc(x):
            return None if x is None else [c.to_json() for c in x]
        return {"holds": self.holds, "factor_congruences": [c.to_json() for c in self.factor_congruences],
                "meet_failure": enc(self.meet_failure), "join_failure": enc(self.join_failure),
                "distributivity_failure": enc(self.distributivity_failure)}


def check_bfc(A: Algebra, max_size: int = DEFAULT_MAX_SIZE) -> BFCReport:
    """Are the factor congruences a distributive sublattice of Con(A)?"""
    fcs = factor_congruences(A, max_size)
    fset = set(fcs)
    rep = BFCReport(True, fcs)
    for a, b in itertools.combinations(fcs, 2):
        if meet(a, b) not in fset:
            rep.holds, rep.meet_failure = False, (a, b)
            return rep
        if join(a, b) not in fset:
            rep.holds, rep.join_failure = False, (a, b)
            return rep
    for a, b, c in itertools.product(fcs, repeat=3):
        if meet(a, join(b, c)) != join(meet(a, b), meet(a, c)):
            rep.holds, rep.distributivity_failure = False, (a, b, c)
            return rep
    return rep


@dataclass
class DeterminingReport:
    holds: bool
    weak_holds: bool
    pairs: int
    central: list[tuple[int, ...]]
    not_unique: list = field(default_factory=list)
    collisions: list = field(default_factory=list)
    weak_not_unique: list = field(default_factory=list)
    weak_collisions: list = field(default_factory=list)

    def to_json(self):
        return {"holds": self.holds, "weak_holds": self.weak_holds, "pairs": self.pairs,
                "central": [list(e) for e in self.central],
                "not_unique": [[p.to_json(), [list(s) for s in sols]] for p, sols in self.not_unique],
                "collisions": [[list(e), p.to_json(), q.to_json()] for e, p, q in self.collisions],
                "weak_not_unique": [p.to_json() for p in self.weak_not_unique],
                "weak_collisions": [[[list(e), list(f)], p.to_json(), q.to_json()]
                                    for (e, f), p, q in self.weak_collisions]}


def check_determining_property(A: Algebra, z: ZeroOneSpec,
                               max_size: int = DEFAULT_MAX_SIZE) -> DeterminingReport:
    """Determining Property on one algebra, plus its weak variant.

    Strong: (theta, theta*) -> unique e with 0 theta e theta* 1 is well
    defined and injective (hence a bijection onto the central elements).
    Weak: the same for (theta, theta*) -> (e, f) with also 1 theta f theta* 0.
    """
    z.check(A)
    zeros, ones = z.zero_values(A), z.one_values(A)
    pairs = factor_pairs(A, max_size)
    rep = DeterminingReport(True, True, len(pairs), [])
    owner: dict = {}
    weak_owner: dict = {}
    for p in pairs:
        es = solve_tuple(p.theta, p.theta_star, zeros, ones)
        fs = solve_tuple(p.theta, p.theta_star, ones, zeros)
        if len(es) != 1:
            rep.holds = False
            rep.not_unique.append((p, es))
        for e in es:
            if e not in rep.central:
                rep.central.append(e)
            if e in owner and owner[e] != p:
                rep.holds = False
                rep.collisions.append((e, owner[e], p))
            owner.setdefault(e, p)
        if len(es) != 1 or len(fs) != 1:
            rep.weak_holds = False
            rep.weak_not_unique.append(p)
        for e in es:
            for f in fs:
                if (e, f) in weak_owner and weak_owner[(e, f)] != p:
                    rep.weak_holds = False
                    rep.weak_collisions.append(((e, f), weak_owner[(e, f)], p))
                weak_owner.setdefault((e, f), p)
    return rep
