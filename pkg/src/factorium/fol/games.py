"""Ehrenfeucht back-and-forth games on finite algebras.

A position is the set of chosen pairs (a, b), always including the pairs of
constant interpretations.  Duplicator keeps the position a partial
isomorphism in the operation-graph sense: for every m-ary f and chosen
a_1..a_m, c we need f(a) = c iff f(g(a)) = g(c).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..algebra import Algebra, element_invariants, is_partial_isomorphism
from .evaluate import BudgetExceeded

EXISTS = "exists"
FORALL = "forall"
DEFAULT_GAME_BUDGET = 5 * 10**6


def constant_pairs(A: Algebra, B: Algebra) -> list[tuple[int, int]] | None:
    """Pairs (c^A, c^B); None when they already violate injectivity."""
    out = {}
    for s in A.signature.constants():
        a, b = A.const(s), B.const(s)
        if out.get(a, b) != b:
            return None
        out[a] = b
    if len(set(out.values())) != len(out):
        return None
    return sorted(out.items())


class _Extender:
    """Fast test that a partial isomorphism stays one after adding (a, b)."""

    def __init__(self, A: Algebra, B: Algebra, pairs: Sequence[tuple[int, int]]):
        self.A, self.B = A, B
        self.pairs = list(pairs)
        self.fwd = dict(pairs)
        self.bwd = {b: a for a, b in pairs}
        self.ops = [(A.lists[s], B.lists[s], m) for s, m in A.signature.items() if m > 0]
        # which old argument tuples hit a given output, on each side
        sig_a: dict = {}
        sig_b: dict = {}
        dom = [a for a, _ in self.pairs]
        img = [b for _, b in self.pairs]
        for k, (ta, tb, m) in enumerate(self.ops):
            for idx in itertools.product(range(len(dom)), repeat=m):
                va, vb = ta, tb
                for i in idx:
                    va, vb = va[dom[i]], vb[img[i]]
                sig_a.setdefault(va, set()).add((k, idx))
                sig_b.setdefault(vb, set()).add((k, idx))
        self.sig_a, self.sig_b = sig_a, sig_b

    def ok(self, a: int, b: int) -> bool:
        if a in self.fwd or b in self.bwd:
            return self.fwd.get(a) == b
        if self.sig_a.get(a, set()) != self.sig_b.get(b, set()):
            return False
        dom = [p[0] for p in self.pairs] + [a]
        img = [p[1] for p in self.pairs] + [b]
        new = len(dom) - 1
        fwd = dict(self.fwd)
        fwd[a] = b
        bwd = dict(self.bwd)
        bwd[b] = a
        for ta, tb, m in self.ops:
            for idx in itertools.product(range(len(dom)), repeat=m):
                if new not in idx:
                    continue
                va, vb = ta, tb
                for i in idx:
                    va, vb = va[dom[i]], vb[img[i]]
                if va in fwd:
                    if fwd[va] != vb:
                        return False
                elif vb in bwd:
                    return False
        return True


@dataclass
class GameResult:
    winner: str
    rounds: int
    start: frozenset
    strategy: dict = field(default_factory=dict)
    refutation: tuple | None = None
    positions: int = 0

    def respond(self, position, side: int, x: int):
        """Duplicator's certified answer; side 0 means Spoiler played in A."""
        return self.strategy.get((frozenset(position), side, x))

    def to_json(self):
        return {"winner": self.winner, "rounds": self.rounds, "positions": self.positions,
                "start": sorted(list(p) for p in self.start),
                "refutation": None if self.refutation is None else list(self.refutation),
                "strategy_size": len(self.strategy)}


def ef_game(A: Algebra, B: Algebra, rounds: int, budget: int = DEFAULT_GAME_BUDGET) -> GameResult:
    """Decide the rounds-round game on A, B by memoized game-tree search.

    Spoiler moves on already chosen elements are skipped: the reply is
    forced and the position repeats with fewer rounds left, which never
    helps Spoiler.  On a Duplicator win the result carries a strategy map
    (position, side, element) -> reply covering every reachable position.
    """
    if A.signature != B.signature:
        raise ValueError("algebras have different signatures")
    start = constant_pairs(A, B)
    if start is None or not is_partial_isomorphism(A, B, dict(start)):
        return GameResult(FORALL, rounds, frozenset(start or ()), refutation=())
    start_key = frozenset(start)
    inv_a, inv_b = element_invariants(A), element_invariants(B)
    lab_b = {B.labels[i]: i for i in range(B.size)} if B.labels is not None else {}
    lab_a = {A.labels[i]: i for i in range(A.size)} if A.labels is not None else {}

    def order(side, x):
        """Candidate replies: same label, then same invariant, then the rest."""
        if side == 0:
            src_lab, dst_lab, src_inv, dst_inv, size = A.labels, lab_b, inv_a, inv_b, B.size
        else:
            src_lab, dst_lab, src_inv, dst_inv, size = B.labels, lab_a, inv_b, inv_a, A.size
        first = []
        if src_lab is not None and src_lab[x] in dst_lab:
            first.append(dst_lab[src_lab[x]])
        same = [y for y in range(size) if dst_inv[y] == src_inv[x] and y not in first]
        rest = [y for y in range(size) if y not in first and y not in same]
        return first + same + rest

    orders = {(s, x): order(s, x) for s in (0, 1) for x in range((A, B)[s].size)}
    memo: dict = {}
    strategy: dict = {}
    stats = {"positions": 0}
    refutation = {}

    def wins(key: frozenset, pairs: list, k: int) -> bool:
        if k == 0:
            return True
        mk = (key, k)
        if mk in memo:
            return memo[mk]
        stats["positions"] += 1
        if stats["positions"] > budget:
            raise BudgetExceeded(stats["positions"], budget, what="game positions")
        ext = _Extender(A, B, pairs)
        dom = {a for a, _ in pairs}
        img = {b for _, b in pairs}
        result = True
        for side, size, used in ((0, A.size, dom), (1, B.size, img)):
            for x in range(size):
                if x in used:
                    continue
                answered = False
                for y in orders[(side, x)]:
                    a, b = (x, y) if side == 0 else (y, x)
                    if a in dom or b in img:
                        continue
                    if ext.ok(a, b) and wins(key | {(a, b)}, pairs + [(a, b)], k - 1):
                        strategy[(key, side, x)] = y
                        answered = True
                        break
                if not answered:
                    refutation[mk] = (side, x)
                    result = False
                    break
            if not result:
                break
        memo[mk] = result
        return result

    won = wins(start_key, list(start), rounds)
    if won:
        return GameResult(EXISTS, rounds, start_key, strategy, None, stats["positions"])
    return GameResult(FORALL, rounds, start_key, {}, refutation.get((start_key, rounds)),
                      stats["positions"])


@dataclass
class ReplayReport:
    ok: bool
    sequences: int
    failure: list | None = None

    def to_json(self):
        return {"ok": self.ok, "sequences": self.sequences, "failure": self.failure}


def replay_strategy(A: Algebra, B: Algebra, rounds: int,
                    respond: Callable[[frozenset, int, int], int | None]) -> ReplayReport:
    """Play a Duplicator strategy against every Spoiler sequence of moves.

    respond(position, side, x) returns the reply (None = no reply).  Moves
    on already chosen elements get the partner as reply automatically.
    After each round the position must be a partial isomorphism.
    """
    start = constant_pairs(A, B)
    if start is None:
        return ReplayReport(False, 0, [])
    count = 0
    moves = [(0, x) for x in range(A.size)] + [(1, x) for x in range(B.size)]

    def play(pairs: list, k: int, history: list):
        nonlocal count
        if k == 0:
            count += 1
            return None
        fwd = dict(pairs)
        bwd = {b: a for a, b in pairs}
        for side, x in moves:
            if side == 0 and x in fwd:
                nxt = pairs
            elif side == 1 and x in bwd:
                nxt = pairs
            else:
                y = respond(frozenset(pairs), side, x)
                if y is None:
                    return history + [(side, x, None)]
                pair = (x, y) if side == 0 else (y, x)
                nxt = pairs + [pair]
                if not is_partial_isomorphism(A, B, dict(nxt)):
                    return history + [(side, x, y)]
            bad = play(nxt, k - 1, history + [(side, x)])
            if bad is not None:
                return bad
        return None

    if not is_partial_isomorphism(A, B, dict(start)):
        return ReplayReport(False, 0, [])
    bad = play(list(start), rounds, [])
    return ReplayReport(bad is None, count, bad)


def certificate_strategy(result: GameResult):
    """The solver's strategy map as a respond() callable."""
    return lambda pos, side, x: result.strategy.get((frozenset(pos), side, x))


def monotone_check(A: Algebra, B: Algebra, max_rounds: int, budget: int = DEFAULT_GAME_BUDGET) -> bool:
    """If Spoiler wins k rounds, Spoiler also wins k + 1 rounds."""
    spoiler = False
    for k in range(max_rounds + 1):
        w = ef_game(A, B, k, budget).winner
        if spoiler and w != FORALL:
            return False
        spoiler = w == FORALL
    return True
