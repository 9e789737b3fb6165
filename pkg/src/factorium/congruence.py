"""Congruences of finite algebras.

A congruence is stored as a block-id array normalized so that every block
is named by its least member; two Congruence values are equal exactly when
they are the same partition of the same algebra.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .algebra import Algebra
from .terms import App, Term, Var, eval_term


class CongruenceError(ValueError):
    pass


class SizeGuardExceeded(CongruenceError):
    pass


DEFAULT_MAX_SIZE = 14


def normalize(labels: Sequence[int]) -> tuple[int, ...]:
    """Relabel a partition so each block id is its least member."""
    first = {}
    out = []
    for i, b in enumerate(labels):
        b = int(b)
        if b not in first:
            first[b] = i
        out.append(first[b])
    return tuple(out)


class Congruence:
    __slots__ = ("algebra", "blocks", "_hash")

    def __init__(self, algebra: Algebra, blocks: Sequence[int]):
        if len(blocks) != algebra.size:
            raise CongruenceError("block array has the wrong length")
        self.algebra = algebra
        self.blocks = normalize(blocks)
        self._hash = hash(self.blocks)

    def __eq__(self, other):
        return (isinstance(other, Congruence) and self.algebra is other.algebra
                and self.blocks == other.blocks)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Congruence({self.partition()})"

    def __contains__(self, pair):
        a, b = pair
        return self.blocks[a] == self.blocks[b]

    def related(self, a: int, b: int) -> bool:
        return self.blocks[a] == self.blocks[b]

    def block_of(self, a: int) -> list[int]:
        r = self.blocks[a]
        return [i for i, b in enumerate(self.blocks) if b == r]

    def partition(self) -> list[list[int]]:
        out = {}
        for i, b in enumerate(self.blocks):
            out.setdefault(b, []).append(i)
        return list(out.values())

    @property
    def num_blocks(self) -> int:
        return len(set(self.blocks))

    def is_delta(self) -> bool:
        return self.num_blocks == self.algebra.size

    def is_nabla(self) -> bool:
        return self.num_blocks == 1

    def le(self, other: "Congruence") -> bool:
        _same_parent(self, other)
        return all(other.blocks[i] == other.blocks[b] for i, b in enumerate(self.blocks))

    def matrix(self) -> np.ndarray:
        b = np.array(self.blocks)
        return b[:, None] == b[None, :]

    def is_compatible(self) -> bool:
        return is_compatible(self.algebra, self.blocks)

    def to_json(self):
        return list(self.blocks)


def delta(A: Algebra) -> Congruence:
    return Congruence(A, range(A.size))


def nabla(A: Algebra) -> Congruence:
    return Congruence(A, [0] * A.size)


def kernel(A: Algebra, f: Sequence[int]) -> Congruence:
    """Kernel of a map given as an index array (e.g. a projection)."""
    return Congruence(A, list(f))


def is_compatible(A: Algebra, blocks: Sequence[int]) -> bool:
    """Is the partition compatible with every operation?"""
    lab = np.asarray(blocks)
    n = A.size
    for s, m in A.signature.items():
        if m == 0:
            continue
        img = lab[A.tables[s]]
        for j in range(m):
            # move axis j to the front; rows in one block must agree
            moved = np.moveaxis(img, j, 0).reshape(n, -1)
            for r in set(lab.tolist()):
                rows = moved[lab == r]
                if len(rows) > 1 and not (rows == rows[0]).all():
                    return False
    return True


def _same_parent(a: Congruence, b: Congruence):
    if a.algebra is not b.algebra:
        raise CongruenceError("congruences belong to different algebras")


class _UF:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if a < b:
            a, b = b, a
        self.parent[a] = b
        return True


def _translations(A: Algebra):
    """(symbol, position, arity) for every basic translation slot."""
    return [(s, j, m) for s, m in A.signature.items() if m > 0 for j in range(m)]


def _closure(A: Algebra, pairs, record: bool = False):
    """Union-find congruence closure.

    Pushes the basic translations of every pair that actually merged two
    blocks; that is enough, since the merged pairs span the equivalence.
    With record=True returns the union edges with their provenance:
    (a, b, parent_edge, symbol, position, fixed_args) or
    (a, b, None, generator_index, None, None) for generator edges.
    """
    uf = _UF(A.size)
    slots = _translations(A)
    queue = deque()
    for g, (a, b) in enumerate(pairs):
        queue.append((int(a), int(b), None, g, None, None))
    edges = []
    while queue:
        a, b, parent, s, j, fixed = queue.popleft()
        if not uf.union(a, b):
            continue
        eid = len(edges)
        if record:
            edges.append((a, b, parent, s, j, fixed))
        else:
            edges.append(None)
        for sym, pos, m in slots:
            tab = A.tables[sym]
            ra = np.take(tab, a, axis=pos).reshape(-1)
            rb = np.take(tab, b, axis=pos).reshape(-1)
            diff = np.nonzero(ra != rb)[0]
            for k in diff.tolist():
                fx = None
                if record:
                    others = np.unravel_index(k, (A.size,) * (m - 1)) if m > 1 else ()
                    fx = tuple(int(o) for o in others)
                queue.append((int(ra[k]), int(rb[k]), eid, sym, pos, fx))
    blocks = [uf.find(i) for i in range(A.size)]
    return blocks, edges


def generated_congruence(A: Algebra, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Least congruence containing the given pairs (Cg^A)."""
    pairs = list(pairs)
    for a, b in pairs:
        if not (0 <= a < A.size and 0 <= b < A.size):
            raise CongruenceError(f"pair {(a, b)} outside the universe")
    blocks, _ = _closure(A, pairs)
    return Congruence(A, blocks)


def Cg(A: Algebra, *pairs) -> Congruence:
    return generated_congruence(A, pairs)


def Cg_tuples(A: Algebra, left: Sequence[int], right: Sequence[int]) -> Congruence:
    """Cg(a_vec, b_vec): generated by the pairs (a_k, b_k)."""
    if len(left) != len(right):
        raise CongruenceError("tuples of different length")
    return generated_congruence(A, zip(left, right))


def join(t1: Congruence, t2: Congruence) -> Congruence:
    _same_parent(t1, t2)
    uf = _UF(t1.algebra.size)
    for blocks in (t1.blocks, t2.blocks):
        for i, b in enumerate(blocks):
            uf.union(i, b)
    return Congruence(t1.algebra, [uf.find(i) for i in range(t1.algebra.size)])


def meet(t1: Congruence, t2: Congruence) -> Congruence:
    _same_parent(t1, t2)
    keys = {}
    out = []
    for i, pair in enumerate(zip(t1.blocks, t2.blocks)):
        out.append(keys.setdefault(pair, i))
    return Congruence(t1.algebra, out)


def join_all(A: Algebra, congs: Iterable[Congruence]) -> Congruence:
    out = delta(A)
    for c in congs:
        out = join(out, c)
    return out


def relation(c) -> np.ndarray:
    """Boolean matrix of a congruence (or pass a matrix through)."""
    if isinstance(c, Congruence):
        return c.matrix()
    return np.asarray(c, dtype=bool)


def compose(*rels) -> np.ndarray:
    """Relational product r1 o r2 o ... (a r1 b r2 c ...) as a boolean matrix."""
    out = relation(rels[0])
    for r in rels[1:]:
        out = (out.astype(np.int64) @ relation(r).astype(np.int64)) > 0
    return out


def rel_product(t1: Congruence, t2: Congruence, fold: int = 1) -> np.ndarray:
    """k-fold relational product t1 o t2 o t1 o ... with `fold` compositions.

    Returns a plain relation; it need not be a congruence.
    """
    _same_parent(t1, t2)
    if fold < 0:
        raise CongruenceError("fold must be non-negative")
    rels = [t1 if i % 2 == 0 else t2 for i in range(fold + 1)]
    return compose(*rels)


def principal_congruences(A: Algebra) -> dict[tuple[int, int], Congruence]:
    return {(a, b): Cg(A, (a, b)) for a, b in itertools.combinations(range(A.size), 2)}


def all_congruences(A: Algebra, max_size: int = DEFAULT_MAX_SIZE) -> list[Congruence]:
    """Con(A) as the join closure of the principal congruences.

    Sorted by number of blocks (nabla first, delta last), then by block array.
    """
    if A.size > max_size:
        raise SizeGuardExceeded(f"|A| = {A.size} exceeds the congruence guard {max_size}")
    principals = sorted(set(principal_congruences(A).values()), key=lambda c: c.blocks)
    seen = {delta(A)}
    todo = [delta(A)]
    while todo:
        c = todo.pop()
        for p in principals:
            if p.le(c):
                continue
            j = join(c, p)
            if j not in seen:
                seen.add(j)
                todo.append(j)
    return sorted(seen, key=lambda c: (c.num_blocks, c.blocks))


# ---------------------------------------------------------------------------
# Mal'cev chains

@dataclass
class MalcevChain:
    """Witness that (a, b) lies in Cg(left, right).

    terms[i] are unary polynomials in the generator slots x1..xm and the
    parameters in `params`.  Replay: a = p1(left), p_i(right) = p_{i+1}(right)
    for odd i, p_i(left) = p_{i+1}(left) for even i, p_k(right) = b (1-based).
    """

    algebra: Algebra
    a: int
    b: int
    left: tuple[int, ...]
    right: tuple[int, ...]
    terms: list[Term]
    params: dict[str, int] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.terms)

    def slot_names(self):
        return [f"x{j + 1}" for j in range(len(self.left))]

    def values(self):
        """[(p_i(left), p_i(right))] for every term."""
        names = self.slot_names()
        envl = dict(zip(names, self.left), **self.params)
        envr = dict(zip(names, self.right), **self.params)
        return [(eval_term(self.algebra, t, envl), eval_term(self.algebra, t, envr))
                for t in self.terms]

    def replay(self) -> bool:
        if not self.terms:
            return self.a == self.b
        if self.k % 2 == 0:
            return False
        vals = self.values()
        if vals[0][0] != self.a or vals[-1][1] != self.b:
            return False
        for i in range(self.k - 1):
            # 1-based index i+1 odd -> compare at right, even -> at left
            side = 1 if i % 2 == 0 else 0
            if vals[i][side] != vals[i + 1][side]:
                return False
        return True

    def to_json(self):
        return {"a": self.a, "b": self.b, "left": list(self.left), "right": list(self.right),
                "terms": [str(t) for t in self.terms], "params": self.params}


def malcev_chain(A: Algebra, target: tuple[int, int],
                 generators: Sequence[tuple[int, int]]) -> MalcevChain:
    """Extract a replayable Mal'cev chain for target from the closure provenance."""
    generators = [(int(a), int(b)) for a, b in generators]
    left = tuple(a for a, _ in generators)
    right = tuple(b for _, b in generators)
    c, d = int(target[0]), int(target[1])
    if c == d:
        return MalcevChain(A, c, d, left, right, [])
    blocks, edges = _closure(A, generators, record=True)
    uf_root = blocks
    if uf_root[c] != uf_root[d]:
        raise CongruenceError(f"{(c, d)} is not in the generated congruence")

    params: dict[str, int] = {}

    def param(v):
        name = f"u{v}"
        params[name] = v
        return Var(name)

    cache: dict[int, Term] = {}

    def poly(eid) -> Term:
        if eid in cache:
            return cache[eid]
        a, b, parent, s, j, fixed = edges[eid]
        if parent is None:
            t = Var(f"x{s + 1}")
        else:
            inner = poly(parent)
            args = [param(v) for v in fixed]
            args.insert(j, inner)
            t = App(s, tuple(args))
        cache[eid] = t
        return t

    adj: dict[int, list[tuple[int, int, bool]]] = {}
    for eid, (a, b, *_rest) in enumerate(edges):
        adj.setdefault(a, []).append((b, eid, True))
        adj.setdefault(b, []).append((a, eid, False))
    prev = {c: None}
    q = deque([c])
    while q:
        v = q.popleft()
        if v == d:
            break
        for w, eid, fwd in adj.get(v, []):
            if w not in prev:
                prev[w] = (v, eid, fwd)
                q.append(w)
    steps = []
    v = d
    while prev[v] is not None:
        u, eid, fwd = prev[v]
        steps.append((eid, fwd, u, v))
        v = u
    steps.reverse()

    # odd slots move left->right (forward edges), even slots right->left;
    # constant polynomials fill parity gaps
    terms: list[Term] = []
    for eid, fwd, u, v in steps:
        want_forward = len(terms) % 2 == 0
        if fwd != want_forward:
            terms.append(param(u))
        terms.append(poly(eid))
    if len(terms) % 2 == 0:
        terms.append(param(d))
    return MalcevChain(A, c, d, left, right, terms, params)
