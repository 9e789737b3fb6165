"""Finite algebras: signatures, operation tables, products, subalgebras,
homomorphisms and the JSON file format.

Elements are the indices ``0..size-1``.  Every algebra may carry a tuple of
labels (an int, or a coordinate tuple for products) used for display and
for looking up elements by their mathematical name.

JSON format::

    {"signature": [{"name": "+", "arity": 2}, ...],
     "size": 5,
     "tables": {"+": [...row-major...], "0": [0], "1": [1]},
     "labels": [...]}            # optional

``tables[f]`` lists ``f(a1,...,am)`` in row-major order of the argument
tuple, so a binary table is ``[f(0,0), f(0,1), ..., f(n-1,n-1)]``.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_ARITY = 8


class AlgebraError(ValueError):
    pass


class AlgebraSyntaxError(AlgebraError):
    pass


class ArityError(AlgebraError):
    pass


class TableRangeError(AlgebraError):
    pass


class SignatureMismatch(AlgebraError):
    pass


class Signature:
    """Ordered operation symbols with arities; constants have arity 0."""

    def __init__(self, ops: Iterable[tuple[str, int]]):
        self._ops: dict[str, int] = {}
        for name, arity in ops:
            if name in self._ops:
                raise AlgebraError(f"duplicate symbol {name!r}")
            if not isinstance(arity, int) or arity < 0:
                raise ArityError(f"bad arity {arity!r} for {name!r}")
            self._ops[name] = arity

    def arity(self, name: str) -> int:
        return self._ops[name]

    def items(self):
        return self._ops.items()

    def names(self):
        return list(self._ops)

    def constants(self):
        return [s for s, m in self._ops.items() if m == 0]

    def __contains__(self, name):
        return name in self._ops

    def __iter__(self):
        return iter(self._ops)

    def __len__(self):
        return len(self._ops)

    def __eq__(self, other):
        return isinstance(other, Signature) and list(self._ops.items()) == list(other._ops.items())

    def __hash__(self):
        return hash(tuple(self._ops.items()))

    def __repr__(self):
        return f"Signature({list(self._ops.items())!r})"

    def to_json(self):
        return [{"name": s, "arity": m} for s, m in self._ops.items()]


class Algebra:
    """A finite algebra with fully materialized operation tables.

    ``tables[f]`` is a read-only integer array of shape ``(size,)*arity``;
    ``lists[f]`` holds the same data as nested lists for fast scalar lookup.
    """

    def __init__(self, signature: Signature, size: int, tables: Mapping[str, object],
                 labels: Sequence | None = None, name: str | None = None):
        if size < 1:
            raise AlgebraError("an algebra is nonempty")
        self.signature = signature
        self.size = size
        self.name = name
        self.tables: dict[str, np.ndarray] = {}
        self.lists: dict[str, object] = {}
        for s, m in signature.items():
            if s not in tables:
                raise AlgebraError(f"missing table for {s!r}")
            if m > MAX_ARITY:
                raise ArityError(f"arity {m} of {s!r} exceeds {MAX_ARITY}")
            arr = np.asarray(tables[s], dtype=np.int64)
            if arr.size != size ** m:
                raise AlgebraError(f"table {s!r} has {arr.size} entries, expected {size ** m}")
            arr = arr.reshape((size,) * m)
            if arr.size and (arr.min() < 0 or arr.max() >= size):
                raise TableRangeError(f"table {s!r} has an entry outside 0..{size - 1}")
            arr.setflags(write=False)
            self.tables[s] = arr
            self.lists[s] = arr.tolist()
        extra = set(tables) - set(signature)
        if extra:
            raise AlgebraError(f"tables for unknown symbols {sorted(extra)}")
        if labels is None:
            labels = tuple(range(size))
        labels = tuple(_freeze(x) for x in labels)
        if len(labels) != size or len(set(labels)) != size:
            raise AlgebraError("labels must be distinct and one per element")
        self.labels = labels
        self._index = {x: i for i, x in enumerate(labels)}

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<Algebra{nm} size={self.size} ops={self.signature.names()}>"

    def __len__(self):
        return self.size

    def op(self, name: str, *args: int) -> int:
        t = self.lists[name]
        if not args:
            return int(self.tables[name])
        for a in args:
            t = t[a]
        return t

    def const(self, name: str) -> int:
        return int(self.tables[name])

    def index(self, label) -> int:
        """Element index of a label, e.g. ``P.index((3, 0))``."""
        return self._index[_freeze(label)]

    def label(self, i: int):
        return self.labels[i]

    def same_tables(self, other: "Algebra") -> bool:
        return (self.signature == other.signature and self.size == other.size
                and all(np.array_equal(self.tables[s], other.tables[s]) for s in self.signature))

    def relabel(self, labels=None, name=None) -> "Algebra":
        return Algebra(self.signature, self.size, self.tables,
                       labels=self.labels if labels is None else labels,
                       name=self.name if name is None else name)


def _freeze(x):
    if isinstance(x, list):
        return tuple(_freeze(y) for y in x)
    if isinstance(x, np.integer):
        return int(x)
    return x


def trivial_algebra(signature: Signature) -> Algebra:
    return Algebra(signature, 1, {s: np.zeros((1,) * m, dtype=np.int64) for s, m in signature.items()},
                   name="1")


# ---------------------------------------------------------------------------
# element maps

@dataclass(frozen=True)
class ElementMap:
    """Partial injective map between the universes of two algebras."""

    mapping: Mapping[int, int]
    source_size: int
    target_size: int

    def __post_init__(self):
        m = dict(self.mapping)
        if len(set(m.values())) != len(m):
            raise ValueError("ElementMap must be injective")
        for a, b in m.items():
            if not (0 <= a < self.source_size and 0 <= b < self.target_size):
                raise ValueError(f"pair {(a, b)} out of range")
        object.__setattr__(self, "mapping", m)

    @classmethod
    def identity(cls, A: Algebra) -> "ElementMap":
        return cls({i: i for i in range(A.size)}, A.size, A.size)

    def __getitem__(self, a):
        return self.mapping[a]

    def __contains__(self, a):
        return a in self.mapping

    def __len__(self):
        return len(self.mapping)

    def items(self):
        return self.mapping.items()

    def inverse(self) -> "ElementMap":
        return ElementMap({b: a for a, b in self.mapping.items()}, self.target_size, self.source_size)

    def as_list(self):
        """Index array for a total map (JSON friendly)."""
        return [self.mapping[i] for i in range(self.source_size)]


# ---------------------------------------------------------------------------
# products and subalgebras

def encode(sizes: Sequence[int], coords: Sequence[int]) -> int:
    """Row-major index of a coordinate tuple."""
    i = 0
    for n, c in zip(sizes, coords):
        i = i * n + c
    return i


def decode(sizes: Sequence[int], i: int) -> tuple[int, ...]:
    out = []
    for n in reversed(sizes):
        out.append(i % n)
        i //= n
    return tuple(reversed(out))


class ProductAlgebra(Algebra):
    """Direct product with row-major encoding; keeps its factors."""

    def __init__(self, factors: Sequence[Algebra], name=None):
        if not factors:
            raise AlgebraError("direct product needs at least one factor")
        sig = factors[0].signature
        for F in factors[1:]:
            if F.signature != sig:
                raise SignatureMismatch("factors have different signatures")
        sizes = tuple(F.size for F in factors)
        size = int(np.prod(sizes))
        coords = np.array(list(itertools.product(*(range(n) for n in sizes))), dtype=np.int64)
        coords = coords.reshape(size, len(factors))
        tables = {}
        for s, m in sig.items():
            if m == 0:
                tables[s] = encode(sizes, [F.const(s) for F in factors])
                continue
            grids = np.meshgrid(*([np.arange(size)] * m), indexing="ij")
            out = np.zeros((size,) * m, dtype=np.int64)
            for k, F in enumerate(factors):
                args = tuple(coords[g, k] for g in grids)
                out = out * sizes[k] + F.tables[s][args]
            tables[s] = out
        labels = [tuple(F.labels[c] for F, c in zip(factors, row)) for row in coords.tolist()]
        if name is None and all(F.name for F in factors):
            name = "x".join(F.name for F in factors)
        super().__init__(sig, size, tables, labels=labels, name=name)
        self.factors = tuple(factors)
        self.sizes = sizes

    def element(self, *coords: int) -> int:
        return encode(self.sizes, coords)

    def coords(self, i: int) -> tuple[int, ...]:
        return decode(self.sizes, i)

    def projection(self, k: int) -> np.ndarray:
        """Projection onto factor k as an index array (not injective, so not an ElementMap)."""
        return np.array([decode(self.sizes, i)[k] for i in range(self.size)], dtype=np.int64)


def direct_product(algebras: Sequence[Algebra], name=None) -> ProductAlgebra:
    return ProductAlgebra(list(algebras), name=name)


def subuniverse_closure(A: Algebra, seed: Iterable[int]) -> frozenset[int]:
    """Least subuniverse containing seed (and all constants)."""
    closed = set(int(a) for a in seed)
    for s in A.signature.constants():
        closed.add(A.const(s))
    ops = [(s, m) for s, m in A.signature.items() if m > 0]
    frontier = set(closed)
    while frontier:
        new = set()
        old = sorted(closed)
        for s, m in ops:
            tab = A.tables[s]
            # tuples touching the frontier at least once
            for args in itertools.product(old, repeat=m):
                if frontier.isdisjoint(args):
                    continue
                v = int(tab[args])
                if v not in closed:
                    new.add(v)
        closed |= new
        frontier = new
    return frozenset(closed)


def is_subuniverse(A: Algebra, subset: Iterable[int]) -> bool:
    S = set(subset)
    return bool(S) and subuniverse_closure(A, S) == S


def subalgebra(A: Algebra, subset: Iterable[int], name=None) -> tuple[Algebra, list[int]]:
    """Induced subalgebra on a closed subset.

    Returns the subalgebra (elements reindexed in increasing order of their
    index in A, labels inherited) and the embedding as a list.
    """
    elems = sorted(set(int(a) for a in subset))
    if not elems or subuniverse_closure(A, elems) != set(elems):
        raise AlgebraError("subset is not closed under the operations")
    pos = {a: i for i, a in enumerate(elems)}
    lookup = np.full(A.size, -1, dtype=np.int64)
    for a, i in pos.items():
        lookup[a] = i
    idx = np.array(elems, dtype=np.int64)
    tables = {}
    for s, m in A.signature.items():
        if m == 0:
            tables[s] = pos[A.const(s)]
        else:
            tables[s] = lookup[A.tables[s][np.ix_(*([idx] * m))]]
    B = Algebra(A.signature, len(elems), tables, labels=[A.labels[a] for a in elems], name=name)
    return B, elems


def quotient(A: Algebra, blocks: Sequence[int], name=None) -> tuple[Algebra, list[int]]:
    """Quotient by a congruence given as a block-id array.

    Quotient elements are the blocks ordered by least member; returns the
    algebra and the natural map as a list.
    """
    reps = sorted(set(int(b) for b in blocks))
    pos = {r: i for i, r in enumerate(reps)}
    nat = [pos[int(b)] for b in blocks]
    idx = np.array(reps, dtype=np.int64)
    natv = np.array(nat, dtype=np.int64)
    tables = {}
    for s, m in A.signature.items():
        if m == 0:
            tables[s] = nat[A.const(s)]
        else:
            tables[s] = natv[A.tables[s][np.ix_(*([idx] * m))]]
    return Algebra(A.signature, len(reps), tables, labels=[A.labels[r] for r in reps], name=name), nat


# ---------------------------------------------------------------------------
# homomorphisms and isomorphisms

def check_homomorphism(A: Algebra, B: Algebra, m, total: bool = False) -> bool:
    """Does m commute with every operation wherever both sides are defined?

    m may be an ElementMap, a dict or a total index list.  With total=True
    the domain must be all of A.  On a partial map, f(a1..am) must lie in
    the domain whenever all ai do.
    """
    if A.signature != B.signature:
        return False
    mapping = _as_dict(m)
    if total and set(mapping) != set(range(A.size)):
        return False
    dom = sorted(mapping)
    for s, k in A.signature.items():
        if k == 0:
            c = A.const(s)
            if c in mapping and mapping[c] != B.const(s):
                return False
            continue
        ta, tb = A.lists[s], B.lists[s]
        for args in itertools.product(dom, repeat=k):
            v = _lookup(ta, args)
            if v not in mapping:
                return False
            if mapping[v] != _lookup(tb, [mapping[a] for a in args]):
                return False
    return True


def is_partial_isomorphism(A: Algebra, B: Algebra, m, with_constants: bool = True) -> bool:
    """Operation-graph partial isomorphism test.

    For every m-ary f, all a1..am and b in the domain:
    f(a) = b  iff  f(g(a)) = g(b).  With with_constants the pairs
    (c^A, c^B) are added for every constant first.
    """
    mapping = dict(_as_dict(m))
    if with_constants:
        for s in A.signature.constants():
            a, b = A.const(s), B.const(s)
            if mapping.get(a, b) != b:
                return False
            mapping[a] = b
    if len(set(mapping.values())) != len(mapping):
        return False
    inv = {b: a for a, b in mapping.items()}
    dom = list(mapping)
    for s, k in A.signature.items():
        if k == 0:
            continue
        ta, tb = A.lists[s], B.lists[s]
        for args in itertools.product(dom, repeat=k):
            va = _lookup(ta, args)
            vb = _lookup(tb, [mapping[a] for a in args])
            if va in mapping:
                if mapping[va] != vb:
                    return False
            elif vb in inv:
                return False
    return True


def is_isomorphism(A: Algebra, B: Algebra, m) -> bool:
    mapping = _as_dict(m)
    return (A.size == B.size and len(set(mapping.values())) == A.size
            and check_homomorphism(A, B, mapping, total=True))


def _as_dict(m):
    if isinstance(m, ElementMap):
        return m.mapping
    if isinstance(m, Mapping):
        return m
    return {i: int(v) for i, v in enumerate(m)}


def _lookup(tab, args):
    for a in args:
        tab = tab[a]
    return tab


def element_invariants(A: Algebra) -> list[tuple]:
    """Isomorphism-invariant fingerprint of each element."""
    inv = [[] for _ in range(A.size)]
    for s, m in A.signature.items():
        tab = A.tables[s]
        if m == 0:
            c = int(tab)
            for a in range(A.size):
                inv[a].append(a == c)
            continue
        counts = Counter(tab.ravel().tolist())
        diag = tab[(np.arange(A.size),) * m]
        for a in range(A.size):
            inv[a].append(counts[a])
            inv[a].append(int(diag[a]) == a)
            if m == 2:
                inv[a].append(int(np.sum(tab[a, :] == a)))
                inv[a].append(int(np.sum(tab[:, a] == a)))
    return [tuple(x) for x in inv]


def find_isomorphism(A: Algebra, B: Algebra) -> ElementMap | None:
    """Backtracking isomorphism search with invariant pruning.

    Exponential in the worst case; intended for algebras of up to about 30
    elements.
    """
    if A.signature != B.signature or A.size != B.size:
        return None
    ia, ib = element_invariants(A), element_invariants(B)
    if sorted(ia) != sorted(ib):
        return None
    cands = {a: [b for b in range(B.size) if ib[b] == ia[a]] for a in range(A.size)}
    start = {}
    for s in A.signature.constants():
        a, b = A.const(s), B.const(s)
        if start.get(a, b) != b or ia[a] != ib[b]:
            return None
        start[a] = b
    if len(set(start.values())) != len(start):
        return None
    ops = [(s, m) for s, m in A.signature.items() if m > 0]

    def propagate(mp):
        # extend by forced values f(a) -> f(g(a)); None on conflict
        mp = dict(mp)
        used = set(mp.values())
        changed = True
        while changed:
            changed = False
            dom = list(mp)
            for s, m in ops:
                ta, tb = A.lists[s], B.lists[s]
                for args in itertools.product(dom, repeat=m):
                    va = _lookup(ta, args)
                    vb = _lookup(tb, [mp[a] for a in args])
                    if va in mp:
                        if mp[va] != vb:
                            return None
                    else:
                        if vb in used or ib[vb] != ia[va]:
                            return None
                        mp[va] = vb
                        used.add(vb)
                        changed = True
        return mp

    def search(mp):
        if mp is None:
            return None
        if len(mp) == A.size:
            return mp if is_isomorphism(A, B, mp) else None
        a = min((x for x in range(A.size) if x not in mp), key=lambda x: len(cands[x]))
        used = set(mp.values())
        for b in cands[a]:
            if b in used:
                continue
            trial = dict(mp)
            trial[a] = b
            found = search(propagate(trial))
            if found is not None:
                return found
        return None

    res = search(propagate(start))
    return None if res is None else ElementMap(res, A.size, B.size)


# ---------------------------------------------------------------------------
# JSON

def algebra_to_json(A: Algebra) -> dict:
    d = {
        "signature": A.signature.to_json(),
        "size": A.size,
        "tables": {s: np.asarray(A.tables[s]).reshape(-1).tolist() for s in A.signature},
    }
    if A.labels != tuple(range(A.size)):
        d["labels"] = [list(x) if isinstance(x, tuple) else x for x in A.labels]
    if A.name:
        d["name"] = A.name
    return d


def dumps_algebra(A: Algebra, **kw) -> str:
    return json.dumps(algebra_to_json(A), **kw)


def parse_algebra(text: str) -> Algebra:
    """Parse the JSON algebra format; raises a specific AlgebraError subclass."""
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise AlgebraSyntaxError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    return algebra_from_json(d)


def algebra_from_json(d) -> Algebra:
    if not isinstance(d, dict):
        raise AlgebraSyntaxError("algebra must be a JSON object")
    for key in ("signature", "size", "tables"):
        if key not in d:
            raise AlgebraSyntaxError(f"missing field {key!r}")
    try:
        ops = [(o["name"], o["arity"]) for o in d["signature"]]
    except (TypeError, KeyError):
        raise AlgebraSyntaxError("signature entries need 'name' and 'arity'") from None
    for name, arity in ops:
        if not isinstance(name, str) or not isinstance(arity, int) or arity < 0:
            raise AlgebraSyntaxError(f"bad signature entry {name!r}/{arity!r}")
        if arity > MAX_ARITY:
            raise ArityError(f"arity {arity} of {name!r} exceeds {MAX_ARITY}")
    sig = Signature(ops)
    size = d["size"]
    if not isinstance(size, int) or size < 1:
        raise AlgebraSyntaxError("size must be a positive integer")
    tables = d["tables"]
    if not isinstance(tables, dict):
        raise AlgebraSyntaxError("tables must be an object")
    parsed = {}
    for s, m in sig.items():
        if s not in tables:
            raise AlgebraSyntaxError(f"missing table for {s!r}")
        vals = tables[s]
        if not isinstance(vals, list) or not all(isinstance(v, int) for v in vals):
            raise AlgebraSyntaxError(f"table {s!r} must be a flat list of integers")
        if len(vals) != size ** m:
            raise ArityError(f"table {s!r} has {len(vals)} entries; arity {m} needs {size ** m}")
        for k, v in enumerate(vals):
            if not 0 <= v < size:
                raise TableRangeError(f"table {s!r} entry {k} is {v}, outside 0..{size - 1}")
        parsed[s] = np.array(vals, dtype=np.int64).reshape((size,) * m)
    extra = set(tables) - set(sig)
    if extra:
        raise AlgebraSyntaxError(f"tables for unknown symbols {sorted(extra)}")
    return Algebra(sig, size, parsed, labels=d.get("labels"), name=d.get("name"))


def load_algebra(path) -> Algebra:
    with open(path) as fh:
        return parse_algebra(fh.read())
