"""The example algebras L_n, D_n, their join expansions, and products.

L_n has universe {0..n-1} and

    x + 0 = x    0 + 1 = 0    1 + 1 = 1
    x * 0 = 0    0 * 1 = 0    1 * 1 = 1

with every other sum or product equal to 2.  The join expansion adds
a v b = min(a, b), i.e. the chain 0 > 1 > 2 > ... with 0 on top.

D_n is the subalgebra of L_2 x L_{n+1} on (2 x n) u {(1, n)}.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, AlgebraError, Signature, direct_product, is_subuniverse, subalgebra

JOIN = "join"
SIG_L = Signature([("+", 2), ("*", 2), ("0", 0), ("1", 0)])
SIG_LJ = Signature([("+", 2), ("*", 2), ("0", 0), ("1", 0), (JOIN, 2)])


def build_L(n: int, with_join: bool = False) -> Algebra:
    if n < 2:
        raise AlgebraError("L_n needs n >= 2")
    plus = np.full((n, n), 2, dtype=np.int64)
    times = np.full((n, n), 2, dtype=np.int64)
    plus[:, 0] = np.arange(n)
    plus[0, 1] = 0
    plus[1, 1] = 1
    times[:, 0] = 0
    times[0, 1] = 0
    times[1, 1] = 1
    tables = {"+": plus, "*": times, "0": 0, "1": 1}
    sig = SIG_L
    name = f"L{n}"
    if with_join:
        a = np.arange(n)
        tables[JOIN] = np.minimum(a[:, None], a[None, :])
        sig = SIG_LJ
        name += "v"
    return Algebra(sig, n, tables, name=name)


def product_L(m: int, n: int, with_join: bool = False):
    return direct_product([build_L(m, with_join), build_L(n, with_join)])


def build_D(n: int, with_join: bool = False) -> Algebra:
    """D_n with coordinate labels (i, j) taken from L_2 x L_{n+1}."""
    if n < 3:
        raise AlgebraError("D_n needs n >= 3")
    P = product_L(2, n + 1, with_join)
    universe = [P.element(i, j) for i in range(2) for j in range(n)] + [P.element(1, n)]
    if not is_subuniverse(P, universe):
        raise AssertionError(f"D_{n} is not closed; table bug")
    D, _ = subalgebra(P, universe, name=f"D{n}" + ("v" if with_join else ""))
    return D


def figure_subalgebra() -> tuple[Algebra, Algebra]:
    """L = (L5v x L2v) minus {(3,1), (4,0)}; returns (L, L5v x L2v)."""
    P = product_L(5, 2, with_join=True)
    drop = {P.element(3, 1), P.element(4, 0)}
    L, _ = subalgebra(P, [a for a in range(P.size) if a not in drop], name="L")
    return L, P


def P0(A: Algebra) -> list[int]:
    """Elements labelled (0, j) with j >= 3."""
    return [i for i, x in enumerate(A.labels) if x[0] == 0 and x[1] >= 3]


def P1(A: Algebra) -> list[int]:
    """Elements labelled (1, j) with j >= 3."""
    return [i for i, x in enumerate(A.labels) if x[0] == 1 and x[1] >= 3]


def base_part(A: Algebra) -> list[int]:
    """Elements labelled (i, j) with j < 3, i.e. the 2 x 3 part."""
    return [i for i, x in enumerate(A.labels) if x[1] < 3]


@dataclass(frozen=True)
class GallerySpec:
    family: str  # "L", "Lvee", "D", "product", "product-vee", "subalgebra-L"
    n: int = 2
    m: int | None = None

    def build(self) -> Algebra:
        if self.family == "L":
            return build_L(self.n)
        if self.family == "Lvee":
            return build_L(self.n, with_join=True)
        if self.family == "D":
            return build_D(self.n)
        if self.family in ("product", "product-vee"):
            return product_L(self.m or 2, self.n, with_join=self.family == "product-vee")
        if self.family == "subalgebra-L":
            return figure_subalgebra()[0]
        raise ValueError(f"unknown gallery family {self.family!r}")


def gallery(max_size: int = 12, variety: str = "all", max_L: int = 10) -> list[Algebra]:
    """Named example algebras with at most max_size elements.

    variety is "VL" (signature +,*,0,1), "Vvee" (with join) or "all".
    Plain chains L_n are included up to n = max_L: Con(L_n) grows like the Bell
    number of n-2 (L_11 alone takes ~15 s), so longer chains are only
    built on request.
    """
    out = []
    want_l = variety in ("VL", "all")
    want_v = variety in ("Vvee", "all")
    for n in range(2, max_size + 1):
        if want_l and n <= max_L:
            out.append(build_L(n))
        if want_v:
            out.append(build_L(n, True))
    if want_l:
        for n in range(3, (max_size - 1) // 2 + 1):
            out.append(build_D(n))
    for m in range(2, max_size + 1):
        for n in range(m, max_size // m + 1):
            if want_l:
                out.append(product_L(m, n))
            if want_v:
                out.append(product_L(m, n, True))
    if want_v and max_size >= 8:
        out.append(figure_subalgebra()[0])
    return out


def parse_gallery_name(name: str) -> Algebra:
    """Build from a short name: L5, L5v, D5, L2xL5, L2vxL5v, L (figure subalgebra)."""
    name = name.strip()
    if name == "L":
        return figure_subalgebra()[0]
    if "x" in name:
        parts = [parse_gallery_name(p) for p in name.split("x")]
        return direct_product(parts)
    try:
        if name.startswith("L"):
            if name.endswith("v"):
                return build_L(int(name[1:-1]), True)
            return build_L(int(name[1:]))
        if name.startswith("D"):
            if name.endswith("v"):
                return build_D(int(name[1:-1]), True)
            return build_D(int(name[1:]))
    except ValueError:
        pass
    raise ValueError(f"unknown gallery algebra {name!r}")
