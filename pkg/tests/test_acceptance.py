"""Acceptance criteria 1-11, one test each.

Every test prints a single PASS/FAIL line with its wall time.  Run as
``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import random
import sys
import time
from contextlib import contextmanager
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from factorium.algebra import direct_product, trivial_algebra  # noqa: E402
from factorium.congruence import generated_congruence  # noqa: E402
from factorium.factorization import (ZeroOneSpec, central_elements, complementary_pairs,  # noqa: E402
                                     decompose, factor_congruences, is_directly_indecomposable)
from factorium.fol import (Eq, build_EO, check_factor_preservation, check_product_preservation,  # noqa: E402
                           compile_formula, parse_formula, sigma_suite)
from factorium.fol.games import EXISTS, ef_game, replay_strategy  # noqa: E402
from factorium.gallery import build_D, build_L, gallery, product_L  # noqa: E402
from factorium.malcev import (MalcevFamily, UChain, check_malcev_identities, find_u_chain,  # noqa: E402
                              validate_u_chain, words)
from factorium.pipelines import (SEMILATTICE_CHAIN, figure_checks, check_partial_maps,  # noqa: E402
                                 copy_strategy, semilattice_phi)
from factorium.terms import enumerate_terms  # noqa: E402

Z = ZeroOneSpec.default()


@contextmanager
def criterion(number: int, title: str, limit: float | None = None):
    """Time the block and print one PASS/FAIL line whatever happens."""
    start = time.perf_counter()
    status, note = "FAIL", ""
    try:
        yield
        took = time.perf_counter() - start
        if limit is not None and took >= limit:
            raise AssertionError(f"over the {limit:g} s limit")
        status = "PASS"
    except AssertionError as e:
        note = f" ({e})" if str(e) else ""
        raise
    finally:
        took = time.perf_counter() - start
        bound = f" (limit {limit:g} s)" if limit is not None else ""
        print(f"\nAC{number:<2} {status}  {took:7.2f} s{bound}  {title}{note}")


def test_ac01_congruence_oracle():
    with criterion(1, "generated congruences match the partition filter (size <= 6)", 10):
        checked = 0
        for A in gallery(6):
            cons = oracles.all_congruences_naive(A)
            for a, b in itertools.product(range(A.size), repeat=2):
                want = oracles.least_containing(cons, [(a, b)])
                got = oracles.pairs_of(generated_congruence(A, [(a, b)]).blocks)
                assert got == want, f"{A.name} {(a, b)}"
                checked += 1
        assert checked > 0


def test_ac02_decomposition_soundness():
    with criterion(2, "every decomposition of gallery algebras (size <= 12) reconstructs", 30):
        for A in gallery(12):
            for r in decompose(A):
                assert r.verify(), A.name
        assert is_directly_indecomposable(build_D(5))
        sizes = {tuple(sorted((r.left.size, r.right.size))) for r in decompose(product_L(2, 5))}
        assert (2, 5) in sizes


def test_ac03_semilattice_formula_on_products():
    with criterion(3, "Phi_sem(<a,b>,<c,d>,[0,1]) iff a = c on join products (sizes <= 5)", 120):
        phi = semilattice_phi()
        factors = gallery(5, "Vvee")
        assert sorted(A.name for A in factors) == ["L2v", "L2vxL2v", "L3v", "L4v", "L5v"]
        bad = 0
        for A, B in itertools.product(factors, repeat=2):
            P = direct_product([A, B])
            f = compile_formula(P, phi, ["x", "y", "z"])
            e = P.element(A.const("0"), B.const("1"))
            for a, c in itertools.product(range(A.size), repeat=2):
                for b, d in itertools.product(range(B.size), repeat=2):
                    if f(P.element(a, b), P.element(c, d), e) != (a == c):
                        bad += 1
        assert bad == 0, f"{bad} counterexamples"


def test_ac04_central_elements_to_factor_congruences():
    with criterion(4, "e -> Phi_sem(.,.,e) is a bijection onto the factor congruences of L2v x L5v"):
        P = product_L(2, 5, True)
        phi = compile_formula(P, semilattice_phi(), ["x", "y", "z"])
        central = sorted({c.value[0] for c in central_elements(P, Z)})
        factors = {c.blocks for c in factor_congruences(P)}
        images = {}
        for e in central:
            rel = frozenset((x, y) for x in range(P.size) for y in range(P.size) if phi(x, y, e))
            images[e] = rel
        as_blocks = {}
        for e, rel in images.items():
            lab = tuple(min(y for y in range(P.size) if (x, y) in rel) for x in range(P.size))
            assert oracles.pairs_of(lab) == rel, "image is not an equivalence relation"
            as_blocks[e] = lab
        # counts fixed by the brute-force oracle: 25 congruences, 4 factor congruences, 4 central
        assert len(oracles.all_congruences_naive(P)) == 25
        assert len(central) == 4 and len(factors) == 4
        assert len(set(as_blocks.values())) == len(central), "not injective"
        assert set(as_blocks.values()) == factors, "not onto the factor congruences"


def test_ac05_sigma_suite():
    with criterion(5, "Sigma holds at ((0,1),(1,0)) and fails by name at non-central pairs", 60):
        P = product_L(2, 5, True)
        suite = sigma_suite(P.signature, semilattice_phi(), Z)
        compiled = [(name, compile_formula(P, f, ["e", "f"])) for name, f in suite]
        e, f = P.element(0, 1), P.element(1, 0)
        failing = [name for name, g in compiled if not g(e, f)]
        assert not failing, f"complementary pair fails {failing}"
        complementary = {(e[0], f[0]) for e, f in complementary_pairs(P, Z)}
        probes = [((0, 0), (0, 0)), ((0, 2), (1, 0)), ((1, 3), (0, 4)), ((0, 1), (0, 1))]
        named = {}
        for le, lf in probes:
            e, f = P.index(le), P.index(lf)
            assert (e, f) not in complementary
            named[(le, lf)] = [name for name, g in compiled if not g(e, f)]
        assert sum(1 for v in named.values() if v) >= 3, named
        assert "CAN" in named[((0, 0), (0, 0))]


def test_ac06_ef_game():
    with criterion(6, "Duplicator wins n-3 rounds on D_n vs L2 x L_n (n = 4, 5, 6)"):
        for n in (4, 5, 6):
            D, P = build_D(n), product_L(2, n)
            start = time.perf_counter()
            res = ef_game(D, P, n - 3)
            assert res.winner == EXISTS, f"search says Spoiler wins at n={n}"
            assert replay_strategy(D, P, n - 3, copy_strategy(D, P)).ok, f"copy strategy fails at n={n}"
            took = time.perf_counter() - start
            if n == 6:
                assert took < 60, f"n=6 took {took:.1f} s"


def test_ac07_partial_isomorphisms():
    with criterion(7, "every admissible partial map D5 -> L2 x L5 is a partial isomorphism"):
        rep = check_partial_maps(5)
        assert rep["checked"] > 0 and not rep["failures"]


def test_ac08_u_chain():
    with criterion(8, "the chain (x+z, x*z, y*z, y+z, y) validates; depth-2 search finds an odd chain"):
        for variety in ("VL", "Vvee"):
            algs = gallery(6, variety)
            assert validate_u_chain(algs, UChain(SEMILATTICE_CHAIN, Z)).ok, variety
            u = find_u_chain(algs, 2)
            assert u is not None and u.k % 2 == 1 and u.k <= 7, variety


def test_ac09_figures():
    with criterion(9, "F is an isomorphism, theta < ker pi1, transport gives (true, true, false)"):
        rep = figure_checks()
        assert rep["F_isomorphism"] and rep["L_closed"]
        assert rep["theta_le_ker_pi1"] and rep["theta_ne_ker_pi1"]
        assert rep["transport"] == [True, True, False]


def test_ac10_identity_checker():
    with criterion(10, "one-element algebra passes any family; L_a = R_a := x fails on L2"):
        sig = build_L(2).signature
        T = trivial_algebra(sig)
        rnd = random.Random(0)
        short = [str(t) for t in enumerate_terms(sig, ["x", "y", "z"], 1)]
        long = [str(t) for t in enumerate_terms(sig, ["x", "y", "z", "x1", "y1"], 1)]
        for _ in range(20):
            fam = MalcevFamily.uniform(2, 1, Z, s=[rnd.choice(short)], t=[rnd.choice(short)],
                                       L={w: rnd.choice(long) for w in words(2)},
                                       R={w: rnd.choice(long) for w in words(2)}, signature=sig)
            assert check_malcev_identities(T, fam).holds
        bad = MalcevFamily.uniform(2, 0, Z, L_default="x", R_default="x", signature=sig)
        rep = check_malcev_identities(build_L(2), bad)
        assert not rep.holds
        assert any(r.counter is not None for r in rep.results if not r.holds)


def test_ac11_preservation():
    with criterion(11, "build_EO over atomic taus is preserved on (L2, L3); cardinality formula is not"):
        A, B = build_L(2), build_L(3)
        terms = list(enumerate_terms(A.signature, ["x", "y", "z", "x1", "y1"], 1))
        for seed in range(10):
            rnd = random.Random(seed)
            taus = {w: Eq(rnd.choice(terms), rnd.choice(terms)) for w in words(2, 2, 1)}
            phi = build_EO(taus, 2, 1)
            assert check_product_preservation(phi, A, B, order=["x", "y", "z"]).ok
            assert check_factor_preservation(phi, A, B, order=["x", "y", "z"]).ok
        card = parse_formula("(exists u (not (= u x)))")
        T = trivial_algebra(A.signature)
        rep = check_factor_preservation(card, T, A)
        assert rep.counterexamples, "no factor counterexample"


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_ac"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
