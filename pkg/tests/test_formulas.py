import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from factorium.algebra import trivial_algebra
from factorium.factorization import ZeroOneSpec, complementary_pairs
from factorium.fol import (And, BudgetExceeded, Eq, EvaluationError, Exists, Forall, FormulaError,
                           Implies, Not, Or, build_E, build_EO, build_O, build_phi12, build_psi,
                           build_semilattice_phi, check_factor_preservation, check_product_preservation,
                           classify, compile_formula, eval_formula, free_vars, parse_formula,
                           prefix_string, quantifier_depth, sigma_suite, substitute, to_text)
from factorium.fol.formula import TRUE, eq
from factorium.gallery import build_L, product_L
from factorium.malcev import MalcevFamily, UChain, words
from factorium.pipelines import SEMILATTICE_CHAIN, semilattice_phi
from factorium.terms import Var, enumerate_terms

Z = ZeroOneSpec.default()
ALGEBRAS = [build_L(2), build_L(3, True), build_L(4), product_L(2, 2, True), product_L(2, 3)]


def random_formula(rnd, sig, free, depth):
    terms = [t for t in enumerate_terms(sig, free, 1)]
    if depth == 0 or rnd.random() < 0.25:
        return Eq(rnd.choice(terms), rnd.choice(terms))
    k = rnd.randrange(6)
    if k == 0:
        return Not(random_formula(rnd, sig, free, depth - 1))
    if k in (1, 2):
        cls = And if k == 1 else Or
        return cls(tuple(random_formula(rnd, sig, free, depth - 1) for _ in range(rnd.randrange(0, 3))))
    if k == 3:
        return Implies(random_formula(rnd, sig, free, depth - 1), random_formula(rnd, sig, free, depth - 1))
    var = rnd.choice(["u", "v", "x"])
    body = random_formula(rnd, sig, sorted(set(free) | {var}), depth - 1)
    return (Forall if k == 4 else Exists)(var, body)


def test_evaluator_matches_naive_recursion_on_1000_triples():
    rnd = random.Random(7)
    for _ in range(1000):
        A = rnd.choice(ALGEBRAS)
        phi = random_formula(rnd, A.signature, ["x", "y", "z"], 4)
        env = {v: rnd.randrange(A.size) for v in ("x", "y", "z")}
        assert eval_formula(A, phi, env) == oracles.holds(A, phi, env), to_text(phi)


def test_basic_truths():
    for A in ALGEBRAS:
        assert eval_formula(A, parse_formula("(forall x (= x x))"))
    T = trivial_algebra(build_L(2).signature)
    assert not eval_formula(T, parse_formula("(exists u (not (= u x)))"), {"x": 0})
    assert eval_formula(build_L(2), parse_formula("(exists u (not (= u x)))"), {"x": 0})


def test_parse_and_print_round_trip():
    texts = ["forall u (-> (and (= +(x,u) y) (= *(u,0) 0)) (= x y))",
             "(exists (u v) (or (not (= u v)) true false))",
             "(and)", "(or)"]
    for text in texts:
        phi = parse_formula(text)
        assert parse_formula(to_text(phi)) == phi
    assert parse_formula("(and)") == TRUE


def test_parser_errors():
    for bad in ["(= x", "(foo x y)", "(forall (= x x))", "(= x y) extra", ""]:
        with pytest.raises(ValueError):
            parse_formula(bad)
    with pytest.raises(ValueError):
        parse_formula("(= +(x) x)", build_L(2).signature)


def test_substitution_avoids_capture():
    phi = parse_formula("(forall u (= x u))")
    out = substitute(phi, {"x": Var("u")})
    assert free_vars(out) == {"u"}
    A = build_L(3)
    for a in range(A.size):
        assert eval_formula(A, out, {"u": a}) == eval_formula(A, phi, {"x": a})


def test_budget_reports_subformula():
    phi = parse_formula("(forall a (forall b (forall c (forall d (= a b)))))")
    with pytest.raises(BudgetExceeded) as exc:
        eval_formula(build_L(5), phi, budget=100)
    assert exc.value.subformula is not None
    with pytest.raises(EvaluationError):
        eval_formula(build_L(2), parse_formula("(= x y)"), {"x": 0})


def test_semilattice_phi_shape():
    phi = semilattice_phi()
    assert free_vars(phi) == {"x", "y", "z"}
    assert isinstance(phi, Forall) and quantifier_depth(phi) == 1
    assert len(phi.body.lhs.parts) == 5
    assert classify(phi) == {"positive": False, "existential": False}
    with pytest.raises(FormulaError):
        build_semilattice_phi(UChain(SEMILATTICE_CHAIN, Z))


def test_semilattice_phi_at_zero_is_equality():
    phi = semilattice_phi()
    for A in (build_L(4, True), product_L(2, 3, True)):
        f = compile_formula(A, phi, ["x", "y", "z"])
        zero = A.const("0")
        for x, y in itertools.product(range(A.size), repeat=2):
            assert f(x, y, zero) == (x == y)


def test_semilattice_phi_instances():
    P = product_L(2, 5, True)
    f = compile_formula(P, semilattice_phi(), ["x", "y", "z"])
    e = P.element(0, 1)
    assert f(P.element(1, 3), P.element(1, 4), e)
    assert not f(P.element(1, 3), P.element(0, 3), e)


def family_N2_n1():
    return MalcevFamily.uniform(2, 1, Z, s=["x"], t=["y"])


def test_psi_and_phi12():
    fam = family_N2_n1()
    assert len(words(2, 2, 1)) == 6
    psi2 = build_psi(fam, 2)
    assert isinstance(psi2, And) and all(isinstance(p, Eq) for p in psi2.parts)
    assert len(psi2.parts) == 4
    phi1, phi2, psi = build_phi12(fam)
    assert prefix_string(phi1) == prefix_string(phi2) == "EA"
    assert (phi1.var, phi1.body.var) == ("y1", "x1") and isinstance(phi1, Exists)
    assert (phi2.var, phi2.body.var) == ("x1", "y1") and isinstance(phi2.body, Forall)
    assert set(psi) == {1, 2}


def test_E_and_O_blocks():
    taus = {w: eq(Var("x"), Var("x")) if len(w) == 2 else eq(Var("x"), Var("y")) for w in words(2, 2, 1)}
    assert build_O(taus, 2, 3) == TRUE
    EN = build_E(taus, 2, 2)
    assert isinstance(EN, And) and len(EN.parts) == 4 and all(isinstance(p, Eq) for p in EN.parts)
    with pytest.raises(FormulaError):
        build_EO({(1,): taus[(1,)]}, 2, 1)
    trivial = build_EO({w: eq(Var("x"), Var("x")) for w in words(2, 2, 1)}, 2, 1)
    for A in ALGEBRAS:
        for t in itertools.product(range(A.size), repeat=3):
            assert eval_formula(A, trivial, dict(zip(("x", "y", "z"), t)))


def test_sigma_suite_count_and_names():
    P = product_L(2, 5, True)
    suite = sigma_suite(P.signature, semilattice_phi(), Z)
    assert len(suite) == 20
    names = [n for n, _ in suite]
    assert "PRES_join'" in names and "CAN" in names
    for _, f in suite:
        assert free_vars(f) <= {"e", "f"}
    with pytest.raises(FormulaError):
        sigma_suite(P.signature, parse_formula("(= x w)"), Z)


@pytest.mark.parametrize("pair", [(2, 2), (2, 3), (3, 2)])
def test_sigma_characterizes_complementary_pairs(pair):
    P = product_L(*pair, with_join=True)
    suite = sigma_suite(P.signature, semilattice_phi(), Z)
    fs = [compile_formula(P, f, ["e", "f"]) for _, f in suite]
    sat = {(e, f) for e in range(P.size) for f in range(P.size) if all(g(e, f) for g in fs)}
    assert sat == {(e[0], f[0]) for e, f in complementary_pairs(P, Z)}


def test_preservation_examples():
    atomic = parse_formula("(= +(x,y) *(y,x))")
    A, B = build_L(2), build_L(3)
    assert check_product_preservation(atomic, A, B).ok
    assert check_factor_preservation(atomic, A, B).ok
    card = parse_formula("(exists u (not (= u x)))")
    T = trivial_algebra(A.signature)
    rep = check_factor_preservation(card, T, A)
    assert not rep.ok
    assert check_product_preservation(card, T, A).ok


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_EO_with_atomic_taus_is_preserved(seed):
    rnd = random.Random(seed)
    A, B = build_L(2), build_L(3)
    terms = list(enumerate_terms(A.signature, ["x", "y", "z", "x1", "y1"], 1))
    taus = {w: Eq(rnd.choice(terms), rnd.choice(terms)) for w in words(2, 2, 1)}
    phi = build_EO(taus, 2, 1)
    assert check_product_preservation(phi, A, B, order=["x", "y", "z"]).ok
    assert check_factor_preservation(phi, A, B, order=["x", "y", "z"]).ok
