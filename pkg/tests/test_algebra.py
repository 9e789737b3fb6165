import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from factorium import data_path
from factorium.algebra import (AlgebraSyntaxError, ArityError, ElementMap, TableRangeError,
                               algebra_to_json, check_homomorphism, direct_product, dumps_algebra,
                               find_isomorphism, is_isomorphism, load_algebra, parse_algebra,
                               subuniverse_closure, trivial_algebra)
from factorium.gallery import build_D, build_L, figure_subalgebra, gallery, product_L
from factorium.terms import App, TermError, Var, enumerate_terms, eval_term, parse_term


def test_eval_term_examples():
    L5 = build_L(5)
    t = parse_term("+(x,y)", L5.signature)
    assert eval_term(L5, t, {"x": 3, "y": 1}) == 2
    assert eval_term(L5, t, {"x": 4, "y": 0}) == 4
    assert eval_term(L5, Var("x"), {"x": 3}) == 3


def test_eval_term_errors():
    L2 = build_L(2)
    with pytest.raises(TermError):
        eval_term(L2, Var("q"), {})
    with pytest.raises(TermError):
        eval_term(L2, App("nope", (Var("x"),)), {"x": 0})
    with pytest.raises(TermError):
        eval_term(L2, App("+", (Var("x"),)), {"x": 0})


def test_L_tables():
    L2 = build_L(2)
    assert [L2.op("+", a, b) for a in (0, 1) for b in (0, 1)] == [0, 0, 1, 1]
    assert build_L(5).op("*", 3, 4) == 2
    L5v = build_L(5, True)
    assert L5v.op("join", 3, 4) == 3
    assert L5v.op("join", 0, 1) == 0


@pytest.mark.parametrize("n", range(3, 9))
def test_L_m_is_subalgebra_of_L_n(n):
    Ln = build_L(n, True)
    for m in range(2, n + 1):
        Lm = build_L(m, True)
        for s, k in Lm.signature.items():
            if k == 0:
                assert Lm.const(s) == Ln.const(s)
            else:
                assert np.array_equal(Ln.tables[s][(slice(0, m),) * k], Lm.tables[s])


def test_D5():
    D = build_D(5)
    assert D.size == 11
    assert D.labels[D.op("+", D.index((1, 5)), D.index((1, 1)))] == (1, 2)
    assert {D.labels[D.const("0")], D.labels[D.const("1")]} == {(0, 0), (1, 1)}


def test_product_arithmetic():
    P = product_L(5, 2)
    assert P.size == 10
    assert P.labels[P.op("+", P.element(3, 0), P.element(1, 1))] == (2, 0)
    assert direct_product([build_L(2), build_L(5)]).size == 10


def test_product_projection_recovers_factors():
    A, B = build_L(3), build_L(4)
    P = direct_product([A, B])
    for k, F in enumerate((A, B)):
        pi = P.projection(k)
        for s, m in A.signature.items():
            if m == 2:
                for a in range(P.size):
                    for b in range(P.size):
                        assert pi[P.op(s, a, b)] == F.op(s, pi[a], pi[b])


def test_product_with_trivial_factor_is_isomorphic():
    A = build_L(4)
    P = direct_product([A, trivial_algebra(A.signature)])
    assert find_isomorphism(P, A) is not None


def test_closure_contains_constants_and_D5_is_closed():
    P = product_L(2, 6)
    assert {P.const("0"), P.const("1")} <= subuniverse_closure(P, [])
    D = [P.element(i, j) for i in range(2) for j in range(5)] + [P.element(1, 5)]
    assert subuniverse_closure(P, D) == frozenset(D)


@given(st.sets(st.integers(0, 9), max_size=6), st.sets(st.integers(0, 9), max_size=6))
def test_closure_is_monotone_idempotent_extensive(s, t):
    P = product_L(2, 5)
    cs = subuniverse_closure(P, s)
    assert s <= cs
    assert subuniverse_closure(P, cs) == cs
    assert cs <= subuniverse_closure(P, s | t)


def test_figure_subalgebra_and_F():
    L, P = figure_subalgebra()
    assert L.size == P.size - 2
    Q = product_L(4, 2, with_join=True)
    F = ElementMap({a: L.index((4, 1) if Q.labels[a] == (3, 1) else Q.labels[a])
                    for a in range(Q.size)}, Q.size, L.size)
    assert is_isomorphism(Q, L, F)
    assert check_homomorphism(Q, L, F, total=True)


def test_homomorphism_identity_and_iso_search():
    for A in gallery(6):
        assert check_homomorphism(A, A, ElementMap.identity(A), total=True)
    assert find_isomorphism(build_L(3), build_L(4)) is None
    A = product_L(2, 3)
    B = product_L(3, 2)
    m = find_isomorphism(A, B)
    assert m is not None and check_homomorphism(A, B, m, total=True)


def test_shipped_L2_file():
    A = load_algebra(data_path("L2.json"))
    assert A.size == 2
    assert [A.op("+", a, b) for a in (0, 1) for b in (0, 1)] == [0, 0, 1, 1]
    assert [A.op("*", a, b) for a in (0, 1) for b in (0, 1)] == [0, 0, 0, 1]


def test_parse_errors_are_distinct():
    good = json.loads(dumps_algebra(build_L(2)))
    bad_range = json.loads(json.dumps(good))
    bad_range["tables"]["+"][0] = 2
    with pytest.raises(TableRangeError):
        parse_algebra(json.dumps(bad_range))
    bad_arity = json.loads(json.dumps(good))
    bad_arity["tables"]["+"] = [0, 0, 1]
    with pytest.raises(ArityError):
        parse_algebra(json.dumps(bad_arity))
    with pytest.raises(AlgebraSyntaxError):
        parse_algebra("{not json")


def test_round_trip_gallery():
    for A in gallery(12):
        B = parse_algebra(dumps_algebra(A))
        assert B.same_tables(A)
        assert algebra_to_json(B) == algebra_to_json(A)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_eval_term_is_compositional(data):
    A = build_L(4, True)
    terms = list(enumerate_terms(A.signature, ["x", "y"], 2))
    t = data.draw(st.sampled_from([t for t in terms if isinstance(t, App) and t.args]))
    env = {"x": data.draw(st.integers(0, 3)), "y": data.draw(st.integers(0, 3))}
    kids = [eval_term(A, a, env) for a in t.args]
    assert eval_term(A, t, env) == A.op(t.op, *kids)
