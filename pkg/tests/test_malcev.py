import itertools
import json
import random

import pytest

from factorium import data_path
from factorium.algebra import trivial_algebra
from factorium.congruence import Cg, delta, join, kernel
from factorium.factorization import ZeroOneSpec
from factorium.gallery import build_L, gallery, product_L
from factorium.malcev import (MalcevError, MalcevFamily, UChain, check_corollaries, check_lemma21,
                              check_malcev_identities, find_u_chain, identity_tuple, load_family,
                              malcev_identities, transform, validate_u_chain, words)
from factorium.pipelines import SEMILATTICE_CHAIN
from factorium.terms import Var, enumerate_terms, eval_term, parse_term

Z = ZeroOneSpec.default()
SIG = build_L(2).signature
KINDS = ["sigma", "sigma*", "rho", "rho*"]


def fam(n, s=None, t=None, N=2):
    s = s or ["+(x,z)", "*(y,x1)", "+(y2,z)"][:n]
    t = t or ["*(x,z)", "+(x1,y)", "*(y2,x)"][:n]
    return MalcevFamily.uniform(N, n, Z, s=s[:n], t=t[:n], signature=SIG)


def test_transform_base_cases():
    f0 = fam(0)
    assert transform("sigma", f0, ["x", "y", "z"]) == (Var("x"), Var("x"), parse_term("0", SIG))
    f1 = fam(1)
    out = transform("sigma", f1, ["x", "y", "z", "x1", "y1"])
    assert out == (Var("x"), Var("x"), parse_term("0", SIG), parse_term("+(x,0)", SIG), Var("y1"))
    with pytest.raises(MalcevError):
        transform("sigma", f1, ["x", "y", "z"])


@pytest.mark.parametrize("n", [0, 1, 2, 3])
@pytest.mark.parametrize("kind", KINDS)
def test_transformers_idempotent_on_terms(n, kind):
    f = fam(n)
    X = identity_tuple(f)
    once = transform(kind, f, X)
    assert transform(kind, f, once) == once


@pytest.mark.parametrize("kind", KINDS)
def test_transform_on_elements_agrees_with_terms(kind):
    f = fam(2)
    A = build_L(4)
    terms = transform(kind, f, identity_tuple(f))
    rnd = random.Random(1)
    for _ in range(50):
        tup = [rnd.randrange(A.size) for _ in f.names]
        env = dict(zip(f.names, tup))
        assert transform(kind, f, tup, A) == tuple(eval_term(A, t, env) for t in terms)


def test_lemma21_one_element_algebra():
    f = fam(1)
    T = trivial_algebra(build_L(2).signature)
    rep = check_lemma21(T, f, [0] * len(f.names))
    assert rep.join_holds and rep.composition_holds


@pytest.mark.parametrize("A", gallery(6), ids=lambda A: A.name)
def test_lemma21_n0_join_reading(A):
    f = fam(0)
    for c, d, e in itertools.product(range(A.size), repeat=3):
        rep = check_lemma21(A, f, [c, d, e])
        sigma = rep.checks[0]
        assert sigma.kind == "sigma"
        assert sigma.rhs == join(Cg(A, (c, d)), Cg(A, (e, A.const("0"))))
        assert rep.join_holds


def test_lemma21_random_family_runs():
    rnd = random.Random(3)
    A = build_L(2)
    terms = [str(t) for t in enumerate_terms(A.signature, ["x", "y", "z"], 1)]
    f = MalcevFamily.uniform(2, 1, Z, s=[rnd.choice(terms)], t=[rnd.choice(terms)],
                                    signature=SIG)
    for tup in itertools.product(range(2), repeat=5):
        rep = check_lemma21(A, f, tup)
        assert len(rep.checks) == 4
        json.dumps(rep.to_json())


def test_corollaries_projection_and_canonical_pair():
    P = product_L(2, 5, True)
    theta, theta_star = kernel(P, P.projection(0)), kernel(P, P.projection(1))
    e = P.element(0, 1)
    f = fam(1)
    for c, d in itertools.product(range(P.size), repeat=2):
        if not theta.related(c, d):
            continue
        rep = check_corollaries(P, f, theta, theta_star, c, d, [e], terms=[Var("x")])
        assert rep.ok
        rep = check_corollaries(P, f, theta, theta_star, c, d, [e])
        assert rep.ok and rep.terms_checked > 10
    rep = check_corollaries(P, f, theta, theta_star, 0, 0, [e], which="b")
    assert rep.ok


def test_corollaries_reject_bad_pair():
    A = build_L(3)
    rep = check_corollaries(A, fam(1), delta(A), delta(A), 0, 0, [0])
    assert not rep.ok and not rep.sandwich_ok


def constant_x_family():
    return MalcevFamily.uniform(2, 0, Z, L_default="x", R_default="x")


def test_identities_vacuous_on_one_element_algebra():
    T = trivial_algebra(build_L(2).signature)
    rnd = random.Random(5)
    terms = [str(t) for t in enumerate_terms(T.signature, ["x", "y", "z", "x1", "y1"], 1)]
    short = [str(t) for t in enumerate_terms(T.signature, ["x", "y", "z"], 1)]
    for _ in range(10):
        L = {w: rnd.choice(terms) for w in words(2)}
        R = {w: rnd.choice(terms) for w in words(2)}
        f = MalcevFamily.uniform(2, 1, Z, s=[rnd.choice(short)], t=[rnd.choice(short)], L=L, R=R,
                                    signature=SIG)
        assert check_malcev_identities(T, f).holds


def test_constant_family_fails_on_L2():
    rep = check_malcev_identities(build_L(2), constant_x_family())
    assert not rep.holds
    bad = [r for r in rep.results if not r.holds]
    assert bad and all(r.counter is not None for r in bad)
    assert "listed algebras" in rep.to_json()["scope"]
    shipped = load_family(data_path("family_constant_x.json"), build_L(2).signature)
    assert not check_malcev_identities(build_L(2), shipped).holds


def test_identity_system_size():
    f = fam(1)
    labels = [lbl for lbl, _, _ in malcev_identities(f)]
    assert labels
    assert any(lbl.startswith("|a|=N") for lbl in labels)


def chain():
    return UChain(SEMILATTICE_CHAIN, Z)


def test_semilattice_chain_validates_on_small_gallery():
    for variety in ("VL", "Vvee"):
        algs = gallery(6, variety)
        rep = validate_u_chain(algs, chain())
        assert rep.ok, rep.failures[:1]


def test_bad_chain_names_first_identity():
    u = UChain(("y", "*(x,z)", "*(y,z)", "+(y,z)", "y"), Z)
    rep = validate_u_chain([build_L(3)], u)
    assert not rep.ok
    assert "1" in str(rep.failures[0])


def test_even_chain_rejected():
    with pytest.raises(MalcevError):
        UChain(("x", "y"), Z)


@pytest.mark.parametrize("variety", ["VL", "Vvee"])
def test_find_u_chain(variety):
    algs = [A for A in gallery(6, variety)]
    u = find_u_chain(algs, 2)
    assert u is not None and u.k % 2 == 1 and u.k <= 7
    assert validate_u_chain(algs, u).ok


def test_chain_connects_zero_and_one():
    for A in gallery(6):
        assert Cg(A, (A.const("0"), A.const("1"))).is_nabla()


def test_family_json_round_trip():
    f = fam(2)
    g = MalcevFamily.from_json(json.loads(json.dumps(f.to_json())), SIG)
    assert g.to_json() == f.to_json()
