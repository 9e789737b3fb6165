import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from factorium.algebra import trivial_algebra
from factorium.congruence import (Cg, CongruenceError, SizeGuardExceeded, all_congruences, delta, join,
                                  generated_congruence, kernel, malcev_chain, meet, nabla, rel_product)
from factorium.gallery import build_L, gallery, product_L


def small_gallery():
    return gallery(6)


@pytest.mark.parametrize("A", small_gallery(), ids=lambda A: A.name)
def test_principal_congruences_match_partition_filter(A):
    cons = oracles.all_congruences_naive(A)
    for a, b in itertools.combinations(range(A.size), 2):
        want = oracles.least_containing(cons, [(a, b)])
        assert oracles.pairs_of(generated_congruence(A, [(a, b)]).blocks) == want


@pytest.mark.parametrize("A", small_gallery(), ids=lambda A: A.name)
def test_all_congruences_match_partition_filter(A):
    assert {c.blocks for c in all_congruences(A)} == set(oracles.all_congruences_naive(A))


def test_con_L_n_counts():
    # the closure oracle fixes these; they follow Bell(n - 2) + 1
    assert [len(all_congruences(build_L(n))) for n in range(2, 9)] == [2, 2, 3, 6, 16, 53, 204]
    assert len(all_congruences(build_L(5, True))) == 5


def test_trivial_cases():
    A = build_L(4)
    assert Cg(A, (2, 2)) == delta(A)
    L2 = build_L(2)
    assert Cg(L2, (0, 1)) == nabla(L2)
    T = trivial_algebra(A.signature)
    assert all_congruences(T) == [delta(T)] and delta(T) == nabla(T)
    assert len(all_congruences(build_L(2))) == 2


def test_lattice_identities():
    A = product_L(2, 4, True)
    for t in all_congruences(A):
        assert join(t, delta(A)) == t
        assert meet(t, nabla(A)) == t
        assert t.is_compatible()


def test_projection_kernels():
    P = product_L(2, 5)
    k1, k2 = kernel(P, P.projection(0)), kernel(P, P.projection(1))
    assert meet(k1, k2) == delta(P)
    assert rel_product(k1, k2, 1).all()
    assert not rel_product(delta(P), delta(P), 1).all()


def test_parent_mismatch():
    with pytest.raises(CongruenceError):
        join(delta(build_L(3)), delta(build_L(3)))


def test_size_guard():
    with pytest.raises(SizeGuardExceeded):
        all_congruences(product_L(3, 5), max_size=14)


def test_figure_theta_inside_first_kernel():
    P = product_L(5, 2, True)
    theta = join(Cg(P, (P.element(0, 0), P.element(0, 1))), Cg(P, (P.element(1, 0), P.element(1, 1))))
    k1 = kernel(P, P.projection(0))
    assert theta.le(k1) and theta != k1
    blocks = sorted(sorted(P.labels[a] for a in b) for b in theta.partition())
    assert [(0, 0), (0, 1)] in blocks and [(3, 0)] in blocks and [(4, 1)] in blocks


@pytest.mark.parametrize("A", [A for A in gallery(6) if "v" not in A.name], ids=lambda A: A.name)
def test_malcev_chain_a_to_a_times_one(A):
    zero, one = A.const("0"), A.const("1")
    for a in range(A.size):
        b = A.op("*", a, one)
        ch = malcev_chain(A, (a, b), [(zero, one)])
        assert ch.replay()
        assert ch.k % 2 == 1 or a == b


def test_malcev_chain_trivial_and_missing():
    A = build_L(4)
    assert malcev_chain(A, (2, 2), [(0, 1)]).terms == []
    with pytest.raises(CongruenceError):
        malcev_chain(A, (2, 3), [(0, 0)])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([A for A in gallery(6)]), st.data())
def test_malcev_chains_replay(A, data):
    gens = data.draw(st.lists(st.tuples(st.integers(0, A.size - 1), st.integers(0, A.size - 1)),
                              min_size=1, max_size=3))
    theta = generated_congruence(A, gens)
    for a, b in itertools.product(range(A.size), repeat=2):
        if (a, b) in theta:
            assert malcev_chain(A, (a, b), gens).replay()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(gallery(6)), st.data())
def test_join_is_least_upper_bound(A, data):
    cons = all_congruences(A)
    s = data.draw(st.sampled_from(cons))
    t = data.draw(st.sampled_from(cons))
    j, m = join(s, t), meet(s, t)
    assert s.le(j) and t.le(j)
    assert all(j.le(u) for u in cons if s.le(u) and t.le(u))
    assert m.le(s) and m.le(t)
    assert np.array_equal(m.matrix(), s.matrix() & t.matrix())
