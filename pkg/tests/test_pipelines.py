import json

import pytest

from factorium.gallery import P0, P1, build_D, gallery, parse_gallery_name, product_L
from factorium.pipelines import (counterexample_pipeline, figure_checks, is_prime, check_partial_maps,
                                 copy_strategy)
from factorium.fol.games import replay_strategy


def test_gallery_names_and_sizes():
    names = {A.name: A.size for A in gallery(12)}
    assert names["D5"] == 11 and names["L2xL5"] == 10 and names["L12v"] == 12
    assert all(size <= 12 for size in names.values())
    assert parse_gallery_name("L2vxL5v").size == 10
    with pytest.raises(ValueError):
        parse_gallery_name("Q7")


def test_P_parts():
    D, P = build_D(5), product_L(2, 5)
    assert sorted(D.labels[i] for i in P0(D)) == [(0, 3), (0, 4)]
    assert sorted(D.labels[i] for i in P1(D)) == [(1, 3), (1, 4), (1, 5)]
    assert len(P1(P)) == 2


@pytest.mark.parametrize("n", [4, 5])
def test_pipeline_report(n):
    rep = counterexample_pipeline(n)
    assert rep["ok"]
    assert rep["game_winner"] == "exists" and rep["rounds"] == n - 3
    assert rep["D_indecomposable"] and rep["product_decompositions"] == [[2, n]]
    json.dumps(rep)


def test_pipeline_schema_stable():
    assert set(counterexample_pipeline(4)) == set(counterexample_pipeline(5))


def test_prime_cardinality_agrees_with_search():
    rep = counterexample_pipeline(5)
    assert rep["D_size_prime"] and rep["cardinality_agrees"]
    assert is_prime(11) and not is_prime(9)


def test_strategy_needs_the_round_bound():
    # one round more than the bound and the copying strategy breaks
    D, P = build_D(5), product_L(2, 5)
    assert replay_strategy(D, P, 2, copy_strategy(D, P)).ok
    assert not replay_strategy(D, P, 3, copy_strategy(D, P)).ok


def test_partial_maps_n4_and_n5():
    for n in (4, 5):
        rep = check_partial_maps(n)
        assert rep["ok"] and rep["checked"] > 0


def test_figure_checks():
    rep = figure_checks()
    assert rep["ok"]
    assert rep["transport"] == [True, True, False]
    assert rep["phi_tags"] == {"positive": False, "existential": False}
