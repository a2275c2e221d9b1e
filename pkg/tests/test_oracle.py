from fractions import Fraction as F

import pytest

from hidenet import (
    BudgetExceededError,
    GameSpec,
    build_network,
    cross_validate,
    enumerate_feasible_graphs,
    exhaustive_stability,
    max_social_welfare,
    utility,
)
from hidenet.oracle import candidate_edge_count

from conftest import complete_edges, random_instance


def test_two_player_space():
    game = GameSpec((F(1), F(1)))
    fgs = enumerate_feasible_graphs(game, 0)
    assert len(fgs) == 2


def test_fig2_space_has_64_graphs(fig2_game):
    assert len(enumerate_feasible_graphs(fig2_game, 0)) == 64


def test_feasibility_filter_matches_direct_count():
    # every subset of the 7 candidate edges whose non-player edge is
    # covered by a common player neighbour, recounted by brute force
    game = GameSpec((F(1), F(1)))
    fgs = enumerate_feasible_graphs(game, 2)
    import itertools

    cand = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    count = 0
    for r in range(len(cand) + 1):
        for subset in itertools.combinations(cand, r):
            es = set(subset)
            if (3, 4) in es and not (
                {(1, 3), (1, 4)} <= es or {(2, 3), (2, 4)} <= es
            ):
                continue
            count += 1
    assert len(fgs) == count == 46


def test_budget_guard():
    game = GameSpec([F(1)] * 5)
    assert candidate_edge_count(5, 3) == 28
    with pytest.raises(BudgetExceededError):
        enumerate_feasible_graphs(game, 3)
    with pytest.raises(BudgetExceededError):
        enumerate_feasible_graphs(game, 2, budget=10)


def test_budget_env_override(monkeypatch, fig2_game):
    monkeypatch.setenv("HIDENET_ORACLE_BUDGET", "3")
    with pytest.raises(BudgetExceededError):
        enumerate_feasible_graphs(fig2_game, 0)


def test_exhaustive_stability_examples(fig2_game, fig3_game, fig3_graphs):
    tri = build_network(4, 0, [(1, 2), (1, 3), (2, 3)])
    assert exhaustive_stability(tri, fig2_game, 1).stable
    empty = build_network(4, 0, [])
    verdict = exhaustive_stability(empty, fig2_game, 3)
    assert not verdict.stable
    assert sorted(verdict.witness.deltas.values()) == [F(1), F(1), F(1)]
    _, g2, _ = fig3_graphs
    assert not exhaustive_stability(g2, fig3_game, 3).stable


def test_max_social_welfare_examples(fig2_game, example5_game):
    value, witness = max_social_welfare(fig2_game, 0)
    assert value == 18 and witness.edges == frozenset(complete_edges(4))
    value, witness = max_social_welfare(example5_game, 0)
    assert value == F(1, 2) and witness.edges == frozenset({(1, 2)})
    big = GameSpec((F(9), F(7)))
    value, witness = max_social_welfare(big, 0)
    assert value == 0 and witness.edges == frozenset()


def test_max_social_welfare_agrees_with_utilities(fig2_game):
    fgs = enumerate_feasible_graphs(fig2_game, 0)
    best = max(fgs.utilities(int(t)).sw for t in fgs.masks)
    assert best == max_social_welfare(fig2_game, 0)[0]


def test_utilities_table_matches_model(example1):
    net, game = example1
    fgs = enumerate_feasible_graphs(game, 3)
    mask = fgs.space.mask_of(net.edges)
    assert fgs.utilities(mask) == utility(net, game)


def test_cross_validate_fig2(fig2_game):
    report = cross_validate(fig2_game, 0, max_k=2)
    assert report.clean
    assert report.pans_counts == {1: 6, 2: 6, 3: 1, 4: 1}


def test_cross_validate_fig3_strata(fig3_game, fig3_graphs):
    report = cross_validate(fig3_game, 0, max_k=1, check_algorithms=True)
    assert report.clean
    assert report.pans_counts[1] == report.pans_counts[2] == 6
    assert report.pans_counts[3] == 2 and report.pans_counts[5] == 1
    fgs = enumerate_feasible_graphs(fig3_game, 0)
    g1, g2, g3 = fig3_graphs
    masks = {k: set(fgs.pans_masks(k)) for k in (1, 2, 3, 5)}
    m1, m2, m3 = (fgs.space.mask_of(g.edges) for g in fig3_graphs)
    assert {m1, m2, m3} <= masks[1] and {m1, m2, m3} <= masks[2]
    assert m1 in masks[3] and m2 not in masks[3] and m3 in masks[3]
    assert masks[5] == {m3}


def test_cross_validate_random_instance_seeded():
    import random

    rng = random.Random(20240817)
    game, m, e0 = random_instance(rng, max_players=3, max_nonplayers=2)
    report = cross_validate(game, m, e0, max_k=2)
    assert report.clean


def test_oracle_reports_are_deterministic(fig2_game):
    from hidenet.reports import cross_validation_dict, to_json

    a = to_json(cross_validation_dict(cross_validate(fig2_game, 0, max_k=2)))
    b = to_json(cross_validation_dict(cross_validate(fig2_game, 0, max_k=2)))
    assert a == b


def test_witness_replay_through_model(fig3_game, fig3_graphs):
    _, g2, _ = fig3_graphs
    move = exhaustive_stability(g2, fig3_game, 3).witness
    before = utility(g2, fig3_game)
    after = utility(move.result, fig3_game)
    for i in move.coalition:
        assert after.of(i) - before.of(i) == move.deltas[i]
    rebuilt = g2.with_edges((g2.edges - move.deleted_edges) | move.added_edges)
    assert rebuilt.edges == move.result.edges
