import math
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from minkowski_arrangements import clique
from minkowski_arrangements.arrangement import is_boundary_sequence, is_minkowski, is_pairwise_intersecting
from minkowski_arrangements.bodies import cube
from minkowski_arrangements.bounds import auto_N, bound_sequence
from minkowski_arrangements.errors import ArrangementError, PoolTooLarge, SearchExhausted
from minkowski_arrangements.extremal_search import (
    CandidatePool,
    CompatibilityGraph,
    cube_arrangement,
    direction_search_2d,
    greedy_boundary_sequence,
    grid_points,
    interval_pool_oracle,
    max_clique_arrangement,
    pentagon_counterexample,
    pentagon_points,
    sample_arrangement,
    sharpness_config,
)

from oracles import brute_force_interval_max, origin_in_interior_of_hull, pentagon_pair_margin

INTERVAL_CENTERS = [(Fraction(k, 2),) for k in range(-4, 5)]
INTERVAL_RATIOS = [Fraction(1, 2), Fraction(3, 4), 1]


@pytest.mark.parametrize("d", [1, 2, 3])
def test_cube_arrangement(d):
    arr = cube_arrangement(d)
    assert len(arr) == 3**d
    assert is_minkowski(arr).passed and is_pairwise_intersecting(arr).passed


@pytest.mark.parametrize("D", range(2, 6))
def test_sharpness_config(D):
    config, report = sharpness_config(D)
    assert report.passed
    assert len(config.translations) == 2 * 3 ** (D - 1)
    assert not origin_in_interior_of_hull(config.translations)


def test_sharpness_d2_enumeration():
    config, _ = sharpness_config(2)
    assert sorted(config.translations) == [(-2, -2), (0, -2), (0, 0), (2, -2), (2, 0), (2, 2)]


# pentagon ------------------------------------------------------------------


def test_pentagon_geometry():
    pts = pentagon_points(Fraction(1, 20))
    assert all(math.dist(p, (0.0, 0.05 + math.cos(math.pi / 5))) == pytest.approx(1.0) for p in pts)
    assert pts[0][1] == pytest.approx(0.05) and pts[1][1] == pytest.approx(0.05)
    assert pts[0][0] == pytest.approx(-pts[1][0])


def test_direction_search_on_collinear_points():
    pts = [(-1, 0), (0, 0), (Fraction(1, 2), 0), (1, 0)]
    u, margin = direction_search_2d(pts, 0, 3)
    assert margin > 0 and abs(u[0]) > 0.5
    # off to one side of o the extreme pair has no direction at all
    with pytest.raises(SearchExhausted):
        direction_search_2d([(1, 0), (2, 0), (3, 0)], 0, 2)
    with pytest.raises(ArrangementError):
        direction_search_2d([(1, 0), (2, 0)], 1, 1)


def test_direction_search_bottom_edge_works_horizontally():
    pts = pentagon_points(Fraction(1, 20))
    u, margin = direction_search_2d(pts, 0, 1)
    assert margin > 0
    assert abs(u[1]) < 1e-6


def test_pentagon_side_pairs_have_no_direction():
    # a dense float scan agrees with the exact search: these pairs miss by a wide margin
    pts = pentagon_points(Fraction(1, 20))
    for i, j in [(0, 4), (1, 2)]:
        assert pentagon_pair_margin(pts, i, j) < -0.3
        with pytest.raises(SearchExhausted) as info:
            direction_search_2d(pts, i, j)
        assert info.value.best_margin < -0.3


def test_pentagon_upper_pairs_are_tight():
    pts = pentagon_points(Fraction(1, 20))
    for i, j in [(2, 3), (3, 4)]:
        assert abs(pentagon_pair_margin(pts, i, j)) < 1e-12


def test_pentagon_report_lists_every_failing_pair():
    pts, origin, report = pentagon_counterexample()
    assert origin == (0.0, 0.0)
    assert report.stages[0].passed
    failing = {(v.i, v.j) for v in report.stages[1].violations}
    found = set(report.stages[1].details["directions"])
    assert len(failing) + len(found) == 10
    assert {(0, 4), (1, 2)} <= failing


def test_pentagon_far_origin_fails_more_pairs():
    _, _, near = pentagon_counterexample(Fraction(1, 20))
    _, _, far = pentagon_counterexample(5)
    assert len(far.stages[1].violations) > len(near.stages[1].violations)


# clique search -------------------------------------------------------------


@st.composite
def graphs(draw):
    n = draw(st.integers(0, 14))
    edges = draw(st.sets(st.tuples(st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0)))))
    adj = [0] * n
    for a, b in edges:
        if a != b:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
    return adj


def to_networkx(adj):
    g = nx.Graph()
    g.add_nodes_from(range(len(adj)))
    g.add_edges_from((a, b) for a in range(len(adj)) for b in range(a + 1, len(adj)) if adj[a] >> b & 1)
    return g


@given(graphs())
def test_max_clique_matches_networkx(adj):
    best = clique.max_clique(adj)
    assert clique.is_clique(adj, best)
    ref = max((len(c) for c in nx.find_cliques(to_networkx(adj))), default=0)
    assert len(best) == ref


@given(graphs(), st.integers(0, 100))
def test_greedy_clique_is_a_lower_bound(adj, seed):
    g = clique.greedy_clique(adj, seed, restarts=5)
    assert clique.is_clique(adj, g)
    assert len(g) <= len(clique.max_clique(adj))


def test_interval_pool_matches_brute_force():
    report = interval_pool_oracle()
    assert report.passed
    centers = [c[0] for c in INTERVAL_CENTERS]
    assert report.details["closed_max"] == brute_force_interval_max(centers, INTERVAL_RATIOS) == 3
    assert report.details["strict_max"] == brute_force_interval_max(centers, INTERVAL_RATIOS, strict=True) == 2
    assert report.details["claim_holds_strict"] and not report.details["claim_holds_closed"]


def test_cube_pool_clique_is_between_nine_and_eighteen():
    pool = CandidatePool(cube(2), grid_points(2, -1, 1, Fraction(1, 2)), [Fraction(1, 2), 1])
    result = max_clique_arrangement(pool)
    assert result.exact and result.report.passed
    assert 9 <= result.size <= 18


def test_clique_size_does_not_depend_on_vertex_order():
    centers = grid_points(2, -1, 1, Fraction(1, 2))
    sizes = set()
    for seed in range(3):
        shuffled = centers[:]
        random.Random(seed).shuffle(shuffled)
        sizes.add(max_clique_arrangement(CandidatePool(cube(2), shuffled, [Fraction(1, 2), 1])).size)
    assert len(sizes) == 1


def test_greedy_fallback_is_flagged():
    pool = CandidatePool(cube(2), grid_points(2, -1, 1, Fraction(1, 2)), [1])
    result = max_clique_arrangement(pool, exact_limit=5)
    assert not result.exact and result.report.details["note"] == "lower bound only"
    assert result.report.passed


def test_empty_pool_and_cap():
    assert max_clique_arrangement(CandidatePool(cube(1), [], [1])).size == 0
    with pytest.raises(PoolTooLarge):
        CandidatePool(cube(1), INTERVAL_CENTERS, INTERVAL_RATIOS, cap=5).candidates()


def test_compatibility_edges_are_valid_pairs():
    pool = CandidatePool(cube(1), INTERVAL_CENTERS, INTERVAL_RATIOS)
    g = CompatibilityGraph.build(cube(1), pool.candidates())
    assert g.edge_count() > 0
    strict = CompatibilityGraph.build(cube(1), pool.candidates(), strict=True)
    assert strict.edge_count() < g.edge_count()


# generators ------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(3))
def test_sample_arrangement_is_valid(seed):
    arr = sample_arrangement(cube(2), 10, seed)
    assert 1 <= len(arr) <= 10
    assert is_minkowski(arr).passed and is_pairwise_intersecting(arr).passed


def test_boundary_sequence_generator():
    arr = greedy_boundary_sequence(cube(1), 1, 10, 0)
    assert len(arr) >= 3 and is_boundary_sequence(arr).passed
    assert len(arr) <= bound_sequence(1, auto_N(1)).value
    assert len(greedy_boundary_sequence(cube(2), 2, 1, 0)) == 1
    with pytest.raises(ArrangementError):
        greedy_boundary_sequence(cube(4), 4, 3, 0)
