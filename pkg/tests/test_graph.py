import math
import random

import numpy as np
import pytest
from hypothesis import given

from conftest import bellman_ford, digraphs, random_digraph
from dagcover.exceptions import InputError
from dagcover.graph import (
    UNREACHABLE,
    DistanceMatrix,
    Permutation,
    WeightedDigraph,
    all_pairs_distances,
    aspect_ratio,
    check_acyclic_and_order,
    normalize_weights,
    single_source_distances,
    weakly_connected_components,
)
from dagcover.star import make_bidirected_star


def test_parallel_edges_collapse_to_minimum():
    g = WeightedDigraph(2, [(0, 1, 5.0), (0, 1, 2.0), (1, 0, 1.0)])
    assert g.m == 2
    assert g.weight(0, 1) == 2.0


@pytest.mark.parametrize("edges", [
    [(0, 0, 1.0)],
    [(0, 1, 0.0)],
    [(0, 1, -1.0)],
    [(0, 1, math.inf)],
    [(0, 3, 1.0)],
    [(0, 1)],
])
def test_invalid_edges_rejected(edges):
    with pytest.raises(InputError):
        WeightedDigraph(3, edges)


def test_star_distances_from_root():
    g = make_bidirected_star(7)
    assert single_source_distances(g, 0) == [0.0] + [1.0] * 6


def test_star_all_pairs():
    d = all_pairs_distances(make_bidirected_star(7))
    assert d[1, 2] == 2.0 and d[3, 0] == 1.0 and d[0, 5] == 1.0


def test_single_vertex_matrix():
    assert all_pairs_distances(WeightedDigraph(1)).dist.tolist() == [[0.0]]


def test_out_of_range_source():
    with pytest.raises(InputError):
        single_source_distances(WeightedDigraph(3), 3)


def test_matches_bellman_ford_on_random_graphs():
    rng = random.Random(7)
    for _ in range(20):
        g = random_digraph(rng, 10)
        for s in range(g.n):
            assert single_source_distances(g, s) == bellman_ford(g, s)


def test_within_restricts_to_induced_subgraph():
    g = WeightedDigraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)])
    assert single_source_distances(g, 0, within={0, 2})[2] == 5.0
    assert single_source_distances(g, 0, within={0, 2})[1] == UNREACHABLE


def test_reverse_gives_distances_to_source():
    rng = random.Random(3)
    g = random_digraph(rng, 9)
    d = all_pairs_distances(g).dist
    for s in range(g.n):
        assert np.array_equal(single_source_distances(g, s, reverse=True), d[:, s])


@given(digraphs())
def test_apsp_rows_equal_single_source(g):
    d = all_pairs_distances(g).dist
    for v in range(g.n):
        assert np.array_equal(d[v], np.array(single_source_distances(g, v)))


@given(digraphs())
def test_relaxation_stable(g):
    for s in range(g.n):
        dist = single_source_distances(g, s)
        for u, v, w in g.edges:
            if math.isfinite(dist[u]):
                assert dist[v] <= dist[u] + w


@given(digraphs())
def test_distance_matrix_triangle_inequality(g):
    d = all_pairs_distances(g).dist
    assert np.all(np.diag(d) == 0)
    via = d[:, :, None] + d[None, :, :]  # via[u, v, w] = d(u,v) + d(v,w)
    assert np.all(d <= via.min(axis=1) + 1e-9)


def test_aspect_ratio_examples():
    assert aspect_ratio(all_pairs_distances(make_bidirected_star(7))) == 2.0
    assert aspect_ratio(all_pairs_distances(WeightedDigraph(2, [(0, 1, 5.0)]))) == 1.0
    g = WeightedDigraph(3, [(0, 1, 1.0), (1, 2, 1000.0)])
    assert aspect_ratio(all_pairs_distances(g)) == 1001.0
    with pytest.raises(InputError):
        aspect_ratio(all_pairs_distances(WeightedDigraph(3)))


def test_normalize_examples():
    g, s = normalize_weights(WeightedDigraph(3, [(0, 1, 2.0), (1, 2, 4.0), (2, 0, 6.0)]))
    assert s == 2.0 and [w for *_, w in g.edges] == [1.0, 2.0, 3.0]
    h = WeightedDigraph(2, [(0, 1, 1.0), (1, 0, 3.0)])
    assert normalize_weights(h) == (h, 1.0)
    empty = WeightedDigraph(2)
    assert normalize_weights(empty) == (empty, 1.0)


@given(digraphs(min_n=2, integer_weights=False))
def test_normalize_scales_distances(g):
    h, s = normalize_weights(g)
    a, b = all_pairs_distances(g).dist, all_pairs_distances(h).dist
    fin = np.isfinite(a)
    assert np.array_equal(fin, np.isfinite(b))
    assert np.allclose(b[fin] * s, a[fin], rtol=1e-12, atol=0)


def test_topological_order_examples():
    ok, cyc = check_acyclic_and_order([0, 1], [(0, 1, 1.0), (1, 0, 1.0)])
    assert not ok and cyc[0] == cyc[-1] and set(cyc) == {0, 1}
    assert check_acyclic_and_order([0, 1, 2], [(0, 1, 1.0), (1, 2, 1.0)]) == (True, [0, 1, 2])


@given(digraphs(max_n=8))
def test_topological_order_or_cycle(g):
    ok, res = check_acyclic_and_order(range(g.n), g.edges)
    pairs = g.edge_pairs()
    if ok:
        pos = {v: i for i, v in enumerate(res)}
        assert sorted(res) == list(range(g.n))
        assert all(pos[u] < pos[v] for u, v in pairs)
    else:
        assert res[0] == res[-1] and all((a, b) in pairs for a, b in zip(res, res[1:]))


def test_permutation_inverse():
    p = Permutation((2, 0, 1))
    assert [p.position(v) for v in p.order] == [0, 1, 2]
    assert p.reversed().order == (1, 0, 2)
    assert p.sort({0, 2}) == [2, 0]
    with pytest.raises(InputError):
        Permutation((0, 0, 1))


def test_distance_matrix_validation():
    with pytest.raises(InputError):
        DistanceMatrix(np.zeros((2, 3)))
    d = DistanceMatrix([[0, 1], [math.inf, 0]])
    assert d.reachable(0, 1) and not d.reachable(1, 0)
    assert d.reachable_pairs().tolist() == [[0, 1]]


def test_weak_components_sorted():
    comps = weakly_connected_components(5, [(3, 4), (1, 0)])
    assert comps == [frozenset({0, 1}), frozenset({2}), frozenset({3, 4})]
