import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import digraphs
from dagcover.decomposition import (
    PathDecomposition,
    TreeDecomposition,
    check_balanced,
    find_balanced_bag,
    format_td,
    heuristic_tree_decomposition,
    parse_td,
    restrict_components,
    validate_decomposition,
)
from dagcover.exceptions import ParseError, StructuralError
from dagcover.generators import random_partial_ktree
from dagcover.graph import WeightedDigraph
from dagcover.star import make_bidirected_star, star_decomposition


def bidirected(n, pairs):
    return WeightedDigraph(n, [e for a, b in pairs for e in ((a, b, 1.0), (b, a, 1.0))])


def test_star_tree_of_bags_valid_width_one():
    g = make_bidirected_star(7)
    report = validate_decomposition(g, star_decomposition(7))
    assert report and star_decomposition(7).width == 1


def test_star_bags_chained_still_valid_since_root_everywhere():
    g = make_bidirected_star(7)
    bags = [frozenset({0, i}) for i in range(1, 7)]
    td = TreeDecomposition(bags, [(i, i + 1) for i in range(5)])
    assert validate_decomposition(g, td)


def test_root_subtree_broken_is_reported():
    g = make_bidirected_star(4)
    td = TreeDecomposition([{0, 1}, {2}, {0, 2}, {0, 3}], [(0, 1), (1, 2), (2, 3)])
    report = validate_decomposition(g, td)
    assert not report.connected_subtrees and report.subtree_witness == 0


def test_single_bag_always_valid():
    g = bidirected(5, [(0, 1), (1, 2), (3, 4), (0, 4)])
    td = TreeDecomposition([frozenset(range(5))])
    assert validate_decomposition(g, td) and td.width == 4


def test_missing_edge_is_witnessed():
    g = WeightedDigraph(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])
    td = TreeDecomposition([{0, 1}, {1, 2}], [(0, 1)])
    report = validate_decomposition(g, td)
    assert not report.edge_coverage and report.edge_witness == (2, 0)


def test_bad_bag_index_raises():
    with pytest.raises(StructuralError):
        validate_decomposition(WeightedDigraph(1), TreeDecomposition([{0}], [(0, 3)]))


def test_heuristic_on_tree_has_width_one():
    g = bidirected(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (5, 6)])
    td = heuristic_tree_decomposition(g)
    assert td.width == 1 and validate_decomposition(g, td)


def test_heuristic_on_clique():
    k = 6
    g = bidirected(k, [(a, b) for a in range(k) for b in range(a + 1, k)])
    td = heuristic_tree_decomposition(g)
    assert td.width == k - 1 and validate_decomposition(g, td)


@given(digraphs(max_n=12))
def test_heuristic_always_valid(g):
    assert validate_decomposition(g, heuristic_tree_decomposition(g))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_heuristic_on_partial_ktree(k):
    g, natural = random_partial_ktree(40, k, seed=k)
    assert validate_decomposition(g, natural) and natural.width == k
    assert validate_decomposition(g, heuristic_tree_decomposition(g))


def test_balanced_bag_star():
    td = star_decomposition(9)
    idx = find_balanced_bag(td, range(9))
    assert 0 in td.bags[idx]


def test_balanced_bag_path_four():
    g = bidirected(4, [(0, 1), (1, 2), (2, 3)])
    td = TreeDecomposition([{0, 1}, {1, 2}, {2, 3}], [(0, 1), (1, 2)])
    idx = find_balanced_bag(td, range(4))
    assert all(len(c) <= 2 for c in restrict_components(g, range(4), td.bags[idx]))


def test_balanced_bag_single_active():
    td = TreeDecomposition([{0, 1}, {1, 2}], [(0, 1)])
    assert 2 in td.bags[find_balanced_bag(td, {2})]


@given(st.integers(5, 60), st.integers(1, 4), st.integers(0, 10_000))
def test_balanced_bag_halves_every_level(n, k, seed):
    g, td = random_partial_ktree(n, k, seed)
    work = [frozenset(range(n))]
    while work:
        active = work.pop()
        bag = td.bags[find_balanced_bag(td, active)] & active
        comps = check_balanced(g, active, bag)  # raises when unbalanced
        assert sum(map(len, comps)) + len(bag) == len(active)
        work.extend(comps)


def test_restrict_components_examples():
    g = make_bidirected_star(7)
    assert restrict_components(g, range(7), {0}) == [frozenset({i}) for i in range(1, 7)]
    assert restrict_components(g, range(7), range(7)) == []
    cycle = bidirected(6, [(i, (i + 1) % 6) for i in range(6)])
    assert restrict_components(cycle, range(6), {0, 3}) == [frozenset({1, 2}), frozenset({4, 5})]


def test_restrict_components_rejects_bag_outside_active():
    with pytest.raises(StructuralError):
        restrict_components(make_bidirected_star(3), {1, 2}, {0})


def test_components_separated_by_bag():
    rng = random.Random(5)
    for seed in range(10):
        g, td = random_partial_ktree(30, 2, seed)
        active = frozenset(rng.sample(range(30), 20))
        bag = td.bags[find_balanced_bag(td, active)] & active
        comps = restrict_components(g, active, bag)
        h = nx.Graph()
        h.add_nodes_from(active - bag)
        h.add_edges_from((u, v) for u, v, _ in g.edges if u in active - bag and v in active - bag)
        for i, a in enumerate(comps):
            for b in comps[i + 1:]:
                assert not nx.has_path(h, min(a), min(b))


def test_path_decomposition_intervals():
    pd = PathDecomposition([{0, 1}, {1, 2}, {0, 2}])
    g = WeightedDigraph(3, [(0, 1, 1.0), (1, 2, 1.0)])
    report = validate_decomposition(g, pd)
    assert report.contiguous_intervals is False and report.interval_witness == 0


def test_td_round_trip():
    g, td = random_partial_ktree(25, 3, 4)
    text = format_td(td, g.n)
    back, n = parse_td(text)
    assert n == 25 and back == td
    assert format_td(back, n) == text


def test_td_parse_errors_have_line_numbers():
    with pytest.raises(ParseError, match=":3:"):
        parse_td("s td 1 2 2\nb 1 1 2\nb 1 1\n", "x.td")
    with pytest.raises(ParseError, match="header"):
        parse_td("b 1 1\n")
