import networkx as nx
import numpy as np
import pytest
from scipy import sparse
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from dagcover.estimators import (
    PlanarCover,
    TwNonSteinerCover,
    TwSteinerCover,
    check_digraph,
    check_pairs,
)
from dagcover.exceptions import InputError
from dagcover.generators import grid, random_partial_ktree
from dagcover.graph import all_pairs_distances


def test_check_digraph_inputs_agree():
    A = np.array([[0, 2, 0], [0, 0, 3], [np.inf, 0, 0]])
    h = nx.DiGraph()
    h.add_nodes_from(range(3))
    h.add_edge(0, 1, weight=2.0)
    h.add_edge(1, 2, weight=3.0)
    gs = [check_digraph(A), check_digraph(sparse.csr_matrix(np.nan_to_num(A, posinf=0))), check_digraph(h)]
    assert all(g.edges == ((0, 1, 2.0), (1, 2, 3.0)) for g in gs)
    assert check_digraph(gs[0]) is gs[0]


@pytest.mark.parametrize("bad", [
    np.zeros((2, 3)),
    np.array([[0, -1], [0, 0]]),
    np.array([[0, np.nan], [0, 0]]),
    nx.Graph([(0, 1)]),
    "graph",
])
def test_check_digraph_rejects(bad):
    with pytest.raises(InputError):
        check_digraph(bad)


def test_check_pairs():
    assert check_pairs([1, 2], 3).tolist() == [[1, 2]]
    assert check_pairs([], 3).shape == (0, 2)
    for bad in ([[0, 3]], [[0.5, 1]], [[0, 1, 2]]):
        with pytest.raises(InputError):
            check_pairs(bad, 3)


@pytest.mark.parametrize("est", [TwSteinerCover(), TwSteinerCover(prune=True), TwNonSteinerCover()])
def test_tw_estimators_predict_exact_distances(est):
    g, td = random_partial_ktree(30, 2, 4)
    est = clone(est).set_params(tree_decomposition=td).fit(g)
    D = all_pairs_distances(g).dist
    pairs = np.array([(u, v) for u in range(30) for v in range(30)])
    assert np.array_equal(est.predict(pairs), D[pairs[:, 0], pairs[:, 1]])
    assert est.transform(pairs).shape == (900, est.n_dags_)
    assert est.certify().passed


def test_planar_estimator_within_stretch():
    g, emb = grid(4, 4, 2)
    est = PlanarCover(eps=0.25, embedding=emb).fit(g)
    D = all_pairs_distances(g).dist
    pairs = np.array([(u, v) for u in range(16) for v in range(16)])
    pred = est.predict(pairs)
    truth = D[pairs[:, 0], pairs[:, 1]]
    assert np.all(pred >= truth) and np.all(pred <= 1.25 * truth + 1e-9)
    assert len(est.center_sets_) == 16 and est.path_cover_.eps == 0.25


def test_planar_estimator_embeds_itself():
    g, _ = grid(3, 3, 0)
    assert PlanarCover().fit(g).certify().passed


def test_params_and_clone():
    est = PlanarCover(eps=0.3)
    assert est.get_params() == {"eps": 0.3, "embedding": None}
    assert clone(est).eps == 0.3
    assert "prune" in TwSteinerCover().get_params()


def test_not_fitted():
    with pytest.raises(NotFittedError):
        TwSteinerCover().predict([[0, 1]])


def test_heuristic_decomposition_when_none_given():
    g, _ = random_partial_ktree(20, 3, 8)
    est = TwSteinerCover().fit(g)
    assert est.decomposition_width_ >= 1 and est.certify().passed


def test_fit_accepts_adjacency_matrix():
    A = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=float)
    est = TwNonSteinerCover().fit(A)
    assert est.predict([[0, 2], [2, 1]]).tolist() == [2.0, 2.0]
