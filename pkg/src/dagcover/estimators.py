"""Estimator-style wrappers around the cover constructions.

``fit`` takes a digraph (see :func:`check_digraph` for accepted forms) and
builds a cover; ``predict`` answers distance queries for vertex pairs from
the cover; ``transform`` returns the per-dag distances behind each answer.
"""
from __future__ import annotations

import numpy as np
import networkx as nx
from scipy import sparse
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .cover import CoverCertificate, DagCover, certify
from .decomposition import TreeDecomposition, heuristic_tree_decomposition, validate_decomposition
from .exceptions import InputError, StructuralError
from .graph import WeightedDigraph, all_pairs_distances
from .planar.cover import build_planar_cover_parts
from .planar.embedding import PlanarEmbedding, embed
from .tw_nonsteiner import build_tw_nonsteiner_cover
from .tw_steiner import build_tw_steiner_cover


def check_digraph(X) -> WeightedDigraph:
    """Coerce ``X`` to a :class:`WeightedDigraph`.

    Accepts a WeightedDigraph, a networkx DiGraph on nodes ``0..n-1``
    (``weight`` attribute, default 1), or a square adjacency matrix (dense
    or scipy sparse) where positive finite entries are edge weights.
    """
    if isinstance(X, WeightedDigraph):
        return X
    if isinstance(X, nx.Graph):
        if not X.is_directed():
            raise InputError("expected a directed graph; convert with G.to_directed()")
        n = X.number_of_nodes()
        if set(X.nodes) != set(range(n)):
            raise InputError("networkx graph nodes must be the integers 0..n-1")
        return WeightedDigraph(n, ((u, v, d.get("weight", 1.0)) for u, v, d in X.edges(data=True)))
    if sparse.issparse(X):
        A = sparse.coo_matrix(X)
        if A.shape[0] != A.shape[1]:
            raise InputError(f"adjacency matrix must be square, got shape {A.shape}")
        keep = np.isfinite(A.data) & (A.data > 0)
        return WeightedDigraph(A.shape[0], zip(A.row[keep], A.col[keep], A.data[keep]))
    try:
        A = np.asarray(X, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"cannot interpret {type(X).__name__} as a digraph") from None
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError(f"adjacency matrix must be square, got shape {A.shape}")
    if np.isnan(A).any() or (A < 0).any():
        raise InputError("adjacency entries must be non-negative (0 or inf for no edge)")
    rows, cols = np.nonzero(np.isfinite(A) & (A > 0))
    return WeightedDigraph(A.shape[0], zip(rows, cols, A[rows, cols]))


def check_pairs(pairs, n: int) -> np.ndarray:
    """Validate query pairs as a ``(k, 2)`` integer array with ids in ``0..n-1``."""
    P = np.asarray(pairs)
    if P.size == 0:
        return np.zeros((0, 2), dtype=int)
    if P.ndim == 1 and P.shape[0] == 2:
        P = P.reshape(1, 2)
    if P.ndim != 2 or P.shape[1] != 2:
        raise InputError(f"pairs must have shape (k, 2), got {P.shape}")
    if not np.issubdtype(P.dtype, np.integer):
        if not np.all(np.mod(P, 1) == 0):
            raise InputError("pair entries must be integers")
        P = P.astype(int)
    if P.min() < 0 or P.max() >= n:
        raise InputError(f"pair entries must lie in 0..{n - 1}")
    return P


class _CoverEstimator(BaseEstimator):
    def _build(self, g: WeightedDigraph) -> DagCover:
        raise NotImplementedError

    def fit(self, X, y=None):
        g = check_digraph(X)
        self.graph_ = g
        self.n_vertices_ = g.n
        self.cover_ = self._build(g)
        self.n_dags_ = self.cover_.g
        self._dag_dist = None
        return self

    def _distances(self) -> np.ndarray:
        if self._dag_dist is None:
            self._dag_dist = np.stack([d.original_distances() for d in self.cover_.dags])
        return self._dag_dist

    def transform(self, pairs) -> np.ndarray:
        """Per-dag distances, shape ``(k, n_dags)``."""
        check_is_fitted(self, "cover_")
        P = check_pairs(pairs, self.n_vertices_)
        return self._distances()[:, P[:, 0], P[:, 1]].T

    def predict(self, pairs) -> np.ndarray:
        """Cover distance (best dag) for each pair; ``inf`` when no dag connects it."""
        per_dag = self.transform(pairs)
        if per_dag.shape[1] == 0:
            return np.full(per_dag.shape[0], np.inf)
        return per_dag.min(axis=1)

    def certify(self, threads: int = 1) -> CoverCertificate:
        check_is_fitted(self, "cover_")
        return certify(self.graph_, self.cover_, threads=threads)


def _decomposition_for(g: WeightedDigraph, td: TreeDecomposition | None) -> TreeDecomposition:
    if td is None:
        return heuristic_tree_decomposition(g)
    report = validate_decomposition(g, td)
    if not report:
        raise StructuralError(f"invalid tree decomposition: {report}")
    return td


class TwSteinerCover(_CoverEstimator):
    """Exact two-dag Steiner cover over a tree decomposition.

    Without ``tree_decomposition`` a min-fill heuristic supplies one.
    """

    def __init__(self, tree_decomposition: TreeDecomposition | None = None, prune: bool = False):
        self.tree_decomposition = tree_decomposition
        self.prune = prune

    def _build(self, g):
        td = _decomposition_for(g, self.tree_decomposition)
        cover, pds = build_tw_steiner_cover(g, td, prune=self.prune)
        self.path_decompositions_ = pds
        self.decomposition_width_ = td.width
        return cover


class TwNonSteinerCover(_CoverEstimator):
    """Exact cover with O(log n) dags and no Steiner points."""

    def __init__(self, tree_decomposition: TreeDecomposition | None = None):
        self.tree_decomposition = tree_decomposition

    def _build(self, g):
        td = _decomposition_for(g, self.tree_decomposition)
        self.decomposition_width_ = td.width
        return build_tw_nonsteiner_cover(g, td)


class PlanarCover(_CoverEstimator):
    """Two-dag (1 + eps) Steiner cover of a planar digraph."""

    def __init__(self, eps: float = 0.5, embedding: PlanarEmbedding | None = None):
        self.eps = eps
        self.embedding = embedding

    def _build(self, g):
        emb = self.embedding if self.embedding is not None else embed(g)
        gd = all_pairs_distances(g)
        parts = build_planar_cover_parts(g, emb, self.eps, gd=gd)
        self.path_cover_ = parts.path_cover
        self.center_sets_ = parts.centers
        return parts.cover
