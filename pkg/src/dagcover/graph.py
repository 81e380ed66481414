"""Weighted digraphs, shortest paths and topological orders.

Distances use ``UNREACHABLE`` (``math.inf``) for missing dipaths; test with
:func:`is_reachable` rather than comparing against large numbers.
"""
from __future__ import annotations

import heapq
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

from .exceptions import InputError

UNREACHABLE = math.inf

# relative tolerance for every stretch / domination comparison
REL_TOL = 1e-9


def is_reachable(d) -> bool:
    return not math.isinf(d)


class WeightedDigraph:
    """Simple digraph on vertices ``0..n-1`` with positive finite weights.

    Parallel edges collapse to their minimum weight; self-loops are rejected.
    Instances are treated as immutable.
    """

    __slots__ = ("n", "edges", "_succ", "_pred", "_weight")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, float]] = ()):
        if int(n) != n or n < 0:
            raise InputError(f"vertex count must be a non-negative integer, got {n!r}")
        n = int(n)
        best: dict[tuple[int, int], float] = {}
        for e in edges:
            try:
                u, v, w = e
            except (TypeError, ValueError):
                raise InputError(f"edge must be (tail, head, weight), got {e!r}") from None
            if int(u) != u or int(v) != v:
                raise InputError(f"vertex ids must be integers, got {e!r}")
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge {e!r} references a vertex outside 0..{n - 1}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (w > 0 and math.isfinite(w)):
                raise InputError(f"edge ({u}, {v}) has non-positive or non-finite weight {w!r}")
            key = (u, v)
            if key not in best or w < best[key]:
                best[key] = w
        self.n = n
        self.edges: tuple[tuple[int, int, float], ...] = tuple(
            (u, v, w) for (u, v), w in sorted(best.items())
        )
        self._weight = best
        succ: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        pred: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for u, v, w in self.edges:
            succ[u].append((v, w))
            pred[v].append((u, w))
        self._succ = succ
        self._pred = pred

    @property
    def m(self) -> int:
        return len(self.edges)

    def successors(self, u: int) -> list[tuple[int, float]]:
        return self._succ[u]

    def predecessors(self, v: int) -> list[tuple[int, float]]:
        return self._pred[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._weight

    def weight(self, u: int, v: int) -> float:
        return self._weight[(u, v)]

    def edge_pairs(self) -> set[tuple[int, int]]:
        return set(self._weight)

    def vertex_ids(self) -> range:
        return range(self.n)

    def undirected_neighbors(self) -> list[set[int]]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v, _ in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return nbrs

    def reverse(self) -> "WeightedDigraph":
        return WeightedDigraph(self.n, ((v, u, w) for u, v, w in self.edges))

    def to_csr(self) -> csr_matrix:
        if not self.edges:
            return csr_matrix((self.n, self.n))
        u, v, w = zip(*self.edges)
        return csr_matrix((np.asarray(w, dtype=float), (u, v)), shape=(self.n, self.n))

    def __eq__(self, other):
        if not isinstance(other, WeightedDigraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"WeightedDigraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Permutation:
    """A total order on ``0..n-1`` together with its position lookup."""

    order: tuple[int, ...]
    inverse: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        order = tuple(int(v) for v in self.order)
        n = len(order)
        inv = [-1] * n
        for pos, v in enumerate(order):
            if not 0 <= v < n or inv[v] != -1:
                raise InputError("order is not a permutation of 0..n-1")
            inv[v] = pos
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "inverse", tuple(inv))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def reversed(self) -> "Permutation":
        return Permutation(self.order[::-1])

    def position(self, v: int) -> int:
        return self.inverse[v]

    def sort(self, vertices: Iterable[int]) -> list[int]:
        """Vertices of the given subset, listed in this order."""
        return sorted(vertices, key=self.inverse.__getitem__)

    def __len__(self):
        return len(self.order)


class DistanceMatrix:
    """Dense all-pairs distances; ``UNREACHABLE`` marks missing dipaths."""

    __slots__ = ("dist",)

    def __init__(self, dist):
        dist = np.asarray(dist, dtype=float)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise InputError("distance matrix must be square")
        dist.setflags(write=False)
        self.dist = dist

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __getitem__(self, uv):
        return float(self.dist[uv])

    def reachable(self, u: int, v: int) -> bool:
        return is_reachable(self.dist[u, v])

    def reachable_pairs(self) -> np.ndarray:
        """(k, 2) array of ordered pairs u != v with u reaching v."""
        mask = np.isfinite(self.dist)
        np.fill_diagonal(mask, False)
        return np.argwhere(mask)


def _dijkstra(n, source, neighbors, allowed=None) -> list[float]:
    dist = [UNREACHABLE] * n
    dist[source] = 0.0
    done = [False] * n
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in neighbors(u):
            if allowed is not None and v not in allowed:
                continue
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def single_source_distances(
    g: WeightedDigraph, source: int, *, within=None, reverse: bool = False
) -> list[float]:
    """Exact shortest-path distances from ``source``.

    ``within`` restricts the search to the subgraph induced by a vertex set
    (which must contain ``source``); vertices outside it come back
    UNREACHABLE. With ``reverse=True`` the result holds distances *to*
    ``source``.
    """
    if not (isinstance(source, (int, np.integer)) and 0 <= source < g.n):
        raise InputError(f"source {source!r} out of range for n={g.n}")
    allowed = None
    if within is not None:
        allowed = within if isinstance(within, (set, frozenset)) else set(within)
        if source not in allowed:
            raise InputError(f"source {source} not inside the restricting vertex set")
    nbrs = g.predecessors if reverse else g.successors
    return _dijkstra(g.n, int(source), nbrs, allowed)


def all_pairs_distances(g: WeightedDigraph) -> DistanceMatrix:
    """All-pairs shortest paths (compiled Dijkstra from scipy)."""
    if g.n == 0:
        return DistanceMatrix(np.zeros((0, 0)))
    if not g.edges:
        d = np.full((g.n, g.n), UNREACHABLE)
        np.fill_diagonal(d, 0.0)
        return DistanceMatrix(d)
    return DistanceMatrix(_sp_dijkstra(g.to_csr(), directed=True))


def aspect_ratio(d: DistanceMatrix) -> float:
    """Largest over smallest finite distance between distinct vertices."""
    pairs = d.reachable_pairs()
    if len(pairs) == 0:
        raise InputError("aspect ratio undefined: no reachable pair of distinct vertices")
    vals = d.dist[pairs[:, 0], pairs[:, 1]]
    return float(vals.max() / vals.min())


def normalize_weights(g: WeightedDigraph) -> tuple[WeightedDigraph, float]:
    """Rescale so the minimum weight is 1; multiply by ``scale`` to undo."""
    if not g.edges:
        return g, 1.0
    scale = min(w for _, _, w in g.edges)
    if scale == 1.0:
        return g, 1.0
    return WeightedDigraph(g.n, ((u, v, w / scale) for u, v, w in g.edges)), scale


def check_acyclic_and_order(vertices: Iterable, edges: Iterable):
    """Topologically sort, or find a directed cycle.

    ``edges`` may carry weights (extra tuple entries are ignored). Returns
    ``(True, order)`` with every edge tail before its head, or
    ``(False, cycle)`` where ``cycle`` is a closed walk ``(a, b, ..., a)``.
    Ties resolve toward the smallest vertex, so the result is deterministic
    for orderable vertex ids.
    """
    verts = list(vertices)
    index = {v: i for i, v in enumerate(verts)}
    out: list[list[int]] = [[] for _ in verts]
    indeg = [0] * len(verts)
    for e in edges:
        a, b = index[e[0]], index[e[1]]
        out[a].append(b)
        indeg[b] += 1
    # verts are processed by their position in the input listing
    heap = [i for i, d in enumerate(indeg) if d == 0]
    heapq.heapify(heap)
    order = []
    deg = list(indeg)
    while heap:
        i = heapq.heappop(heap)
        order.append(verts[i])
        for j in out[i]:
            deg[j] -= 1
            if deg[j] == 0:
                heapq.heappush(heap, j)
    if len(order) == len(verts):
        return True, order
    return False, [verts[i] for i in _find_cycle(out, deg)]


def _find_cycle(out: Sequence[Sequence[int]], remaining_deg: Sequence[int]) -> list[int]:
    # vertices with remaining in-degree > 0 all lie on or after a cycle
    stuck = [i for i, d in enumerate(remaining_deg) if d > 0]
    color = {}
    for start in stuck:
        if start in color:
            continue
        stack = [(start, iter(out[start]))]
        path = [start]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                c = color.get(nxt, 0)
                if c == 1:
                    k = path.index(nxt)
                    return path[k:] + [nxt]
                if c == 0:
                    color[nxt] = 1
                    path.append(nxt)
                    stack.append((nxt, iter(out[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                stack.pop()
                path.pop()
    raise AssertionError("Kahn's algorithm stalled without a cycle")


def weakly_connected_components(n: int, pairs: Iterable[tuple[int, int]], vertices=None) -> list[frozenset]:
    """Components of the underlying undirected graph, ordered by smallest member."""
    verts = range(n) if vertices is None else vertices
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        if a in parent and b in parent:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, set] = {}
    for v in parent:
        groups.setdefault(find(v), set()).add(v)
    return sorted((frozenset(s) for s in groups.values()), key=min)
