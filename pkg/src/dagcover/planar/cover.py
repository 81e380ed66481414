"""Two-dag (1 + eps) Steiner covers for planar digraphs.

Each path of a path cover is split recursively at its centroid. A vertex
collects, as centers, the centroids of every subpath containing one of its
portals. Vertices sharing a center ``x`` are routed through a vertex gadget
for ``x``, under the vertex-id order in one dag and its reverse in the other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..config import BudgetConstants
from ..cover import DagBuilder, DagCover, count_extra_edges
from ..exceptions import InputError, StructuralError
from ..gadget import build_vertex_gadget
from ..graph import DistanceMatrix, Permutation, WeightedDigraph, all_pairs_distances, aspect_ratio
from .embedding import PlanarEmbedding
from .pathcover import PathCover, build_path_cover


@dataclass(frozen=True)
class SubpathNode:
    lo: int
    hi: int  # inclusive positions on the path
    centroid: int  # position of the centroid
    left: int | None
    right: int | None
    depth: int


@dataclass(frozen=True)
class CentroidHierarchy:
    """Binary tree of subpaths; node 0 is the whole path."""

    path: tuple[int, ...]
    nodes: tuple[SubpathNode, ...]
    chains: tuple[tuple[int, ...], ...]  # per position: node ids from the root down

    @property
    def depth(self) -> int:
        return max(nd.depth for nd in self.nodes) + 1 if self.nodes else 0

    def centroid_vertex(self, node: int) -> int:
        return self.path[self.nodes[node].centroid]

    def ancestors(self, position: int) -> tuple[int, ...]:
        """Node ids of every subpath containing ``position``."""
        return self.chains[position]

    def common_subpath(self, i: int, j: int) -> int:
        """Smallest subpath containing both positions."""
        a, b = self.chains[i], self.chains[j]
        k = 0
        while k < min(len(a), len(b)) and a[k] == b[k]:
            k += 1
        return a[k - 1]


def build_centroid_hierarchy(path) -> CentroidHierarchy:
    """Split at the middle vertex (the earlier one for even lengths) until singletons."""
    path = tuple(int(v) for v in path)
    if not path:
        raise InputError("centroid hierarchy needs a nonempty path")
    nodes: list[SubpathNode | None] = []
    chains: list[tuple[int, ...]] = [()] * len(path)

    def build(lo, hi, depth, above):
        nid = len(nodes)
        nodes.append(None)
        c = lo + (hi - lo) // 2
        here = above + (nid,)
        chains[c] = here
        left = build(lo, c - 1, depth + 1, here) if c > lo else None
        right = build(c + 1, hi, depth + 1, here) if c < hi else None
        nodes[nid] = SubpathNode(lo, hi, c, left, right, depth)
        return nid

    # depth is logarithmic, so plain recursion is safe
    build(0, len(path) - 1, 0, ())
    return CentroidHierarchy(path, tuple(nodes), tuple(chains))


def assemble_center_sets(pc: PathCover, hierarchies) -> list[set[int]]:
    """X_v: centroids of every subpath that contains one of v's portals."""
    X: list[set[int]] = [set() for _ in range(pc.n)]
    positions = {}
    for v, ps in enumerate(pc.assoc):
        for p in ps:
            if p not in positions:
                positions[p] = pc.position(p)
            pos, h = positions[p], hierarchies[p]
            for q, _, _ in pc.portals.get((v, p), ()):
                if q not in pos:
                    raise StructuralError(f"portal {q} of vertex {v} is not on path {p}")
                for node in h.ancestors(pos[q]):
                    X[v].add(h.centroid_vertex(node))
    return X


def invert_center_sets(X: list[set[int]]) -> dict[int, list[int]]:
    """A_x = {v : x in X_v}, members sorted by id."""
    A: dict[int, list[int]] = {}
    for v, xs in enumerate(X):
        for x in xs:
            A.setdefault(x, []).append(v)
    return {x: sorted(vs) for x, vs in sorted(A.items())}


@dataclass
class PlanarCoverParts:
    cover: DagCover
    path_cover: PathCover
    hierarchies: list[CentroidHierarchy]
    centers: list[set[int]]
    members: dict[int, list[int]]
    gd: DistanceMatrix
    phi: float


def build_planar_cover_parts(g: WeightedDigraph, emb: PlanarEmbedding, eps: float, *,
                             gd: DistanceMatrix | None = None) -> PlanarCoverParts:
    """Build the cover and keep the intermediate structures for inspection."""
    if gd is None:
        gd = all_pairs_distances(g)
    pc = build_path_cover(g, emb, eps, gd=gd)
    hierarchies = [build_centroid_hierarchy(p) for p in pc.paths]
    X = assemble_center_sets(pc, hierarchies)
    A = invert_center_sets(X)
    sigma = Permutation.identity(g.n)
    orders = (sigma, sigma.reversed())
    builders = (DagBuilder(g.n), DagBuilder(g.n))
    D = gd.dist
    for x, members in A.items():
        to_x, from_x = D[:, x], D[x, :]
        for perm, builder in zip(orders, builders):
            build_vertex_gadget(to_x, from_x, perm.sort(members), x).emit(builder)
    dags = tuple(b.build(p.order) for b, p in zip(builders, orders))
    phi = aspect_ratio(gd) if len(gd.reachable_pairs()) else 1.0
    cover = DagCover(dags, t=1.0 + eps, steiner=True,
                     provenance={"construction": "planar", "eps": eps, "graph_n": g.n})
    return PlanarCoverParts(cover, pc, hierarchies, X, A, gd, phi)


def build_planar_cover(g: WeightedDigraph, emb: PlanarEmbedding, eps: float, *,
                       gd: DistanceMatrix | None = None) -> DagCover:
    return build_planar_cover_parts(g, emb, eps, gd=gd).cover


def planar_budgets(g: WeightedDigraph, parts: PlanarCoverParts,
                   constants: BudgetConstants | None = None) -> dict:
    """Measured sizes against the configured budgets."""
    constants = constants or BudgetConstants()
    n, eps, phi = parts.path_cover.n, parts.path_cover.eps, parts.phi
    max_x = max((len(x) for x in parts.centers), default=0)
    mu = count_extra_edges(g, parts.cover)
    centers_limit = constants.centers_per_vertex(n, eps, phi)
    mu_limit = constants.extra_edges(n, eps, phi)
    return {
        "max_centers": max_x,
        "centers_limit": centers_limit,
        "mu": mu,
        "mu_limit": mu_limit,
        "ok": max_x <= centers_limit and mu <= mu_limit,
    }


def explain_pair(parts: PlanarCoverParts, u: int, v: int) -> dict:
    """Recompute the routing argument for one reachable pair.

    Finds the best shared path and portals, the smallest subpath holding
    both portals and its centroid ``x``, then measures the gadget of ``x``
    alone on (u, v).
    """
    pc, D = parts.path_cover, parts.gd.dist
    d = float(D[u, v])
    if u == v or math.isinf(d):
        raise InputError(f"pair ({u}, {v}) is not a reachable pair of distinct vertices")
    best = None
    for p in sorted(set(pc.assoc[u]) & set(pc.assoc[v])):
        pos, pre = pc.position(p), pc.prefix(p)
        for a, dua, _ in pc.portals.get((u, p), ()):
            for b, _, dbv in pc.portals.get((v, p), ()):
                if pos[a] > pos[b]:
                    continue
                total = dua + pre[pos[b]] - pre[pos[a]] + dbv
                if best is None or total < best[0]:
                    best = (total, p, a, b)
    if best is None:
        return {"u": u, "v": v, "distance": d, "found": False}
    total, p, a, b = best
    h = parts.hierarchies[p]
    pos = pc.position(p)
    node = h.common_subpath(pos[a], pos[b])
    x = h.centroid_vertex(node)
    members = parts.members.get(x, [])
    ok_members = u in members and v in members
    gadget_distance = math.inf
    if ok_members:
        forward = u < v
        order = members if forward else members[::-1]
        gadget = build_vertex_gadget(D[:, x], D[x, :], order, x)
        gadget_distance = gadget.to_dag(pc.n).single_source(u)[v]
    return {
        "u": u,
        "v": v,
        "distance": d,
        "found": True,
        "path": p,
        "u_portal": a,
        "v_portal": b,
        "path_route": float(total),
        "centroid": x,
        "centroid_between": pos[a] <= pos[x] <= pos[b],
        "in_both_center_sets": x in parts.centers[u] and x in parts.centers[v],
        "gadget_distance": float(gadget_distance),
        "bound": (1 + pc.eps) * d,
    }
