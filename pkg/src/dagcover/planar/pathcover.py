"""Path covers: separator dipaths, per-vertex associations and portal sets.

Construction outline:

* one recursive separator hierarchy over the undirected skeleton; each node
  removes the vertices of a fundamental cycle (or a root path) of a
  shortest-path tree, chosen to minimise the largest remaining component;
* every removed tree path splits into maximal dipaths, and for each distance
  scale ``b`` those dipaths are cut into pieces of length at most ``2b``;
* a vertex of the node's component is associated with a piece when some
  piece vertex is within ``2b`` of it in either direction;
* portals are picked greedily from both ends so that any piece vertex is
  reachable through a kept portal with additive slack
  ``eps/2 * max(d, b)``.

If a shortest u-v path meets a piece vertex z at the scale with
``b <= d(u, v) < 2b``, the two slacks add up to at most ``eps * d(u, v)``.
"""
from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..config import BudgetConstants
from ..exceptions import InputError, StructuralError
from ..graph import REL_TOL, DistanceMatrix, WeightedDigraph, all_pairs_distances
from .embedding import PlanarEmbedding, validate_embedding

FORMAT_VERSION = 1


@dataclass(frozen=True)
class PathCover:
    """Dipaths with per-vertex path lists and portal sets.

    ``portals[(v, p)]`` lists ``(q, d(v, q), d(q, v))`` for portals ``q`` of
    vertex ``v`` on path ``p``, in path order.
    """

    n: int
    eps: float
    paths: tuple[tuple[int, ...], ...]
    weights: tuple[tuple[float, ...], ...]
    assoc: tuple[tuple[int, ...], ...]
    portals: dict = field(default_factory=dict)
    scales: tuple[float, ...] = ()

    def prefix(self, p: int) -> np.ndarray:
        return np.concatenate(([0.0], np.cumsum(self.weights[p])))

    def position(self, p: int) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.paths[p])}

    def max_paths_per_vertex(self) -> int:
        return max((len(a) for a in self.assoc), default=0)

    def max_portals(self) -> int:
        return max((len(c) for c in self.portals.values()), default=0)


# --------------------------------------------------------------------------
# separator hierarchy


def _skeleton(g: WeightedDigraph) -> list[dict[int, float]]:
    adj: list[dict[int, float]] = [dict() for _ in range(g.n)]
    for u, v, w in g.edges:
        for a, b in ((u, v), (v, u)):
            if b not in adj[a] or w < adj[a][b]:
                adj[a][b] = w
    return adj


def _shortest_path_tree(adj, comp: frozenset, root: int) -> dict[int, int | None]:
    parent: dict[int, int | None] = {root: None}
    dist = {root: 0.0}
    done = set()
    heap = [(0.0, root)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in sorted(adj[u].items()):
            if v not in comp or v in done:
                continue
            nd = d + w
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
    return parent


def _root_path(parent, v) -> list[int]:
    out = []
    while v is not None:
        out.append(v)
        v = parent[v]
    return out[::-1]


def _components(adj, verts) -> list[frozenset]:
    verts = set(verts)
    seen = set()
    comps = []
    for s in sorted(verts):
        if s in seen:
            continue
        seen.add(s)
        stack, comp = [s], [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v in verts and v not in seen:
                    seen.add(v)
                    stack.append(v)
                    comp.append(v)
        comps.append(frozenset(comp))
    return comps


def _largest_left(adj, comp, removed) -> int:
    rest = comp - removed
    return max((len(c) for c in _components(adj, rest)), default=0)


def choose_separator(adj, comp: frozenset) -> list[list[int]]:
    """Tree paths (each listed from the top of the tree down) to remove from ``comp``.

    Candidates are the fundamental cycles of non-tree edges (two paths from
    the lowest common ancestor) and single root paths. The winner minimises
    the largest leftover component, then the number of removed vertices;
    remaining ties go to the smallest edge, then the smallest vertex.
    """
    root = min(comp)
    parent = _shortest_path_tree(adj, comp, root)
    paths = {v: _root_path(parent, v) for v in comp}
    candidates = []
    for a in sorted(comp):
        for b in sorted(adj[a]):
            if b <= a or b not in comp or parent.get(a) == b or parent.get(b) == a:
                continue
            pa, pb = paths[a], paths[b]
            k = 0
            while k < min(len(pa), len(pb)) and pa[k] == pb[k]:
                k += 1
            lca = k - 1
            sep = [pa[lca:], pb[lca:]]
            candidates.append(((0, a, b), sep))
    for v in sorted(comp):
        candidates.append(((1, v, v), [paths[v]]))
    best = None
    for key, sep in candidates:
        removed = frozenset(x for p in sep for x in p)
        score = (_largest_left(adj, comp, removed), len(removed), key)
        if best is None or score < best[0]:
            best = (score, sep)
    return best[1]


@dataclass
class SeparatorNode:
    component: frozenset
    tree_paths: list[list[int]]
    children: list["SeparatorNode"] = field(default_factory=list)


def separator_hierarchy(g: WeightedDigraph) -> list[SeparatorNode]:
    """One hierarchy per weakly connected component, in order of smallest vertex."""
    adj = _skeleton(g)
    roots = []
    work = []
    for comp in _components(adj, range(g.n)):
        node = SeparatorNode(comp, [])
        roots.append(node)
        work.append(node)
    while work:
        node = work.pop()
        node.tree_paths = choose_separator(adj, node.component)
        removed = {x for p in node.tree_paths for x in p}
        for comp in _components(adj, node.component - removed):
            child = SeparatorNode(comp, [])
            node.children.append(child)
            work.append(child)
    return roots


def split_into_dipaths(g: WeightedDigraph, walk: list[int]) -> list[tuple[list[int], list[float]]]:
    """Cut an undirected walk into maximal dipaths of ``g``.

    Each result is ``(vertices, arc weights)`` oriented along its arcs.
    Steps usable both ways keep the walk's direction.
    """
    if len(walk) == 1:
        return [([walk[0]], [])]
    out = []
    start, direction = 0, 0  # 0 while every step so far goes both ways
    for i in range(len(walk) - 1):
        a, b = walk[i], walk[i + 1]
        allowed = {d for d, ok in ((1, g.has_edge(a, b)), (-1, g.has_edge(b, a))) if ok}
        if not allowed:
            raise StructuralError(f"walk step ({a}, {b}) is not an edge")
        if direction in allowed:
            continue
        if direction == 0:
            if len(allowed) == 1:
                direction = allowed.pop()
            continue
        out.append(_orient(g, walk[start:i + 1], direction))
        start, direction = i, allowed.pop()
    out.append(_orient(g, walk[start:], direction or 1))
    return out


def _orient(g, verts, direction):
    verts = list(verts) if direction > 0 else list(reversed(verts))
    return verts, [g.weight(a, b) for a, b in zip(verts, verts[1:])]


def cut_pieces(verts: list[int], weights: list[float], limit: float):
    """Consecutive pieces of total length at most ``limit`` covering every vertex."""
    pieces = []
    s = 0
    while s < len(verts):
        e, length = s, 0.0
        while e + 1 < len(verts) and length + weights[e] <= limit:
            length += weights[e]
            e += 1
        pieces.append((verts[s:e + 1], weights[s:e]))
        s = e + 1
    return pieces


# --------------------------------------------------------------------------
# portals


def greedy_portals(dv: np.ndarray, prefix: np.ndarray, b: float, eps: float) -> list[int]:
    """Positions kept when walking the piece forward from a vertex's side.

    ``dv[i]`` is the distance from the vertex to piece position ``i``;
    ``prefix`` the cumulative piece length. Position ``i`` is skipped when a
    kept ``j < i`` satisfies
    ``dv[j] + prefix[i] - prefix[j] <= dv[i] + eps/2 * max(dv[i], b)``.
    """
    kept: list[int] = []
    best = math.inf  # min over kept j of dv[j] - prefix[j]
    for i in range(len(dv)):
        d = dv[i]
        if not d < 2 * b:
            continue
        if best + prefix[i] <= d + eps / 2 * max(d, b):
            continue
        kept.append(i)
        best = min(best, d - prefix[i])
    return kept


def build_path_cover(g: WeightedDigraph, emb: PlanarEmbedding, eps: float, *,
                     gd: DistanceMatrix | None = None) -> PathCover:
    """Path cover with stretch ``1 + eps`` for a planar digraph."""
    if not (0 < eps < 1):
        raise InputError(f"eps must lie in (0, 1), got {eps!r}")
    report = validate_embedding(g, emb)
    if not report:
        raise StructuralError(f"embedding fails the Euler check: {report.detail}")
    if gd is None:
        gd = all_pairs_distances(g)
    D = gd.dist
    n = g.n
    pairs = gd.reachable_pairs()
    if len(pairs) == 0:
        return PathCover(n, eps, (), (), tuple(() for _ in range(n)), {}, ())
    vals = D[pairs[:, 0], pairs[:, 1]]
    dmin, dmax = float(vals.min()), float(vals.max())
    scales = [dmin]
    while scales[-1] * 2 <= dmax:
        scales.append(scales[-1] * 2)

    paths: list[tuple[int, ...]] = []
    weights: list[tuple[float, ...]] = []
    assoc: list[list[int]] = [[] for _ in range(n)]
    portals: dict[tuple[int, int], tuple] = {}
    path_scale: list[float] = []

    stack = list(reversed(separator_hierarchy(g)))
    nodes = []
    while stack:
        node = stack.pop()
        nodes.append(node)
        stack.extend(reversed(node.children))

    for b in scales:
        for node in nodes:
            comp = np.array(sorted(node.component))
            for walk in node.tree_paths:
                for verts, ws in split_into_dipaths(g, walk):
                    for pv, pw in cut_pieces(verts, ws, 2 * b):
                        cols = np.array(pv)
                        to_piece = D[np.ix_(comp, cols)]
                        from_piece = D[np.ix_(cols, comp)].T
                        near = (to_piece < 2 * b).any(axis=1) | (from_piece < 2 * b).any(axis=1)
                        if not near.any():
                            continue
                        pid = len(paths)
                        paths.append(tuple(int(x) for x in pv))
                        weights.append(tuple(float(x) for x in pw))
                        path_scale.append(b)
                        prefix = np.concatenate(([0.0], np.cumsum(pw)))
                        rev_prefix = prefix[-1] - prefix[::-1]
                        for row in np.flatnonzero(near):
                            v = int(comp[row])
                            fwd = greedy_portals(to_piece[row], prefix, b, eps)
                            back = greedy_portals(from_piece[row][::-1], rev_prefix, b, eps)
                            keep = sorted(set(fwd) | {len(pv) - 1 - i for i in back})
                            assoc[v].append(pid)
                            portals[(v, pid)] = tuple(
                                (int(pv[i]), float(to_piece[row, i]), float(from_piece[row, i]))
                                for i in keep
                            )
    return PathCover(n, eps, tuple(paths), tuple(weights), tuple(tuple(a) for a in assoc),
                     portals, tuple(path_scale))


# --------------------------------------------------------------------------
# contract oracle


@dataclass
class PathCoverReport:
    passed: bool
    worst_ratio: float
    worst_pair: tuple[int, int] | None
    pairs_checked: int
    portal_distances_ok: bool
    paths_are_dipaths: bool | None
    max_paths_per_vertex: int
    max_portals: int
    detail: str = ""

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst_ratio": None if math.isinf(self.worst_ratio) else self.worst_ratio,
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
            "pairs_checked": self.pairs_checked,
            "portal_distances_ok": self.portal_distances_ok,
            "paths_are_dipaths": self.paths_are_dipaths,
            "max_paths_per_vertex": self.max_paths_per_vertex,
            "max_portals": self.max_portals,
            "detail": self.detail,
        }


def realized_distances(pc: PathCover) -> np.ndarray:
    """n x n matrix of the best d(u,u') + d_P(u',v') + d(v',v) over shared paths."""
    n = pc.n
    best = np.full((n, n), math.inf)
    members: dict[int, list[int]] = {}
    for v, ps in enumerate(pc.assoc):
        for p in ps:
            members.setdefault(p, []).append(v)
    for p, mem in members.items():
        pos = pc.position(p)
        pre = pc.prefix(p)
        k = len(pc.paths[p])
        F = np.full((len(mem), k), math.inf)  # d(u,u') - pre[u'] at u' positions
        H = np.full((len(mem), k), math.inf)  # pre[v'] + d(v',v) at v' positions
        for r, v in enumerate(mem):
            for q, dto, dfrom in pc.portals.get((v, p), ()):
                if q not in pos:
                    raise StructuralError(f"portal {q} of vertex {v} is not on path {p}")
                i = pos[q]
                F[r, i] = dto - pre[i]
                H[r, i] = pre[i] + dfrom
        F = np.minimum.accumulate(F, axis=1)
        cand = (F[:, None, :] + H[None, :, :]).min(axis=2)
        idx = np.array(mem)
        sub = best[np.ix_(idx, idx)]
        best[np.ix_(idx, idx)] = np.minimum(sub, cand)
    return best


def verify_path_cover_contract(gd: DistanceMatrix, pc: PathCover, *,
                               g: WeightedDigraph | None = None) -> PathCoverReport:
    """Check every reachable pair is (1 + eps)-approximated through a shared path.

    With ``g`` given, each path is also checked to be a dipath of ``g`` with
    matching arc weights.
    """
    if gd.n != pc.n:
        raise StructuralError(f"path cover is over {pc.n} vertices, distances over {gd.n}")
    D = gd.dist
    dist_ok = True
    for (v, p), entries in pc.portals.items():
        for q, dto, dfrom in entries:
            if q not in pc.paths[p]:
                raise StructuralError(f"portal {q} of vertex {v} is not on path {p}")
            if not (_same(dto, D[v, q]) and _same(dfrom, D[q, v])):
                dist_ok = False
    dipaths = None
    if g is not None:
        dipaths = all(
            len(w) == len(P) - 1 and all(g.has_edge(a, b) and g.weight(a, b) == x
                                         for a, b, x in zip(P, P[1:], w))
            for P, w in zip(pc.paths, pc.weights)
        )
    best = realized_distances(pc)
    pairs = gd.reachable_pairs()
    worst, worst_pair = 1.0, None
    if len(pairs):
        d = D[pairs[:, 0], pairs[:, 1]]
        ratio = best[pairs[:, 0], pairs[:, 1]] / d
        k = int(np.argmax(ratio))
        worst = float(ratio[k])
        worst_pair = (int(pairs[k, 0]), int(pairs[k, 1]))
    ok = worst <= (1 + pc.eps) * (1 + REL_TOL)
    passed = ok and dist_ok and dipaths is not False
    detail = ""
    if not ok:
        detail = f"pair {worst_pair} realized ratio {worst}"
    elif not dist_ok:
        detail = "a stored portal distance disagrees with the graph"
    elif dipaths is False:
        detail = "a path is not a dipath of the graph"
    return PathCoverReport(passed, worst, worst_pair, len(pairs), dist_ok, dipaths, pc.max_paths_per_vertex(),
                           pc.max_portals(), detail)


def _same(a: float, b: float) -> bool:
    return a == b or (math.isinf(a) and math.isinf(b))


def size_bounds_hold(pc: PathCover, phi: float, constants: BudgetConstants) -> dict:
    limit_paths = constants.paths_per_vertex(pc.n, phi)
    limit_portals = constants.portals_per_path(pc.eps)
    return {
        "max_paths_per_vertex": pc.max_paths_per_vertex(),
        "paths_limit": limit_paths,
        "max_portals": pc.max_portals(),
        "portals_limit": limit_portals,
        "ok": pc.max_paths_per_vertex() <= limit_paths and pc.max_portals() <= limit_portals,
    }


# --------------------------------------------------------------------------
# JSON


def _num(x: float):
    return None if math.isinf(x) else x


def _unnum(x):
    return math.inf if x is None else float(x)


def path_cover_to_json(pc: PathCover) -> str:
    covering = []
    for (v, p), entries in sorted(pc.portals.items()):
        for q, dto, dfrom in entries:
            covering.append([v, p, q, _num(dto), _num(dfrom)])
    data = {
        "format": FORMAT_VERSION,
        "n": pc.n,
        "eps": pc.eps,
        "paths": [list(p) for p in pc.paths],
        "weights": [list(w) for w in pc.weights],
        "scales": list(pc.scales),
        "vertex_paths": [list(a) for a in pc.assoc],
        "covering": covering,
    }
    return json.dumps(data, separators=(",", ":")) + "\n"


def path_cover_from_json(text: str) -> PathCover:
    """Inverse of :func:`path_cover_to_json`; ``covering`` rows are (v, path, portal, d-to, d-from)."""
    try:
        data = json.loads(text)
        if data.get("format") != FORMAT_VERSION:
            raise StructuralError(f"unsupported path cover format {data.get('format')!r}")
        n = int(data["n"])
        paths = tuple(tuple(int(x) for x in p) for p in data["paths"])
        weights = tuple(tuple(float(x) for x in w) for w in data["weights"])
        assoc = tuple(tuple(int(x) for x in a) for a in data["vertex_paths"])
        if len(assoc) != n or len(weights) != len(paths):
            raise StructuralError("path cover arrays have inconsistent lengths")
        portals: dict[tuple[int, int], list] = {}
        for v, p, q, dto, dfrom in data["covering"]:
            portals.setdefault((int(v), int(p)), []).append((int(q), _unnum(dto), _unnum(dfrom)))
        return PathCover(n, float(data["eps"]), paths, weights, assoc,
                         {k: tuple(e) for k, e in portals.items()},
                         tuple(float(s) for s in data.get("scales", ())))
    except json.JSONDecodeError as exc:
        raise StructuralError(f"path cover JSON does not parse: {exc}") from None
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, StructuralError):
            raise
        raise StructuralError(f"malformed path cover JSON: {exc!r}") from None
