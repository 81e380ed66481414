"""DAG covers: data model, certification, JSON and DOT serialization.

Inside a :class:`SteinerDag` vertices are dense integers: ``0..n-1`` are the
graph's own vertices and ``n..n+k-1`` are the dag's Steiner points. In
serialized form Steiner point ``n + j`` of dag ``i`` is written ``s:i:j``.
"""
from __future__ import annotations

import json
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InputError, StructuralError
from .graph import (
    REL_TOL,
    UNREACHABLE,
    DistanceMatrix,
    WeightedDigraph,
    _dijkstra,
    all_pairs_distances,
    check_acyclic_and_order,
)

FORMAT_VERSION = 1


class SteinerDag:
    """One dag of a cover.

    The dag is not required to be acyclic at construction (certification
    reports cycles); it is required to be structurally well formed.
    """

    __slots__ = ("n", "originals", "n_steiner", "edges", "order", "_succ")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int, float]],
        order: Sequence[int] | None = None,
        *,
        originals: Iterable[int] | None = None,
        n_steiner: int = 0,
    ):
        self.n = int(n)
        self.n_steiner = int(n_steiner)
        self.originals = tuple(sorted(range(self.n) if originals is None else set(originals)))
        orig = set(self.originals)
        if any(not 0 <= v < self.n for v in orig):
            raise StructuralError("original vertex outside 0..n-1")
        total = self.n + self.n_steiner
        clean = []
        for t, h, w in edges:
            t, h, w = int(t), int(h), float(w)
            for x in (t, h):
                if not ((x < self.n and x in orig) or self.n <= x < total):
                    raise StructuralError(f"edge ({t}, {h}) has endpoint {x} outside the dag's vertices")
            if t == h:
                raise StructuralError(f"self-loop at {t}")
            if not (w >= 0 and math.isfinite(w)):
                raise StructuralError(f"edge ({t}, {h}) has invalid weight {w!r}")
            if w == 0 and t < self.n and h < self.n:
                raise StructuralError(f"zero-weight edge ({t}, {h}) between original vertices")
            clean.append((t, h, w))
        self.edges = tuple(clean)
        verts = self.vertex_list()
        if order is None:
            ok, res = check_acyclic_and_order(verts, self.edges)
            order = res if ok else verts
        order = tuple(int(v) for v in order)
        if sorted(order) != verts:
            raise StructuralError("declared order does not list exactly the dag's vertices")
        self.order = order
        self._succ = None

    # vertices -------------------------------------------------------------
    def vertex_list(self) -> list[int]:
        return list(self.originals) + list(range(self.n, self.n + self.n_steiner))

    def vertex_ids(self) -> list[int]:
        return self.vertex_list()

    def is_steiner(self, v: int) -> bool:
        return v >= self.n

    @property
    def n_vertices(self) -> int:
        return len(self.originals) + self.n_steiner

    def edge_pairs(self) -> set[tuple[int, int]]:
        return {(t, h) for t, h, _ in self.edges}

    def successors(self, v):
        if self._succ is None:
            succ: dict[int, list] = {}
            for t, h, w in self.edges:
                succ.setdefault(t, []).append((h, w))
            self._succ = succ
        return self._succ.get(v, ())

    def with_edges(self, edges, order=None) -> "SteinerDag":
        """Copy with a replaced edge list (used by mutation tests and tools)."""
        return SteinerDag(
            self.n, edges, self.order if order is None else order,
            originals=self.originals, n_steiner=self.n_steiner,
        )

    # checks ---------------------------------------------------------------
    def declared_order_ok(self) -> bool:
        pos = {v: i for i, v in enumerate(self.order)}
        return all(pos[t] < pos[h] for t, h, _ in self.edges)

    def acyclicity(self):
        """``(True, order)`` or ``(False, cycle)``."""
        if self.declared_order_ok():
            return True, list(self.order)
        return check_acyclic_and_order(self.vertex_list(), self.edges)

    def single_source(self, source: int) -> list[float]:
        """Distances from ``source`` over originals and Steiner points (Dijkstra)."""
        return _dijkstra(self.n + self.n_steiner, source, self.successors)

    def original_distances(self) -> np.ndarray:
        """n x n matrix of dag distances between graph vertices."""
        n = self.n
        out = np.full((n, n), UNREACHABLE)
        np.fill_diagonal(out, 0.0)
        if not self.originals:
            return out
        ok, topo = self.acyclicity()
        src = np.asarray(self.originals)
        if ok:
            block = _dag_dp(self, topo, src)
        else:
            block = np.array([self.single_source(int(s)) for s in src]).T
        rows = block[: self.n]
        out[np.ix_(src, src)] = rows[src].T
        return out

    def __repr__(self):
        return f"SteinerDag(n={self.n}, steiner={self.n_steiner}, edges={len(self.edges)})"


def _dag_dp(dag: SteinerDag, topo, sources: np.ndarray) -> np.ndarray:
    """Shortest paths in topological order; returns (n+k, len(sources)) array."""
    total = dag.n + dag.n_steiner
    dist = np.full((total, len(sources)), UNREACHABLE)
    dist[sources, np.arange(len(sources))] = 0.0
    if not dag.edges:
        return dist
    e = np.asarray(dag.edges)
    tails = e[:, 0].astype(np.int64)
    heads = e[:, 1].astype(np.int64)
    ws = e[:, 2]
    by_head = np.argsort(heads, kind="stable")
    heads_sorted = heads[by_head]
    starts = np.searchsorted(heads_sorted, np.arange(total), side="left")
    ends = np.searchsorted(heads_sorted, np.arange(total), side="right")
    for v in topo:
        lo, hi = starts[v], ends[v]
        if lo == hi:
            continue
        idx = by_head[lo:hi]
        if hi - lo == 1:
            cand = dist[tails[idx[0]]] + ws[idx[0]]
        else:
            cand = (dist[tails[idx]] + ws[idx][:, None]).min(axis=0)
        np.minimum(dist[v], cand, out=dist[v])
    return dist


@dataclass(frozen=True)
class DagCover:
    dags: tuple[SteinerDag, ...]
    t: float = 1.0
    steiner: bool = True
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dags", tuple(self.dags))
        if self.t < 1:
            raise InputError(f"stretch target must be >= 1, got {self.t}")
        ns = {d.n for d in self.dags}
        if len(ns) > 1:
            raise StructuralError("dags disagree on the graph's vertex count")
        if not self.steiner and any(d.n_steiner for d in self.dags):
            raise StructuralError("non-Steiner cover contains Steiner vertices")

    @property
    def g(self) -> int:
        return len(self.dags)

    @property
    def n(self) -> int | None:
        return self.dags[0].n if self.dags else None

    def replace_dag(self, i: int, dag: SteinerDag) -> "DagCover":
        dags = list(self.dags)
        dags[i] = dag
        return DagCover(tuple(dags), self.t, self.steiner, dict(self.provenance))

    def without_dag(self, i: int) -> "DagCover":
        dags = [d for j, d in enumerate(self.dags) if j != i]
        return DagCover(tuple(dags), self.t, self.steiner, dict(self.provenance))


class DagBuilder:
    """Accumulates edges and Steiner points for one dag under a vertex order.

    Each Steiner point is attached to an original vertex and is placed
    immediately before it in the final order; this is how gadget chains are
    merged into a single topological order.
    """

    def __init__(self, n: int, originals: Iterable[int] | None = None):
        self.n = n
        self.originals = None if originals is None else set(originals)
        self.edges: list[tuple[int, int, float]] = []
        self._attached: dict[int, list[int]] = {}
        self.n_steiner = 0

    def new_steiner(self, attach_to: int) -> int:
        sid = self.n + self.n_steiner
        self.n_steiner += 1
        self._attached.setdefault(attach_to, []).append(sid)
        return sid

    def add_edge(self, t: int, h: int, w: float) -> None:
        self.edges.append((t, h, w))

    def build(self, sigma_order: Sequence[int]) -> SteinerDag:
        order = []
        for v in sigma_order:
            order.extend(self._attached.get(v, ()))
            if self.originals is None or v in self.originals:
                order.append(v)
        return SteinerDag(
            self.n, self.edges, order, originals=self.originals, n_steiner=self.n_steiner
        )


# -- certification ------------------------------------------------------------

@dataclass
class CoverCertificate:
    t: float
    acyclic: list[bool]
    cycle_witnesses: list
    dominating: bool
    dominating_witness: dict | None
    stretch: bool
    achieved_stretch: float
    worst_pair: tuple[int, int] | None
    stretch_witness: dict | None
    mu: int
    steiner_count: int
    edge_counts: list[int]

    @property
    def all_acyclic(self) -> bool:
        return all(self.acyclic)

    @property
    def passed(self) -> bool:
        return self.all_acyclic and self.dominating and self.stretch

    def to_dict(self) -> dict:
        return {
            "format": FORMAT_VERSION,
            "passed": self.passed,
            "t": self.t,
            "acyclic": self.acyclic,
            "cycle_witnesses": [
                None if c is None else [_plain(v) for v in c] for c in self.cycle_witnesses
            ],
            "dominating": self.dominating,
            "dominating_witness": self.dominating_witness,
            "stretch": self.stretch,
            "achieved_stretch": _json_float(self.achieved_stretch),
            "worst_pair": None if self.worst_pair is None else list(self.worst_pair),
            "stretch_witness": self.stretch_witness,
            "mu": self.mu,
            "steiner_count": self.steiner_count,
            "edge_counts": self.edge_counts,
        }


def _plain(v):
    return int(v) if isinstance(v, (int, np.integer)) else v


def _json_float(x):
    return None if math.isinf(x) else float(x)


def _check_dims(gd: DistanceMatrix, cover: DagCover):
    if cover.dags and cover.n != gd.n:
        raise StructuralError(f"cover is over {cover.n} vertices but the graph has {gd.n}")


def _dag_matrices(cover: DagCover, threads: int = 1) -> list[np.ndarray]:
    if threads > 1 and len(cover.dags) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(SteinerDag.original_distances, cover.dags))
    return [d.original_distances() for d in cover.dags]


def verify_dominating(gd: DistanceMatrix, cover: DagCover, *, _mats=None):
    """``(passed, witness)``; the witness is the most violated (dag, u, v)."""
    _check_dims(gd, cover)
    mats = _mats if _mats is not None else _dag_matrices(cover)
    G = gd.dist
    worst = None
    for i, D in enumerate(mats):
        with np.errstate(invalid="ignore"):
            slack = D - G * (1 - REL_TOL)
        # inf - inf (unreachable in both) is nan: never a violation
        slack = np.where(np.isnan(slack), 0.0, slack)
        k = int(np.argmin(slack))
        if slack.flat[k] < 0:
            u, v = divmod(k, gd.n)
            if worst is None or slack.flat[k] < worst[0]:
                worst = (slack.flat[k], i, u, v, float(D[u, v]), float(G[u, v]))
    if worst is None:
        return True, None
    _, i, u, v, dd, dg = worst
    return False, {"dag": i, "u": u, "v": v, "dag_distance": dd, "graph_distance": dg}


def verify_stretch(gd: DistanceMatrix, cover: DagCover, t: float, *, _mats=None):
    """``(passed, achieved_stretch, worst_pair, witness)`` over reachable pairs."""
    if t < 1:
        raise InputError(f"stretch target must be >= 1, got {t}")
    _check_dims(gd, cover)
    pairs = gd.reachable_pairs()
    if len(pairs) == 0:
        return True, 1.0, None, None
    mats = _mats if _mats is not None else _dag_matrices(cover)
    G = gd.dist[pairs[:, 0], pairs[:, 1]]
    if mats:
        best = np.min([D[pairs[:, 0], pairs[:, 1]] for D in mats], axis=0)
    else:
        best = np.full(len(pairs), UNREACHABLE)
    ratio = best / G
    k = int(np.argmax(ratio))
    u, v = (int(x) for x in pairs[k])
    achieved = float(ratio[k])
    passed = bool(np.all(best <= t * G * (1 + REL_TOL)))
    witness = None
    if not passed:
        bad = np.nonzero(best > t * G * (1 + REL_TOL))[0][0]
        wu, wv = (int(x) for x in pairs[bad])
        witness = {
            "u": wu, "v": wv,
            "best_dag_distance": _json_float(float(best[bad])),
            "graph_distance": float(G[bad]),
        }
    return passed, achieved, (u, v), witness


def _steiner_label(i: int, dag: SteinerDag, v: int):
    return f"s:{i}:{v - dag.n}" if v >= dag.n else v


def count_extra_edges(g: WeightedDigraph, cover: DagCover) -> int:
    """Size of the union of dag edges that are not edges of ``g`` (weights ignored)."""
    extra = set()
    for i, dag in enumerate(cover.dags):
        for t, h, _ in dag.edges:
            if t >= dag.n or h >= dag.n:
                extra.add((_steiner_label(i, dag, t), _steiner_label(i, dag, h)))
            elif not g.has_edge(t, h):
                extra.add((t, h))
    return len(extra)


def certify(g: WeightedDigraph, cover: DagCover, *, gd: DistanceMatrix | None = None,
            threads: int = 1) -> CoverCertificate:
    """Run acyclicity, domination, stretch (against ``cover.t``) and sparsity checks."""
    if gd is None:
        gd = all_pairs_distances(g)
    _check_dims(gd, cover)
    acyclic, cycles = [], []
    for dag in cover.dags:
        ok, res = dag.acyclicity()
        acyclic.append(bool(ok))
        cycles.append(None if ok else res)
    mats = _dag_matrices(cover, threads)
    dom_ok, dom_w = verify_dominating(gd, cover, _mats=mats)
    st_ok, achieved, worst, st_w = verify_stretch(gd, cover, cover.t, _mats=mats)
    return CoverCertificate(
        t=cover.t,
        acyclic=acyclic,
        cycle_witnesses=cycles,
        dominating=dom_ok,
        dominating_witness=dom_w,
        stretch=st_ok,
        achieved_stretch=achieved,
        worst_pair=worst,
        stretch_witness=st_w,
        mu=count_extra_edges(g, cover),
        steiner_count=sum(d.n_steiner for d in cover.dags),
        edge_counts=[len(d.edges) for d in cover.dags],
    )


# -- witness replay (Dijkstra per dag, independent of the DP path) ------------

def replay_cycle(dag: SteinerDag, cycle) -> bool:
    """True when ``cycle`` is a closed walk made of the dag's edges."""
    pairs = dag.edge_pairs()
    return (
        cycle is not None
        and len(cycle) >= 3
        and cycle[0] == cycle[-1]
        and all((a, b) in pairs for a, b in zip(cycle, cycle[1:]))
    )


def replay_dominating(gd: DistanceMatrix, cover: DagCover, witness) -> bool:
    """True when the witness pair still underestimates the graph distance."""
    dag = cover.dags[witness["dag"]]
    d = dag.single_source(witness["u"])[witness["v"]]
    return d < gd[witness["u"], witness["v"]] * (1 - REL_TOL)


def replay_stretch(gd: DistanceMatrix, cover: DagCover, witness, t: float) -> bool:
    """True when no dag achieves stretch ``t`` on the witness pair."""
    u, v = witness["u"], witness["v"]
    best = min((dag.single_source(u)[v] for dag in cover.dags), default=UNREACHABLE)
    return best > t * gd[u, v] * (1 + REL_TOL)


# -- serialization ------------------------------------------------------------

def cover_to_dict(cover: DagCover) -> dict:
    n = cover.n if cover.n is not None else cover.provenance.get("graph_n", 0)
    dags = []
    for i, dag in enumerate(cover.dags):
        lab = lambda v, i=i, dag=dag: _steiner_label(i, dag, v)  # noqa: E731
        dags.append({
            "order": [lab(v) for v in dag.order],
            "steiner_vertices": [lab(v) for v in range(dag.n, dag.n + dag.n_steiner)],
            "edges": [[lab(t), lab(h), w] for t, h, w in dag.edges],
        })
    return {
        "format": FORMAT_VERSION,
        "graph_n": n,
        "t": cover.t,
        "steiner": cover.steiner,
        "dags": dags,
        "provenance": cover.provenance,
    }


def cover_to_json(cover: DagCover) -> str:
    return json.dumps(cover_to_dict(cover), separators=(",", ":")) + "\n"


def cover_from_dict(data: dict) -> DagCover:
    try:
        if data.get("format", FORMAT_VERSION) != FORMAT_VERSION:
            raise StructuralError(f"unsupported cover format {data.get('format')!r}")
        n = int(data["graph_n"])
        dags = []
        for i, dd in enumerate(data["dags"]):
            steiner = list(dd.get("steiner_vertices", []))
            local = {}
            for k, lab in enumerate(steiner):
                if lab != f"s:{i}:{k}":
                    raise StructuralError(f"dag {i}: Steiner label {lab!r} out of sequence")
                local[lab] = n + k

            def resolve(x, i=i, local=local):
                if isinstance(x, str):
                    if x not in local:
                        raise StructuralError(f"dag {i}: unknown vertex label {x!r}")
                    return local[x]
                if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < n:
                    raise StructuralError(f"dag {i}: invalid vertex reference {x!r}")
                return x

            order = [resolve(x) for x in dd["order"]]
            edges = [(resolve(a), resolve(b), float(w)) for a, b, w in dd["edges"]]
            originals = [v for v in order if v < n]
            dags.append(SteinerDag(n, edges, order, originals=originals, n_steiner=len(steiner)))
        return DagCover(tuple(dags), float(data["t"]), bool(data["steiner"]),
                        dict(data.get("provenance", {})))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, StructuralError):
            raise
        raise StructuralError(f"malformed cover JSON: {exc!r}") from None


def cover_from_json(text: str) -> DagCover:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"cover JSON does not parse: {exc}") from None
    return cover_from_dict(data)


def to_dot(dag: SteinerDag, index: int = 0) -> str:
    lines = [f"digraph D{index} {{", "  rankdir=LR;"]
    for v in dag.order:
        if v >= dag.n:
            lines.append(f'  "s:{index}:{v - dag.n}" [shape=point];')
        else:
            lines.append(f'  "{v}";')
    for t, h, w in dag.edges:
        a, b = _steiner_label(index, dag, t), _steiner_label(index, dag, h)
        lines.append(f'  "{a}" -> "{b}" [label="{w:g}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
