"""Rotation systems and the Euler-formula planarity check."""
from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from ..exceptions import ParseError, StructuralError
from ..graph import WeightedDigraph, weakly_connected_components


@dataclass(frozen=True)
class PlanarEmbedding:
    """Per-vertex cyclic order of undirected neighbours."""

    rotation: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rotation", tuple(tuple(int(x) for x in r) for r in self.rotation))

    @property
    def n(self) -> int:
        return len(self.rotation)


@dataclass
class EmbeddingReport:
    passed: bool
    faces: int
    failed_component: frozenset | None = None
    detail: str = ""

    def __bool__(self):
        return self.passed


def count_faces(emb: PlanarEmbedding) -> list[list[tuple[int, int]]]:
    """Trace the faces of the rotation system; each face is a cyclic dart list."""
    pos = [{u: i for i, u in enumerate(r)} for r in emb.rotation]
    seen = set()
    faces = []
    for u, r in enumerate(emb.rotation):
        for v in r:
            if (u, v) in seen:
                continue
            face = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                face.append((a, b))
                rv = emb.rotation[b]
                nxt = rv[(pos[b][a] - 1) % len(rv)]
                a, b = b, nxt
            faces.append(face)
    return faces


def validate_embedding(g: WeightedDigraph, emb: PlanarEmbedding) -> EmbeddingReport:
    """Check the rotation system matches ``g`` and satisfies Euler's formula per component."""
    if emb.n != g.n:
        raise StructuralError(f"embedding has {emb.n} vertices, graph has {g.n}")
    nbrs = g.undirected_neighbors()
    for v, r in enumerate(emb.rotation):
        if len(set(r)) != len(r) or set(r) != nbrs[v]:
            raise StructuralError(f"rotation at vertex {v} does not list its neighbours exactly")
    faces = count_faces(emb)
    comp_of = {}
    comps = weakly_connected_components(g.n, g.edge_pairs())
    for i, c in enumerate(comps):
        for v in c:
            comp_of[v] = i
    face_count = [0] * len(comps)
    for f in faces:
        face_count[comp_of[f[0][0]]] += 1
    total = 0
    for i, c in enumerate(comps):
        nv = len(c)
        ne = sum(len(nbrs[v]) for v in c) // 2
        nf = face_count[i] if ne else 1
        total += nf
        if nv - ne + nf != 2:
            return EmbeddingReport(False, total, c, f"V - E + F = {nv - ne + nf} != 2")
    return EmbeddingReport(True, total)


def embed(g: WeightedDigraph) -> PlanarEmbedding:
    """Compute a rotation system for a planar digraph (networkx planarity test)."""
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from((u, v) for u, v, _ in g.edges)
    ok, emb = nx.check_planarity(h)
    if not ok:
        raise StructuralError("graph is not planar")
    return PlanarEmbedding(tuple(tuple(emb.neighbors_cw_order(v)) if h.degree(v) else ()
                                 for v in range(g.n)))


def format_embedding(emb: PlanarEmbedding) -> str:
    return "".join(f"{v}: {' '.join(map(str, r))}\n" for v, r in enumerate(emb.rotation))


def parse_embedding(text: str, source: str = "<string>") -> PlanarEmbedding:
    rot: dict[int, tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, rest = line.partition(":")
        try:
            if not sep:
                raise ValueError("expected 'v: <neighbours>'")
            v = int(head)
            if v in rot:
                raise ValueError(f"vertex {v} listed twice")
            rot[v] = tuple(int(x) for x in rest.split())
        except ValueError as exc:
            raise ParseError(str(exc), source, lineno) from None
    if sorted(rot) != list(range(len(rot))):
        raise ParseError("vertex lines must cover 0..n-1", source)
    return PlanarEmbedding(tuple(rot[v] for v in range(len(rot))))
