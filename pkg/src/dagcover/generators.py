"""Seeded instance generators: stars, partial k-trees, grids, directed cycles."""
from __future__ import annotations

import random

from .decomposition import TreeDecomposition
from .exceptions import InputError
from .graph import WeightedDigraph
from .planar.embedding import PlanarEmbedding
from .star import make_bidirected_star, star_decomposition


def _weight(rng: random.Random, max_weight: int) -> float:
    return float(rng.randint(1, max_weight))


def random_partial_ktree(n: int, k: int, seed: int = 0, *, keep: float = 0.8,
                         max_weight: int = 10) -> tuple[WeightedDigraph, TreeDecomposition]:
    """Random subgraph of a random k-tree with random orientations and integer weights.

    Each kept skeleton edge becomes one arc (either direction) or both arcs,
    each with its own weight in ``[1, max_weight]``. Returns the digraph and
    the k-tree's natural width-k decomposition.
    """
    if k < 1 or n < 1:
        raise InputError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    rng = random.Random(seed)
    first = list(range(min(n, k + 1)))
    bags = [frozenset(first)]
    tree_edges = []
    skeleton = {(a, b) for i, a in enumerate(first) for b in first[i + 1:]}
    for v in range(len(first), n):
        host = rng.randrange(len(bags))
        clique = rng.sample(sorted(bags[host]), k)
        bags.append(frozenset(clique) | {v})
        tree_edges.append((host, len(bags) - 1))
        skeleton.update((min(c, v), max(c, v)) for c in clique)
    edges = []
    for a, b in sorted(skeleton):
        if rng.random() >= keep:
            continue
        mode = rng.randrange(3)
        if mode in (0, 2):
            edges.append((a, b, _weight(rng, max_weight)))
        if mode in (1, 2):
            edges.append((b, a, _weight(rng, max_weight)))
    return WeightedDigraph(n, edges), TreeDecomposition(tuple(bags), tuple(tree_edges))


def grid(rows: int, cols: int, seed: int = 0, *, max_weight: int = 10,
         unit: bool = False) -> tuple[WeightedDigraph, PlanarEmbedding]:
    """Bidirected grid with independent arc weights and its straight-line rotation system.

    Vertex (r, c) has id ``r * cols + c``; rotations list neighbours
    counter-clockwise starting from the right-hand one.
    """
    if rows < 1 or cols < 1:
        raise InputError(f"grid needs positive dimensions, got {rows}x{cols}")
    rng = random.Random(seed)
    vid = lambda r, c: r * cols + c  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            for dr, dc in ((0, 1), (1, 0)):
                rr, cc = r + dr, c + dc
                if rr < rows and cc < cols:
                    a, b = vid(r, c), vid(rr, cc)
                    edges.append((a, b, 1.0 if unit else _weight(rng, max_weight)))
                    edges.append((b, a, 1.0 if unit else _weight(rng, max_weight)))
    rotation = []
    for r in range(rows):
        for c in range(cols):
            # right, up (row - 1), left, down: counter-clockwise in the plane
            around = [(r, c + 1), (r - 1, c), (r, c - 1), (r + 1, c)]
            rotation.append(tuple(vid(a, b) for a, b in around if 0 <= a < rows and 0 <= b < cols))
    return WeightedDigraph(rows * cols, edges), PlanarEmbedding(tuple(rotation))


def dicycle(n: int, seed: int | None = None, *, max_weight: int = 10) -> tuple[WeightedDigraph, PlanarEmbedding]:
    """Directed cycle 0 -> 1 -> ... -> n-1 -> 0 (unit weights unless seeded)."""
    if n < 2:
        raise InputError(f"a directed cycle needs n >= 2, got {n}")
    rng = None if seed is None else random.Random(seed)
    w = (lambda: 1.0) if rng is None else (lambda: _weight(rng, max_weight))
    edges = [(i, (i + 1) % n, w()) for i in range(n)]
    if n == 2:
        rotation = ((1,), (0,))
    else:
        rotation = tuple(((i + 1) % n, (i - 1) % n) for i in range(n))
    return WeightedDigraph(n, edges), PlanarEmbedding(rotation)


def generate(kind: str, seed: int = 0, **params):
    """Dispatch by kind; returns a dict with ``graph`` and optional ``td`` / ``embedding``."""
    if kind == "star":
        n = params["n"]
        return {"graph": make_bidirected_star(n), "td": star_decomposition(n)}
    if kind == "ktree":
        g, td = random_partial_ktree(params["n"], params["k"], seed,
                                     max_weight=params.get("max_weight", 10))
        return {"graph": g, "td": td}
    if kind == "grid":
        g, emb = grid(params["rows"], params["cols"], seed,
                      max_weight=params.get("max_weight", 10))
        return {"graph": g, "embedding": emb}
    if kind == "dicycle":
        g, emb = dicycle(params["n"], params.get("weight_seed"))
        return {"graph": g, "embedding": emb}
    raise InputError(f"unknown generator kind {kind!r}")
