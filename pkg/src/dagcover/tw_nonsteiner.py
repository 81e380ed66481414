"""Exact non-Steiner covers with O(log n) dags via antichain codewords."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .cover import DagCover, SteinerDag
from .decomposition import TreeDecomposition
from .exceptions import InputError
from .graph import DistanceMatrix, WeightedDigraph, all_pairs_distances
from .tw_steiner import SeparatorNode, separator_tree


def field_bits(n: int) -> int:
    """Bits needed to write any of 0..n."""
    return max(1, math.ceil(math.log2(n + 1)))


def dag_count(n: int) -> int:
    return 2 * field_bits(n)


@dataclass(frozen=True)
class CodewordFamily:
    length: int
    words: tuple[tuple[int, ...], ...]

    def is_antichain(self) -> bool:
        for a in range(len(self.words)):
            for b in range(a + 1, len(self.words)):
                wa, wb = self.words[a], self.words[b]
                if not (any(x < y for x, y in zip(wa, wb)) and any(x > y for x, y in zip(wa, wb))):
                    return False
        return True

    def as_strings(self) -> list[str]:
        return ["".join(map(str, w)) for w in self.words]


def make_codewords(count: int, n: int) -> CodewordFamily:
    """Word i (1-based) is binary(i - 1) followed by binary(n - (i - 1)), MSB first."""
    if count < 0 or count > n:
        raise InputError(f"need 0 <= count <= n, got count={count}, n={n}")
    bits = field_bits(n)
    words = []
    for i in range(1, count + 1):
        text = format(i - 1, f"0{bits}b") + format(n - (i - 1), f"0{bits}b")
        words.append(tuple(int(c) for c in text))
    return CodewordFamily(2 * bits, tuple(words))


def build_tw_nonsteiner_cover(
    g: WeightedDigraph,
    td: TreeDecomposition,
    *,
    gd: DistanceMatrix | None = None,
    root: SeparatorNode | None = None,
) -> DagCover:
    """Cover with 2*ceil(log2(n+1)) dags over V, preserving distances exactly.

    Every vertex v carries codeword v+1 of :func:`make_codewords` and joins
    each separator bag above it in the recursion: in dag i it points to the
    bag vertex when its bit i is 1, and is pointed to otherwise. Two vertices
    sharing a home bag are joined from the 1-bit end to the 0-bit end.
    Added edges carry global shortest-path weights; unreachable pairs get no
    edge.
    """
    n = g.n
    n_dags = dag_count(n) if n else 2
    if gd is None:
        gd = all_pairs_distances(g)
    if root is None:
        root = separator_tree(g, td)
    D = gd.dist
    words = make_codewords(n, n).words if n else ()
    edges: list[dict[tuple[int, int], float]] = [dict() for _ in range(n_dags)]

    def add(i, a, b):
        w = D[a, b]
        if math.isfinite(w):
            edges[i][(a, b)] = float(w)

    depth = [0] * n
    if root is not None:
        stack = [(root, 0, ())]
        while stack:
            node, d, above = stack.pop()
            for x in node.bag:
                depth[x] = d
                for z in above:
                    for i, bit in enumerate(words[x]):
                        if bit:
                            add(i, x, z)
                        else:
                            add(i, z, x)
                for z in node.bag:
                    if z != x:
                        for i, (bx, bz) in enumerate(zip(words[x], words[z])):
                            if bx == 1 and bz == 0:
                                add(i, x, z)
            for child in node.children:
                stack.append((child, d + 1, above + node.bag))

    dags = []
    for i in range(n_dags):
        ones = sorted((v for v in range(n) if words[v][i]), key=lambda v: (-depth[v], v))
        zeros = sorted((v for v in range(n) if not words[v][i]), key=lambda v: (depth[v], v))
        es = [(a, b, w) for (a, b), w in sorted(edges[i].items())]
        dags.append(SteinerDag(n, es, ones + zeros))
    return DagCover(
        tuple(dags),
        t=1.0,
        steiner=False,
        provenance={"construction": "tw-nonsteiner", "width": td.width, "graph_n": n},
    )


def tw_nonsteiner_edge_budget(n: int, width: int) -> int:
    """Total extra-edge bound 2 n (w + 1) ceil(log2(n + 1))^2."""
    return 2 * n * (width + 1) * field_bits(n) ** 2
