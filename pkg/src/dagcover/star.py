"""Bidirected stars and the dag-count lower bound for non-Steiner covers.

Vertex 0 is the root; vertices 1..n-1 are leaves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from .cover import DagCover, certify, count_extra_edges
from .decomposition import TreeDecomposition
from .exceptions import InputError, PreconditionError
from .graph import WeightedDigraph

ROOT = 0


def make_bidirected_star(n: int) -> WeightedDigraph:
    """Unit-weight star on ``n`` vertices with both edge directions to every leaf."""
    if n < 2:
        raise InputError(f"a bidirected star needs n >= 2, got {n}")
    edges = []
    for leaf in range(1, n):
        edges.append((ROOT, leaf, 1.0))
        edges.append((leaf, ROOT, 1.0))
    return WeightedDigraph(n, edges)


def star_decomposition(n: int) -> TreeDecomposition:
    """Width-1 decomposition: a hub bag {root} with one {root, leaf} bag per leaf."""
    bags = [frozenset({ROOT})] + [frozenset({ROOT, leaf}) for leaf in range(1, n)]
    return TreeDecomposition(tuple(bags), tuple((0, i) for i in range(1, n)))


def star_lower_bound(n: int, mu: int) -> float:
    """log2((n-1)^2 / (2 mu + n - 1) + 1)."""
    if n < 2 or mu < 0:
        raise InputError(f"need n >= 2 and mu >= 0, got n={n}, mu={mu}")
    return math.log2((n - 1) ** 2 / (2 * mu + n - 1) + 1)


@dataclass
class StarCoverAnalysis:
    n: int
    g: int
    mu: int
    codewords: dict[int, str]
    q_pairs: list[tuple[int, int]]
    bound: float
    consistent: bool
    violations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "g": self.g,
            "mu": self.mu,
            "bound": self.bound,
            "q_size": len(self.q_pairs),
            "q_lower_bound": math.comb(self.n - 1, 2) - self.mu,
            "codewords": {str(k): v for k, v in self.codewords.items()},
            "verdict": "CONSISTENT" if self.consistent else "COUNTEREXAMPLE",
            "violations": self.violations,
        }


def analyze_star_cover(n: int, cover: DagCover, t: float) -> StarCoverAnalysis:
    """Check a certified non-Steiner cover of the n-star against the lower bound.

    Raises :class:`PreconditionError` when the cover is Steiner, ``t >= 2``,
    or the cover does not certify at stretch ``t``.
    """
    if t >= 2:
        raise PreconditionError(f"the bound needs stretch t < 2, got {t}")
    if cover.steiner or any(d.n_steiner for d in cover.dags):
        raise PreconditionError("the bound applies to non-Steiner covers only")
    star = make_bidirected_star(n)
    if cover.n is not None and cover.n != n:
        raise PreconditionError(f"cover is over {cover.n} vertices, star has {n}")
    checked = DagCover(cover.dags, t, cover.steiner, cover.provenance)
    cert = certify(star, checked)
    if not cert.passed:
        raise PreconditionError("cover does not certify at the requested stretch")

    leaves = range(1, n)
    edge_sets = [d.edge_pairs() for d in cover.dags]
    union = set().union(*edge_sets) if edge_sets else set()
    codes = {
        v: "".join("1" if (v, ROOT) in es else "0" for es in edge_sets) for v in leaves
    }
    q = [(a, b) for a, b in combinations(leaves, 2) if (a, b) not in union and (b, a) not in union]
    mu = count_extra_edges(star, cover)
    bound = star_lower_bound(n, mu)
    violations = []
    for a, b in q:
        if codes[a] == codes[b]:
            violations.append(f"leaves {a} and {b} share codeword {codes[a]}")
        for s, e in ((a, b), (b, a)):
            if not any((s, ROOT) in es and (ROOT, e) in es for es in edge_sets):
                violations.append(f"no dag holds the path ({s}, root, {e})")
    if len(q) < math.comb(n - 1, 2) - mu:
        violations.append(f"|Q| = {len(q)} below C(n-1, 2) - mu")
    if cover.g < bound:
        violations.append(f"g = {cover.g} below the bound {bound:.6f}")
    return StarCoverAnalysis(n, cover.g, mu, codes, q, bound, not violations, violations)
