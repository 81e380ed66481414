import math
import random

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dagcover.graph import WeightedDigraph

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def bellman_ford(g: WeightedDigraph, source: int) -> list[float]:
    """Independent single-source oracle (no heap, no scipy)."""
    dist = [math.inf] * g.n
    dist[source] = 0.0
    for _ in range(max(1, g.n - 1)):
        changed = False
        for u, v, w in g.edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            break
    return dist


def nx_dag_distance(dag, u, v) -> float:
    """Shortest u -> v distance in a SteinerDag, computed by networkx."""
    h = nx.DiGraph()
    h.add_nodes_from(dag.vertex_list())
    for a, b, w in dag.edges:
        if not h.has_edge(a, b) or h[a][b]["weight"] > w:
            h.add_edge(a, b, weight=w)
    try:
        return nx.dijkstra_path_length(h, u, v)
    except nx.NetworkXNoPath:
        return math.inf


def random_digraph(rng: random.Random, n: int, p: float = 0.3, max_weight: int = 9) -> WeightedDigraph:
    edges = [(u, v, float(rng.randint(1, max_weight)))
             for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return WeightedDigraph(n, edges)


@st.composite
def digraphs(draw, min_n=1, max_n=10, integer_weights=True):
    n = draw(st.integers(min_n, max_n))
    if n < 2:
        return WeightedDigraph(n, [])
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=min(len(pairs), 3 * n), unique=True))
    if integer_weights:
        ws = draw(st.lists(st.integers(1, 20), min_size=len(chosen), max_size=len(chosen)))
    else:
        ws = draw(st.lists(st.floats(0.1, 100, allow_nan=False), min_size=len(chosen),
                           max_size=len(chosen)))
    return WeightedDigraph(n, [(u, v, float(w)) for (u, v), w in zip(chosen, ws)])


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}")
