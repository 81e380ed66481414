"""Tree and path decompositions: validation, min-fill construction, separator bags."""
from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field

from .exceptions import StructuralError
from .graph import WeightedDigraph, weakly_connected_components


@dataclass(frozen=True, repr=False)
class TreeDecomposition:
    bags: tuple[frozenset, ...]
    tree_edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(
            self, "tree_edges", tuple((int(a), int(b)) for a, b in self.tree_edges)
        )

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def __repr__(self):
        return f"TreeDecomposition(<{len(self.bags)} bags, width {self.width}>)"

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            if not (0 <= a < len(self.bags) and 0 <= b < len(self.bags)):
                raise StructuralError(f"tree edge ({a}, {b}) references a missing bag")
            adj[a].append(b)
            adj[b].append(a)
        for lst in adj:
            lst.sort()
        return adj


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def as_tree_decomposition(self) -> TreeDecomposition:
        return TreeDecomposition(self.bags, tuple((i, i + 1) for i in range(len(self.bags) - 1)))


@dataclass
class ValidityReport:
    coverage: bool = True
    coverage_witness: object = None
    edge_coverage: bool = True
    edge_witness: object = None
    connected_subtrees: bool = True
    subtree_witness: object = None
    is_tree: bool = True
    contiguous_intervals: bool | None = None
    interval_witness: object = None
    extras: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return (
            self.coverage
            and self.edge_coverage
            and self.connected_subtrees
            and self.is_tree
            and self.contiguous_intervals is not False
        )

    def __bool__(self):
        return self.valid


def validate_decomposition(g, td: TreeDecomposition | PathDecomposition) -> ValidityReport:
    """Check the three decomposition properties against ``g``.

    ``g`` is anything exposing ``vertex_ids()`` and ``edge_pairs()``
    (a :class:`WeightedDigraph` or a cover dag). A :class:`PathDecomposition`
    is additionally checked for contiguous bag intervals.
    """
    is_path = isinstance(td, PathDecomposition)
    tree = td.as_tree_decomposition() if is_path else td
    adj = tree.adjacency()
    report = ValidityReport()
    nb = len(tree.bags)

    # tree shape: connected with nb - 1 edges
    if nb and (len(tree.tree_edges) != nb - 1 or len(_reach(adj, 0)) != nb):
        report.is_tree = False

    occurs: dict = {}
    for i, bag in enumerate(tree.bags):
        for v in bag:
            occurs.setdefault(v, []).append(i)

    for v in g.vertex_ids():
        if v not in occurs:
            report.coverage = False
            report.coverage_witness = v
            break

    bagsets = tree.bags
    for a, b in sorted(g.edge_pairs(), key=_sortkey):
        if not any(b in bagsets[i] for i in occurs.get(a, ())):
            report.edge_coverage = False
            report.edge_witness = (a, b)
            break

    for v in sorted(occurs, key=_sortkey):
        idx = occurs[v]
        allowed = set(idx)
        if len(_reach(adj, idx[0], allowed)) != len(idx):
            report.connected_subtrees = False
            report.subtree_witness = v
            break

    if is_path:
        report.contiguous_intervals = True
        for v in sorted(occurs, key=_sortkey):
            idx = occurs[v]
            if idx[-1] - idx[0] + 1 != len(idx):
                report.contiguous_intervals = False
                report.interval_witness = v
                break
    return report


def _sortkey(x):
    # ints and namespaced strings mixed in cover dags
    if isinstance(x, tuple):
        return tuple(_sortkey(y) for y in x)
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


def _reach(adj, start, allowed=None):
    seen = {start}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        for b in adj[a]:
            if b not in seen and (allowed is None or b in allowed):
                seen.add(b)
                queue.append(b)
    return seen


def heuristic_tree_decomposition(g: WeightedDigraph) -> TreeDecomposition:
    """Min-fill elimination on the underlying undirected graph.

    Ties break toward the smallest vertex id. Each eliminated vertex yields
    the bag {v} ∪ N(v), hung below the bag of its earliest-eliminated
    remaining neighbour; elimination-forest roots are chained together.
    """
    n = g.n
    if n == 0:
        return TreeDecomposition((), ())
    nbrs = g.undirected_neighbors()
    alive = set(range(n))
    bag_of: dict[int, int] = {}
    bags: list[frozenset] = []
    step_of = {}
    parent_vertex: dict[int, int | None] = {}

    def fill(v):
        ns = list(nbrs[v])
        missing = 0
        for i, a in enumerate(ns):
            na = nbrs[a]
            for b in ns[i + 1:]:
                if b not in na:
                    missing += 1
        return missing

    fills = {v: fill(v) for v in alive}
    step = 0
    while alive:
        v = min(alive, key=lambda x: (fills[x], x))
        ns = nbrs[v]
        bags.append(frozenset(ns | {v}))
        bag_of[v] = len(bags) - 1
        step_of[v] = step
        step += 1
        nl = list(ns)
        for i, a in enumerate(nl):
            for b in nl[i + 1:]:
                nbrs[a].add(b)
                nbrs[b].add(a)
        parent_vertex[v] = nl
        for a in nl:
            nbrs[a].discard(v)
        alive.discard(v)
        del fills[v]
        touched = set(nl)
        for a in nl:
            touched |= nbrs[a]
        for a in touched:
            fills[a] = fill(a)

    edges = []
    roots = []
    for v, later in parent_vertex.items():
        if later:
            p = min(later, key=step_of.__getitem__)
            edges.append((bag_of[v], bag_of[p]))
        else:
            roots.append(bag_of[v])
    roots.sort()
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return TreeDecomposition(tuple(bags), tuple(sorted(edges)))


def restrict_components(g: WeightedDigraph, active: Iterable[int], bag: Iterable[int]) -> list[frozenset]:
    """Weakly connected components of G[active \\ bag], ordered by smallest id."""
    active = frozenset(active)
    bag = frozenset(bag)
    if not bag <= active:
        raise StructuralError("separator bag must be a subset of the active set")
    rest = active - bag
    if not rest:
        return []
    pairs = ((u, v) for u in rest for v, _ in g.successors(u) if v in rest)
    return weakly_connected_components(g.n, pairs, vertices=sorted(rest))


def find_balanced_bag(td: TreeDecomposition, active: Iterable[int]) -> int:
    """Index of a bag whose removal splits ``active`` into halves or less.

    Walks the decomposition tree (restricted to bags meeting ``active``)
    toward any side holding more than ``|active|/2`` active vertices outside
    the current bag; at most one such side exists, and the walk never
    backtracks.
    """
    active = frozenset(active)
    if not active:
        raise StructuralError("active set is empty")
    adj = td.adjacency()
    meets = [bool(b & active) for b in td.bags]
    if not any(meets):
        raise StructuralError("no bag contains an active vertex")
    nodes = _spanning_subtree(adj, meets)
    half = len(active) / 2
    current = min(nodes)
    visited = set()
    while True:
        visited.add(current)
        local = td.bags[current] & active
        heavy = None
        for nb in adj[current]:
            if nb not in nodes:
                continue
            side = set()
            for i in _reach(adj, nb, nodes - {current}):
                side |= td.bags[i] & active
            if len(side - local) > half:
                heavy = nb
                break
        if heavy is None:
            return current
        if heavy in visited:
            raise StructuralError("decomposition is not valid for the active set")
        current = heavy


def _spanning_subtree(adj, keep) -> set[int]:
    """Smallest subtree containing every bag flagged in ``keep``."""
    nodes = set(range(len(adj)))
    deg = {i: len(adj[i]) for i in nodes}
    leaves = deque(i for i in nodes if deg[i] <= 1 and not keep[i])
    while leaves:
        i = leaves.popleft()
        if i not in nodes:
            continue
        nodes.discard(i)
        for j in adj[i]:
            if j in nodes:
                deg[j] -= 1
                if deg[j] <= 1 and not keep[j]:
                    leaves.append(j)
    return nodes


def check_balanced(g: WeightedDigraph, active, bag) -> list[frozenset]:
    """Components of active minus bag, raising if any exceeds half of active."""
    comps = restrict_components(g, active, bag)
    limit = len(active) / 2
    for c in comps:
        if len(c) > limit:
            raise StructuralError(
                f"separator leaves a component of {len(c)} > {limit} vertices"
            )
    return comps


# -- PACE .td format ---------------------------------------------------------

def format_td(td: TreeDecomposition | PathDecomposition, n: int) -> str:
    tree = td.as_tree_decomposition() if isinstance(td, PathDecomposition) else td
    lines = [f"s td {len(tree.bags)} {tree.width + 1} {n}"]
    for i, bag in enumerate(tree.bags, start=1):
        lines.append(" ".join(["b", str(i)] + [str(v + 1) for v in sorted(bag)]))
    for a, b in tree.tree_edges:
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def parse_td(text: str, source: str = "<string>") -> tuple[TreeDecomposition, int]:
    """Parse PACE-2017 ``.td`` text; returns the decomposition and vertex count."""
    from .exceptions import ParseError

    header = None
    bags: dict[int, frozenset] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        try:
            if parts[0] == "s":
                if parts[1] != "td" or len(parts) != 5:
                    raise ValueError("expected 's td <bags> <width+1> <n>'")
                header = tuple(int(x) for x in parts[2:])
            elif parts[0] == "b":
                idx = int(parts[1]) - 1
                verts = [int(x) - 1 for x in parts[2:]]
                if idx in bags:
                    raise ValueError(f"duplicate bag {idx + 1}")
                bags[idx] = frozenset(verts)
            else:
                if len(parts) != 2:
                    raise ValueError("expected a tree edge '<i> <j>'")
                edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
        except (ValueError, IndexError) as exc:
            raise ParseError(str(exc), source, lineno) from None
    if header is None:
        raise ParseError("missing 's td' header line", source)
    nbags, _, n = header
    if sorted(bags) != list(range(nbags)):
        raise ParseError(f"expected bags 1..{nbags}", source)
    for bag in bags.values():
        if any(not 0 <= v < n for v in bag):
            raise ParseError("bag references a vertex outside 1..n", source)
    return TreeDecomposition(tuple(bags[i] for i in range(nbags)), tuple(edges)), n
