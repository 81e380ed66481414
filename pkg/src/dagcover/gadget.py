"""Vertex gadget: a Steiner chain routing every order-increasing pair through a center.

For members ``v_1..v_k`` (listed in the cover's vertex order) and center
``x`` the gadget has Steiner points ``u_1..u_k`` and edges

* ``u_i -> u_{i+1}`` of weight 0,
* ``u_i -> v_i`` of weight d(x, v_i) when x reaches v_i,
* ``v_i -> u_{i+1}`` of weight d(v_i, x) when v_i reaches x and i < k,

so that for i < j the gadget distance from v_i to v_j is exactly
d(v_i, x) + d(x, v_j).
"""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .cover import DagBuilder, SteinerDag
from .exceptions import InputError


@dataclass(frozen=True)
class VertexGadget:
    center: int
    members: tuple[int, ...]
    # edges over local ids: ("u", i) for chain points, ("v", i) for members
    down: tuple[tuple[int, float], ...]  # (i, weight) for u_i -> v_i
    up: tuple[tuple[int, float], ...]  # (i, weight) for v_i -> u_{i+1}
    chain: tuple[int, ...] = ()  # indices i with an edge u_i -> next kept chain point
    kept: tuple[int, ...] = ()  # chain point indices present (all unless pruned)

    @property
    def n_steiner(self) -> int:
        return len(self.kept)

    @property
    def n_edges(self) -> int:
        return len(self.down) + len(self.up) + len(self.chain)

    def emit(self, builder: DagBuilder) -> dict[int, int]:
        """Add this gadget to ``builder``; returns chain index -> Steiner id."""
        sid = {i: builder.new_steiner(self.members[i]) for i in self.kept}
        nxt = dict(zip(self.kept, self.kept[1:]))
        for i in self.chain:
            builder.add_edge(sid[i], sid[nxt[i]], 0.0)
        for i, w in self.down:
            builder.add_edge(sid[i], self.members[i], w)
        for i, w in self.up:
            builder.add_edge(self.members[i], sid[_up_target(self, i)], w)
        return sid

    def to_dag(self, n: int) -> SteinerDag:
        """Standalone dag over the members (Steiner ids start at ``n``)."""
        b = DagBuilder(n, originals=self.members)
        self.emit(b)
        return b.build(self.members)


def _up_target(g: VertexGadget, i: int) -> int:
    # first kept chain point after position i
    for k in g.kept:
        if k > i:
            return k
    raise AssertionError("up edge without a later chain point")


def build_vertex_gadget(
    dist_to_x: Sequence[float],
    dist_from_x: Sequence[float],
    members: Sequence[int],
    x: int,
    *,
    prune: bool = False,
) -> VertexGadget:
    """Gadget for center ``x`` over ``members`` (already in cover order).

    ``dist_to_x[v]`` is d(v, x) and ``dist_from_x[v]`` is d(x, v), with
    ``math.inf`` marking unreachability. ``prune=True`` drops chain points
    with no member edge, which keeps all through-center distances intact.
    """
    members = tuple(int(v) for v in members)
    if not members:
        raise InputError("gadget needs at least one member")
    if len(set(members)) != len(members):
        raise InputError("gadget members must be distinct")
    k = len(members)
    down, up = [], []
    for i, v in enumerate(members):
        try:
            fx, tx = float(dist_from_x[v]), float(dist_to_x[v])
        except (IndexError, KeyError, TypeError):
            raise InputError(f"member {v} missing from the distance vectors") from None
        if math.isnan(fx) or math.isnan(tx):
            raise InputError(f"member {v} has an undefined distance")
        if not math.isinf(fx):
            down.append((i, fx))
        if i < k - 1 and not math.isinf(tx):
            up.append((i, tx))
    kept = tuple(range(k))
    if prune:
        has_down = {i for i, _ in down}
        has_in = {i + 1 for i, _ in up}
        kept = tuple(i for i in range(k) if i in has_down or i in has_in)
        # up edges must still land on a kept point
        if not kept:
            return VertexGadget(x, members, (), (), (), ())
    chain = tuple(kept[:-1])
    if prune and up:
        up = [(i, w) for i, w in up if any(j > i for j in kept)]
    return VertexGadget(x, members, tuple(down), tuple(up), chain, kept)
