"""Maximum matchings on the node-split bipartite view of a directed graph.

Each node is split into an out-copy (left side) and an in-copy (right side);
every directed edge u->v becomes a bipartite edge between u's out-copy and
v's in-copy. A maximum matching of this bipartite graph defines a minimum
driver set: the nodes whose in-copy is unmatched. Different maximum matchings
yield different driver sets, so a seeded sampler over maximum matchings is
the basic source of randomness for all control statistics downstream.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass

from .graph import DirectedGraph
from .seeds import child_seeds

_INF = 1 << 30


@dataclass(frozen=True)
class Matching:
    """A matching on the node-split bipartite view.

    ``match_out[u]`` is the target matched to u's out-copy (or None);
    ``match_in[v]`` is the source matched to v's in-copy (or None);
    ``size`` is the number of matched edges.
    """

    match_out: tuple[int | None, ...]
    match_in: tuple[int | None, ...]
    size: int


@dataclass(frozen=True)
class DriverSet:
    """An ordered minimum driver set with its fraction of the network."""

    drivers: tuple[int, ...]
    n_d_fraction: float


def _hopcroft_karp(n: int, adj: list[list[int]], order: list[int]) -> tuple[list[int], list[int], int]:
    """Maximum bipartite matching; returns (match_l, match_r, size).

    ``adj[u]`` lists right-side partners of left vertex u; ``order`` fixes
    the sequence in which free left vertices start augmenting searches.
    """
    match_l = [-1] * n
    match_r = [-1] * n
    dist = [0] * n
    size = 0
    while True:
        queue = deque()
        for u in order:
            if match_l[u] < 0:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _INF
        found_free = False
        while queue:
            u = queue.popleft()
            du = dist[u]
            for v in adj[u]:
                w = match_r[v]
                if w < 0:
                    found_free = True
                elif dist[w] == _INF:
                    dist[w] = du + 1
                    queue.append(w)
        if not found_free:
            break
        ptr = [0] * n
        for root in order:
            if match_l[root] < 0 and _augment(root, adj, ptr, dist, match_l, match_r):
                size += 1
    return match_l, match_r, size


def _augment(root, adj, ptr, dist, match_l, match_r) -> bool:
    """Iterative shortest-path augmentation from one free left vertex."""
    stack = [root]
    parent: dict[int, tuple[int | None, int | None]] = {root: (None, None)}
    while stack:
        u = stack[-1]
        descended = False
        while ptr[u] < len(adj[u]):
            v = adj[u][ptr[u]]
            ptr[u] += 1
            w = match_r[v]
            if w < 0:
                # free right vertex: flip the whole chain on the stack
                cu: int | None = u
                cv: int | None = v
                while cu is not None:
                    match_l[cu] = cv
                    match_r[cv] = cu
                    cu, cv = parent[cu]
                return True
            if dist[w] == dist[u] + 1 and w not in parent:
                parent[w] = (u, v)
                stack.append(w)
                descended = True
                break
        if not descended:
            dist[u] = _INF
            stack.pop()
    return False


def maximum_matching(g: DirectedGraph, order_seed: int = 0) -> Matching:
    """One maximum matching, with tie-breaking shuffled by ``order_seed``.

    The matching size is an invariant of the graph; which maximum matching
    comes back depends on the seed, because both the adjacency lists and the
    order in which augmenting searches start are shuffled.
    """
    n = g.node_count
    rng = random.Random(order_seed)
    adj = [list(a) for a in g.out_adjacency]
    for a in adj:
        rng.shuffle(a)
    order = list(range(n))
    rng.shuffle(order)
    match_l, match_r, size = _hopcroft_karp(n, adj, order)
    return Matching(
        match_out=tuple(x if x >= 0 else None for x in match_l),
        match_in=tuple(x if x >= 0 else None for x in match_r),
        size=size,
    )


def driver_set(g: DirectedGraph, m: Matching, tie_seed: int = 0) -> DriverSet:
    """Driver set of a matching: the nodes with no matched in-edge.

    A perfect matching leaves no unmatched node, yet one control input is
    still required; in that case a single driver is chosen uniformly by
    ``tie_seed`` (its matched in-edge is conceptually broken downstream).
    """
    n = g.node_count
    drivers = [v for v in range(n) if m.match_in[v] is None]
    if not drivers and n > 0:
        drivers = [random.Random(tie_seed).randrange(n)]
    return DriverSet(drivers=tuple(drivers), n_d_fraction=len(drivers) / n if n else 0.0)


def sample_matching(
    g: DirectedGraph, seed: int, walk_length_factor: float = 2.0
) -> Matching:
    """Draw one maximum matching, randomized beyond the construction order.

    Runs :func:`maximum_matching` under a seed-derived shuffle, then applies
    ``ceil(walk_length_factor * L)`` exchange steps. Each step picks a random
    matched edge and, if possible, replaces it with an alternative edge that
    keeps the matching size: either the same source pointing at a currently
    unmatched target, or an unmatched source pointing at the same target.
    Chains of such exchanges move the unmatched (driver) positions along
    alternating paths, so repeated sampling explores the driver-set space.
    """
    if walk_length_factor < 0:
        raise ValueError("walk_length_factor must be >= 0")
    shuffle_seed, walk_seed = child_seeds(2, seed)
    base = maximum_matching(g, order_seed=shuffle_seed)
    n = g.node_count
    m = g.edge_count
    if base.size == 0 or m == 0:
        return base

    mo = [v if v is not None else -1 for v in base.match_out]
    mi = [u if u is not None else -1 for u in base.match_in]
    sources = [u for u in range(n) if mo[u] >= 0]
    pos = [-1] * n
    for i, u in enumerate(sources):
        pos[u] = i

    rng = random.Random(walk_seed)
    out_adj = g.out_adjacency
    in_adj = g.in_adjacency
    steps = math.ceil(walk_length_factor * m)
    for _ in range(steps):
        u = sources[rng.randrange(len(sources))]
        v = mo[u]
        candidates: list[tuple[int, int]] = []
        for v2 in out_adj[u]:
            if mi[v2] < 0:
                candidates.append((0, v2))
        for u2 in in_adj[v]:
            if mo[u2] < 0:
                candidates.append((1, u2))
        if not candidates:
            continue
        kind, x = candidates[rng.randrange(len(candidates))]
        if kind == 0:
            # retarget: u->v becomes u->x
            mi[v] = -1
            mo[u] = x
            mi[x] = u
        else:
            # resource: u->v becomes x->v
            mo[u] = -1
            mo[x] = v
            mi[v] = x
            i = pos[u]
            sources[i] = x
            pos[x] = i
            pos[u] = -1
    return Matching(
        match_out=tuple(x if x >= 0 else None for x in mo),
        match_in=tuple(x if x >= 0 else None for x in mi),
        size=base.size,
    )
