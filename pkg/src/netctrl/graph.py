"""Directed graph container, file ingestion, random generators, and summary stats.

Graphs here are simple directed graphs: no self-loops, no parallel edges,
nodes numbered 0..N-1. Edges are canonically sorted so that every derived
structure (adjacency, serialization, iteration order) is deterministic.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass

import numpy as np


class ParseError(ValueError):
    """An input file could not be parsed into a directed graph."""


class GenerationError(RuntimeError):
    """A random generator could not place the requested number of edges."""


_NODES_COMMENT = re.compile(r"#\s*nodes\s*=\s*(\d+)\s*$")


@dataclass(frozen=True)
class DirectedGraph:
    """Immutable simple directed graph.

    Attributes:
        node_count: number of nodes; ids run 0..node_count-1.
        edges: (source, target) pairs, sorted ascending.
        out_adjacency: per-node tuple of successors, in edge-sorted order.
        in_adjacency: per-node tuple of predecessors, in edge-sorted order.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]
    out_adjacency: tuple[tuple[int, ...], ...]
    in_adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, node_count: int, edges) -> "DirectedGraph":
        """Build a graph from an edge iterable.

        Duplicate edges collapse silently; self-loops and out-of-range ids
        raise ``ValueError``.
        """
        if node_count < 0:
            raise ValueError("node_count must be >= 0")
        unique = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop {u}->{v} rejected")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u},{v}) outside 0..{node_count - 1}")
            unique.add((u, v))
        ordered = sorted(unique)
        out_adj = [[] for _ in range(node_count)]
        in_adj = [[] for _ in range(node_count)]
        for u, v in ordered:
            out_adj[u].append(v)
            in_adj[v].append(u)
        return cls(
            node_count=node_count,
            edges=tuple(ordered),
            out_adjacency=tuple(tuple(a) for a in out_adj),
            in_adjacency=tuple(tuple(a) for a in in_adj),
        )

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def out_degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.out_adjacency)

    def in_degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.in_adjacency)

    def to_edge_list_text(self, index_base: int = 0) -> str:
        """Serialize as edge-list text.

        A ``# nodes=N`` comment records the node count so that trailing
        isolated nodes survive a round trip through :func:`load_edge_list`.
        """
        lines = [f"# nodes={self.node_count}"]
        for u, v in self.edges:
            lines.append(f"{u + index_base} {v + index_base}")
        return "\n".join(lines) + "\n"


def load_edge_list(text: str, index_base: int = 0) -> DirectedGraph:
    """Parse whitespace-separated ``u v`` edge lines into a graph.

    Blank lines and ``#`` comments are skipped. ``index_base`` (0 or 1) is
    subtracted from every id. The node count is 1 + max id unless a
    ``# nodes=N`` comment declares a larger count. Self-loops and malformed
    lines raise :class:`ParseError` naming the offending line.
    """
    if index_base not in (0, 1):
        raise ValueError("index_base must be 0 or 1")
    declared = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _NODES_COMMENT.match(line)
            if m:
                declared = int(m.group(1))
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'u v', got {len(parts)} tokens")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: non-integer node id") from exc
        u -= index_base
        v -= index_base
        if u < 0 or v < 0:
            raise ParseError(f"line {lineno}: node id below index base {index_base}")
        if u == v:
            raise ParseError(f"line {lineno}: self-loop {raw.strip()!r} rejected")
        edges.append((u, v))
    n = 1 + max(max(u, v) for u, v in edges) if edges else 0
    if declared is not None:
        if declared < n:
            raise ParseError(f"declared node count {declared} below 1 + max id {n - 1}")
        n = declared
    return DirectedGraph.from_edges(n, edges)


def load_pajek(text: str) -> DirectedGraph:
    """Parse the directed subset of the Pajek .net format.

    Requires a ``*Vertices N`` header and reads 1-based arcs from ``*Arcs``
    sections. ``*Edges`` (undirected) input is rejected; unknown sections are
    skipped. Duplicate arcs collapse; self-loops raise.
    """
    n = None
    edges: list[tuple[int, int]] = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("*"):
            head = line.split()
            key = head[0].lower()
            if key == "*vertices":
                if len(head) < 2:
                    raise ParseError(f"line {lineno}: *Vertices needs a count")
                try:
                    n = int(head[1])
                except ValueError as exc:
                    raise ParseError(f"line {lineno}: bad vertex count") from exc
                if n < 0:
                    raise ParseError(f"line {lineno}: negative vertex count")
                section = "vertices"
            elif key == "*arcs":
                if n is None:
                    raise ParseError(f"line {lineno}: *Arcs before *Vertices")
                section = "arcs"
            elif key in ("*edges", "*edgeslist"):
                raise ParseError(
                    f"line {lineno}: undirected {head[0]} section not supported"
                )
            else:
                section = "skip"
            continue
        if section == "arcs":
            parts = line.split()
            if len(parts) < 2:
                raise ParseError(f"line {lineno}: arc line needs two endpoints")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: non-integer arc endpoint") from exc
            if not (1 <= u <= n) or not (1 <= v <= n):
                raise ParseError(f"line {lineno}: arc endpoint outside 1..{n}")
            if u == v:
                raise ParseError(f"line {lineno}: self-loop {u}->{v} rejected")
            edges.append((u - 1, v - 1))
    if n is None:
        raise ParseError("missing *Vertices header")
    return DirectedGraph.from_edges(n, edges)


def _decode_pair(code: int, n: int) -> tuple[int, int]:
    # codes 0..n(n-1)-1 enumerate ordered pairs with the diagonal removed
    u, r = divmod(code, n - 1)
    v = r if r < u else r + 1
    return u, v


def generate_erdos_renyi(n: int, l: int, seed: int) -> DirectedGraph:
    """Uniform simple directed graph with exactly ``l`` edges on ``n`` nodes."""
    if n < 0:
        raise ValueError("n must be >= 0")
    max_pairs = n * (n - 1)
    if not (0 <= l <= max_pairs):
        raise ValueError(f"l must be in 0..{max_pairs} for n={n}")
    if l == 0:
        return DirectedGraph.from_edges(n, [])
    rng = np.random.default_rng(seed)
    if l > max_pairs // 2:
        codes = rng.choice(max_pairs, size=l, replace=False)
    else:
        chosen: set[int] = set()
        while len(chosen) < l:
            batch = rng.integers(0, max_pairs, size=2 * (l - len(chosen)))
            for code in batch:
                chosen.add(int(code))
                if len(chosen) == l:
                    break
        codes = list(chosen)
    return DirectedGraph.from_edges(n, [_decode_pair(int(c), n) for c in codes])


def generate_scale_free(
    n: int, l: int, seed: int, gamma: float = 2.5
) -> DirectedGraph:
    """Static-model scale-free directed graph with exactly ``l`` edges.

    Node ``i`` (rank ``i + 1``) carries in- and out-weight proportional to
    ``(i + 1) ** (-1 / (gamma - 1))``; edge endpoints are drawn from those
    weights and rejected on self-loops and duplicates until ``l`` distinct
    edges exist. Raises :class:`GenerationError` if the rejection loop
    exhausts its attempt budget (the request was too dense for the weights).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if gamma <= 2.0:
        raise ValueError("gamma must be > 2")
    max_pairs = n * (n - 1)
    if not (0 <= l <= max_pairs):
        raise ValueError(f"l must be in 0..{max_pairs} for n={n}")
    if l == 0:
        return DirectedGraph.from_edges(n, [])
    alpha = 1.0 / (gamma - 1.0)
    weights = np.arange(1, n + 1, dtype=float) ** (-alpha)
    weights /= weights.sum()
    rng = np.random.default_rng(seed)
    chosen: set[tuple[int, int]] = set()
    budget = 250 * l + 10_000
    drawn = 0
    while len(chosen) < l and drawn < budget:
        batch = min(budget - drawn, max(1024, 2 * (l - len(chosen))))
        us = rng.choice(n, size=batch, p=weights)
        vs = rng.choice(n, size=batch, p=weights)
        drawn += batch
        for u, v in zip(us, vs):
            if u != v:
                chosen.add((int(u), int(v)))
                if len(chosen) == l:
                    break
    if len(chosen) < l:
        raise GenerationError(
            f"placed {len(chosen)}/{l} edges within {budget} draws "
            f"(n={n}, gamma={gamma}); the request is too dense for the weights"
        )
    return DirectedGraph.from_edges(n, chosen)


def degree_preserving_rewire(
    g: DirectedGraph, swap_factor: float, seed: int
) -> DirectedGraph:
    """Randomize a graph by directed double-edge swaps.

    Attempts ``ceil(swap_factor * L)`` swaps; each picks two random edges
    (u,v), (x,y) and rewires to (u,y), (x,v) unless that would create a
    self-loop or a duplicate. In- and out-degree sequences are preserved
    exactly. Graphs with fewer than two edges come back unchanged.
    """
    if swap_factor < 0:
        raise ValueError("swap_factor must be >= 0")
    edges = list(g.edges)
    m = len(edges)
    if m < 2:
        return DirectedGraph.from_edges(g.node_count, edges)
    present = set(edges)
    rng = random.Random(seed)
    attempts = math.ceil(swap_factor * m)
    for _ in range(attempts):
        i = rng.randrange(m)
        j = rng.randrange(m)
        if i == j:
            continue
        u, v = edges[i]
        x, y = edges[j]
        if u == y or x == v:
            continue
        if (u, y) in present or (x, v) in present:
            continue
        present.discard((u, v))
        present.discard((x, y))
        present.add((u, y))
        present.add((x, v))
        edges[i] = (u, y)
        edges[j] = (x, v)
    return DirectedGraph.from_edges(g.node_count, edges)


@dataclass(frozen=True)
class NetworkStats:
    """Scalar summary of a directed graph.

    ``k`` is the mean total degree 2L/N; ``r`` is the Pearson correlation of
    (source out-degree, target in-degree) over edges; ``c`` is the global
    clustering coefficient of the undirected projection. When ``r`` or ``c``
    is undefined (zero variance / no connected triples) it is reported as 0
    with the matching ``*_defined`` flag cleared.
    """

    n: int
    l: int
    k: float
    r: float
    c: float
    r_defined: bool
    c_defined: bool


#: How the degree correlation r is computed, recorded in output metadata.
DEGREE_CORRELATION_VARIANT = "pearson(out-degree of source, in-degree of target) over edges"


def network_stats(g: DirectedGraph) -> NetworkStats:
    """Compute :class:`NetworkStats` for a graph."""
    n = g.node_count
    l = g.edge_count
    k = (2.0 * l / n) if n else 0.0

    r = float("nan")
    r_defined = False
    if l >= 2:
        outd = g.out_degrees()
        ind = g.in_degrees()
        xs = np.array([outd[u] for u, _ in g.edges], dtype=float)
        ys = np.array([ind[v] for _, v in g.edges], dtype=float)
        if xs.std() > 0 and ys.std() > 0:
            r = float(np.corrcoef(xs, ys)[0, 1])
            r_defined = True

    und: list[set[int]] = [set() for _ in range(n)]
    for u, v in g.edges:
        und[u].add(v)
        und[v].add(u)
    triples = sum(d * (d - 1) // 2 for d in map(len, und))
    c = float("nan")
    c_defined = triples > 0
    if c_defined:
        triangles = 0
        for u in range(n):
            for v in und[u]:
                if v > u:
                    triangles += sum(1 for w in und[u] & und[v] if w > v)
        c = 3.0 * triangles / triples
    return NetworkStats(n=n, l=l, k=k, r=r, c=c, r_defined=r_defined, c_defined=c_defined)
