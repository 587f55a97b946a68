"""Decompose a matched directed graph into stems and cycles and attach cycles.

Under a maximum matching, the node set splits into matched paths ("stems",
each rooted at a driver) and matched cycles. A cycle can be controlled by a
driver's input if some network edge leads from territory the driver already
controls into the cycle. Two attachment modes are provided:

* partition mode: every cycle is attached to exactly one driver, so the
  per-driver territories partition the node set (their sizes sum to N);
* max mode: each driver independently closes its stem over all reachable
  cycles, giving the largest territory the driver could control in this
  sample (sizes may overlap, so they can sum to more than N).

Cycles no driver can reach through network links ("never eligible") are
wired to a uniformly random driver in partition mode; the sampling pipeline
counts such wired cycles toward that driver's max-mode closure as well, so
the per-driver max is always at least the partition size.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .graph import DirectedGraph
from .matching import DriverSet, Matching

Stems = dict[int, tuple[int, ...]]
Cycles = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class CactusSample:
    """One stem/cycle decomposition with its cycle attachment.

    Attributes:
        stems: driver -> matched path starting at the driver.
        cycles: matched cycles, each listed from its smallest member,
            sorted by that member.
        cycle_owner: per-cycle owning driver from partition mode.
        witnesses: per-cycle network edge that justified the attachment
            (None for never-eligible cycles, which were wired at random).
        never_eligible: indices of cycles no driver could reach via links.
        territory_sizes: partition-mode territory size per driver.
        max_sizes: per-driver maximal closure size (counting cycles wired
            to that driver); empty until filled by :func:`sample_cactus`.
    """

    stems: Stems
    cycles: Cycles
    cycle_owner: tuple[int, ...]
    witnesses: tuple[tuple[int, int] | None, ...]
    never_eligible: tuple[int, ...]
    territory_sizes: dict[int, int]
    max_sizes: dict[int, int] = field(default_factory=dict)

    def territories(self) -> dict[int, tuple[int, ...]]:
        """Partition-mode node sets per driver, each sorted ascending."""
        nodes: dict[int, list[int]] = {d: list(path) for d, path in self.stems.items()}
        for ci, owner in enumerate(self.cycle_owner):
            nodes[owner].extend(self.cycles[ci])
        return {d: tuple(sorted(v)) for d, v in nodes.items()}

    def wired_attachments(self) -> dict[int, tuple[int, ...]]:
        """Driver -> entry nodes of the cycles wired to it without a witness.

        These cycles have no inbound network edge from outside, so full
        control requires the owning driver's input signal to feed one of
        their nodes directly (the smallest member is used). The result plugs
        straight into the dimension routines' ``attachments`` argument.
        """
        extra: dict[int, list[int]] = {}
        for ci in self.never_eligible:
            owner = self.cycle_owner[ci]
            extra.setdefault(owner, []).append(self.cycles[ci][0])
        return {d: tuple(sorted(v)) for d, v in extra.items()}


def decompose(g: DirectedGraph, m: Matching, d: DriverSet) -> tuple[Stems, Cycles]:
    """Split the graph into matched stems and matched cycles.

    Every driver must be an unmatched-in node of ``m``, except in the
    perfect-matching case, where the single chosen driver's matched in-edge
    is dropped from the matching view (turning its cycle into a stem).
    Raises ``ValueError`` when the matching and driver set are inconsistent.
    """
    n = g.node_count
    mo = list(m.match_out)
    mi = list(m.match_in)
    free_in = [v for v in range(n) if mi[v] is None]
    drivers = sorted(d.drivers)
    if n == 0:
        if drivers:
            raise ValueError("driver set non-empty for an empty graph")
        return {}, ()
    if not drivers:
        raise ValueError("driver set is empty")
    if not free_in:
        if m.size != n or len(drivers) != 1:
            raise ValueError(
                "matching saturates every node but the driver set is not a single node"
            )
        w = drivers[0]
        mo[mi[w]] = None
        mi[w] = None
    elif drivers != free_in:
        raise ValueError(
            f"driver set {drivers} does not match unmatched-in nodes {free_in}"
        )

    visited = [False] * n
    stems: Stems = {}
    for s in drivers:
        path = [s]
        visited[s] = True
        cur = s
        while mo[cur] is not None:
            cur = mo[cur]
            if visited[cur]:
                raise ValueError("matching is not a valid path/cycle cover")
            path.append(cur)
            visited[cur] = True
        stems[s] = tuple(path)

    cycles: list[tuple[int, ...]] = []
    for v in range(n):
        if visited[v]:
            continue
        cyc = [v]
        visited[v] = True
        cur = mo[v]
        steps = 0
        while cur != v:
            if cur is None or visited[cur] or steps > n:
                raise ValueError("matching is not a valid path/cycle cover")
            cyc.append(cur)
            visited[cur] = True
            cur = mo[cur]
            steps += 1
        cycles.append(tuple(cyc))
    return stems, tuple(cycles)


class _UnitGraph:
    """Condensed view: one unit per stem and per cycle, plus feed edges.

    ``feeders[ci]`` lists (unit, witness edge) pairs for units holding at
    least one edge into cycle ci, in canonical edge order; ``out_units`` is
    the reverse adjacency (unit -> cycle indices it feeds).
    """

    def __init__(self, g: DirectedGraph, stems: Stems, cycles: Cycles):
        self.drivers = sorted(stems)
        d = len(self.drivers)
        self.n_stems = d
        unit_of = [-1] * g.node_count
        for idx, s in enumerate(self.drivers):
            for node in stems[s]:
                unit_of[node] = idx
        for ci, cyc in enumerate(cycles):
            for node in cyc:
                unit_of[node] = d + ci
        self.unit_of = unit_of
        feeders: list[list[tuple[int, tuple[int, int]]]] = [[] for _ in cycles]
        seen: list[set[int]] = [set() for _ in cycles]
        for u, v in g.edges:
            tv = unit_of[v]
            if tv >= d and unit_of[u] != tv:
                ci = tv - d
                if unit_of[u] not in seen[ci]:
                    seen[ci].add(unit_of[u])
                    feeders[ci].append((unit_of[u], (u, v)))
        self.feeders = feeders
        out_units: list[list[int]] = [[] for _ in range(d + len(cycles))]
        for ci, lst in enumerate(feeders):
            for unit, _ in lst:
                out_units[unit].append(ci)
        self.out_units = out_units


def attach_cycles_partition(
    g: DirectedGraph, stems: Stems, cycles: Cycles, seed: int = 0
) -> CactusSample:
    """Attach every cycle to exactly one driver (territories partition N).

    Eligibility iterates to a fixpoint: a cycle is eligible for a driver once
    some edge runs from that driver's current territory into the cycle.
    Each round snapshots territories, processes newly eligible cycles in
    ascending smallest-member order, and resolves contested cycles uniformly
    at random. A cycle no territory can reach is wired to a uniformly random
    driver (witness None, index flagged), after which attachment resumes so
    its dependents can join normally.
    """
    units = _UnitGraph(g, stems, cycles)
    d = units.n_stems
    c = len(cycles)
    rng = random.Random(seed)
    owner = list(range(d)) + [-1] * c  # unit -> driver index (1:1 for stems)
    witnesses: list[tuple[int, int] | None] = [None] * c
    flagged: list[int] = []
    remaining = c
    while remaining:
        while True:
            snapshot = owner[:]
            newly: list[tuple[int, list[int]]] = []
            for ci in range(c):
                if owner[d + ci] >= 0:
                    continue
                eligible: list[int] = []
                for unit, _ in units.feeders[ci]:
                    ow = snapshot[unit]
                    if ow >= 0 and ow not in eligible:
                        eligible.append(ow)
                if eligible:
                    newly.append((ci, sorted(eligible)))
            if not newly:
                break
            for ci, eligible in newly:
                pick = eligible[rng.randrange(len(eligible))] if len(eligible) > 1 else eligible[0]
                owner[d + ci] = pick
                remaining -= 1
                for unit, edge in units.feeders[ci]:
                    if snapshot[unit] == pick:
                        witnesses[ci] = edge
                        break
        if remaining:
            ci = next(i for i in range(c) if owner[d + i] < 0)
            owner[d + ci] = rng.randrange(d) if d > 1 else 0
            flagged.append(ci)
            remaining -= 1

    driver_ids = units.drivers
    sizes = {s: len(stems[s]) for s in driver_ids}
    cycle_owner = []
    for ci in range(c):
        who = driver_ids[owner[d + ci]]
        cycle_owner.append(who)
        sizes[who] += len(cycles[ci])
    return CactusSample(
        stems=dict(stems),
        cycles=cycles,
        cycle_owner=tuple(cycle_owner),
        witnesses=tuple(witnesses),
        never_eligible=tuple(flagged),
        territory_sizes=sizes,
    )


def attach_cycles_max(
    g: DirectedGraph,
    stems: Stems,
    cycles: Cycles,
    pre_attached: dict[int, tuple[int, ...]] | None = None,
) -> dict[int, int]:
    """Per-driver maximal territory sizes, ignoring other drivers' claims.

    Each driver's stem is closed over cycle attachment through network
    links; cycles unreachable from the stem contribute nothing. When
    ``pre_attached`` maps a driver to cycle indices (cycles wired to its
    control signal by the partition step), those cycles seed the closure.
    """
    units = _UnitGraph(g, stems, cycles)
    return _max_closure(units, stems, cycles, pre_attached or {})


def _max_closure(
    units: _UnitGraph,
    stems: Stems,
    cycles: Cycles,
    pre_attached: dict[int, tuple[int, ...]],
) -> dict[int, int]:
    d = units.n_stems
    out_units = units.out_units
    sizes: dict[int, int] = {}
    for idx, s in enumerate(units.drivers):
        total = len(stems[s])
        stack = [idx]
        seen = set()
        for ci in pre_attached.get(s, ()):
            if ci not in seen:
                seen.add(ci)
                total += len(cycles[ci])
                stack.append(d + ci)
        while stack:
            x = stack.pop()
            for ci in out_units[x]:
                if ci not in seen:
                    seen.add(ci)
                    total += len(cycles[ci])
                    stack.append(d + ci)
        sizes[s] = total
    return sizes


def sample_cactus(
    g: DirectedGraph, m: Matching, d: DriverSet, seed: int = 0
) -> CactusSample:
    """Decompose under (m, d) and attach cycles in both modes.

    Returns a :class:`CactusSample` whose ``max_sizes`` closure counts the
    never-eligible cycles the partition wired to each driver, so that
    ``max_sizes[i] >= territory_sizes[i]`` holds for every driver.
    """
    stems, cycles = decompose(g, m, d)
    sample = attach_cycles_partition(g, stems, cycles, seed=seed)
    wired: dict[int, list[int]] = {}
    for ci in sample.never_eligible:
        wired.setdefault(sample.cycle_owner[ci], []).append(ci)
    units = _UnitGraph(g, stems, cycles)
    max_sizes = _max_closure(
        units, stems, cycles, {s: tuple(v) for s, v in wired.items()}
    )
    return replace(sample, max_sizes=max_sizes)
