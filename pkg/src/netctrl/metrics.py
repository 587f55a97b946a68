"""Monte-Carlo estimation of per-node control statistics.

Repeatedly samples maximum matchings, decomposes each into a cactus, and
accumulates three per-node quantities:

* capacity ``k``: fraction of sampled minimum driver sets containing the node;
* range ``r``: largest max-mode territory seen for the node, as a fraction
  of N (an upper bound on how much of the network the node can control);
* contribution ``c = k * r``: capacity weighted by range, the headline
  score for picking driver nodes worth acting on.

Sampling stops once the convergence functional has been flat for a full
window of iterations, or at a hard iteration cap.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cactus import sample_cactus
from .graph import DirectedGraph
from .matching import driver_set, sample_matching
from .seeds import child_seeds

FUNCTIONALS = ("r-sum", "c-sum")


@dataclass
class EstimatorConfig:
    """Stopping rule and seeding for :func:`estimate`.

    The default functional "r-sum" tracks Q(t) = sum of running max
    territory fractions, which is non-decreasing, so epsilon = 0 detects
    exact flatness. "c-sum" tracks the literal sum of contribution
    estimates, which fluctuates with 1/t, and therefore requires
    epsilon > 0.
    """

    delta_window: int = 100
    epsilon: float = 0.0
    t_min: int = 100
    t_max: int | None = None  # None -> 100 * N, resolved at run time
    master_seed: int = 0
    walk_length_factor: float = 2.0
    functional: str = "r-sum"

    def validate(self) -> None:
        if self.delta_window < 1:
            raise ValueError("delta_window must be >= 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.t_min < 1:
            raise ValueError("t_min must be >= 1")
        if self.t_max is not None and self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        if self.functional not in FUNCTIONALS:
            raise ValueError(f"functional must be one of {FUNCTIONALS}")
        if self.functional == "c-sum" and self.epsilon <= 0:
            raise ValueError("the c-sum functional needs epsilon > 0 to ever stop")
        if self.walk_length_factor < 0:
            raise ValueError("walk_length_factor must be >= 0")


class TracePoint(NamedTuple):
    t: int
    q: float
    delta: float


@dataclass(eq=False)
class ControlEstimates:
    """Result of :func:`estimate`; arrays are indexed by node id."""

    node_count: int
    samples: int
    driver_counts: np.ndarray
    territory_sums: np.ndarray
    max_territory: np.ndarray
    capacity: np.ndarray
    control_range: np.ndarray
    contribution: np.ndarray
    mean_territory: np.ndarray
    converged: bool
    trace: list[TracePoint]
    config: EstimatorConfig


class ContributionRow(NamedTuple):
    node: int
    k: float
    r: float
    c: float
    mean_territory: float


# One sampling iteration, reduced to what the accumulator needs:
# (drivers, partition territory sizes, max-mode territory sizes), aligned.
IterationRecord = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


def _run_iteration(
    g: DirectedGraph, master_seed: int, t: int, walk_length_factor: float
) -> IterationRecord:
    """Sample one matching/cactus; pure function of (g, master_seed, t)."""
    match_seed, tie_seed, attach_seed = child_seeds(3, master_seed, t)
    m = sample_matching(g, match_seed, walk_length_factor)
    d = driver_set(g, m, tie_seed)
    sample = sample_cactus(g, m, d, attach_seed)
    parts = tuple(sample.territory_sizes[s] for s in d.drivers)
    maxes = tuple(sample.max_sizes[s] for s in d.drivers)
    return d.drivers, parts, maxes


def _iteration_batch(args) -> list[IterationRecord]:
    g, master_seed, walk_length_factor, ts = args
    return [_run_iteration(g, master_seed, t, walk_length_factor) for t in ts]


def _chunk_records(
    g: DirectedGraph,
    cfg: EstimatorConfig,
    lo: int,
    hi: int,
    pool: ProcessPoolExecutor | None,
    jobs: int,
) -> list[IterationRecord]:
    """Records for iterations lo..hi inclusive, in iteration order."""
    ts = list(range(lo, hi + 1))
    if pool is None:
        return _iteration_batch((g, cfg.master_seed, cfg.walk_length_factor, ts))
    slices = [ts[i::jobs] for i in range(jobs)]
    slices = [s for s in slices if s]
    parts = list(
        pool.map(
            _iteration_batch,
            [(g, cfg.master_seed, cfg.walk_length_factor, s) for s in slices],
        )
    )
    by_t: dict[int, IterationRecord] = {}
    for s, recs in zip(slices, parts):
        for t, rec in zip(s, recs):
            by_t[t] = rec
    return [by_t[t] for t in ts]


def estimate(
    g: DirectedGraph, config: EstimatorConfig | None = None, jobs: int = 1
) -> ControlEstimates:
    """Estimate capacity, range, and contribution for every node.

    Iteration t draws its seeds from (master_seed, t) only, so results are
    identical for any ``jobs`` value: parallel workers just precompute
    iterations ahead of the sequential convergence scan, and speculative
    iterations past the stopping point are discarded.
    """
    cfg = config or EstimatorConfig()
    cfg.validate()
    n = g.node_count
    if n == 0:
        raise ValueError("cannot estimate on an empty graph")
    t_max = cfg.t_max if cfg.t_max is not None else 100 * n

    counts = np.zeros(n, dtype=np.int64)
    sums = np.zeros(n, dtype=np.int64)
    maxes = np.zeros(n, dtype=np.int64)
    total_max = 0
    trace: list[TracePoint] = []
    streak = 0
    converged = False
    t = 0
    q_prev = 0.0

    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    chunk = max(cfg.delta_window, 8 * jobs) if pool is not None else 1
    try:
        while t < t_max and not converged:
            hi = min(t + chunk, t_max)
            for drivers, parts, maxs in _chunk_records(g, cfg, t + 1, hi, pool, jobs):
                t += 1
                for node, part, mx in zip(drivers, parts, maxs):
                    counts[node] += 1
                    sums[node] += part
                    if mx > maxes[node]:
                        total_max += mx - int(maxes[node])
                        maxes[node] = mx
                if cfg.functional == "r-sum":
                    q = total_max / n
                else:
                    q = float(np.dot(counts, maxes)) / (t * n)
                delta = 1.0 if t == 1 else (q - q_prev) / q_prev
                trace.append(TracePoint(t, q, delta))
                q_prev = q
                streak = streak + 1 if abs(delta) <= cfg.epsilon else 0
                if t >= cfg.t_min and streak >= cfg.delta_window:
                    converged = True
                    break
    finally:
        if pool is not None:
            pool.shutdown(wait=False, cancel_futures=True)

    capacity = counts / t
    control_range = maxes / n
    contribution = capacity * control_range
    mean_territory = np.divide(
        sums, counts, out=np.zeros(n, dtype=float), where=counts > 0
    )
    return ControlEstimates(
        node_count=n,
        samples=t,
        driver_counts=counts,
        territory_sums=sums,
        max_territory=maxes,
        capacity=capacity,
        control_range=control_range,
        contribution=contribution,
        mean_territory=mean_territory,
        converged=converged,
        trace=trace,
        config=cfg,
    )


def contribution_table(e: ControlEstimates) -> list[ContributionRow]:
    """Per-node rows (node, k, r, c, mean_territory), ordered by node id."""
    return [
        ContributionRow(
            node=i,
            k=float(e.capacity[i]),
            r=float(e.control_range[i]),
            c=float(e.contribution[i]),
            mean_territory=float(e.mean_territory[i]),
        )
        for i in range(e.node_count)
    ]
